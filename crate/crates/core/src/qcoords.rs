//! Quadrilateral coordinates: oriented and unoriented quad types, slopes,
//! matching systems, admissibility, and edge translations.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use spunnorm_exact::{Rat, RatMatrix};

use crate::error::{Error, Result};
use crate::tri::{perm_sign, EdgeClass, IdealTriangulation};

/// The six vertex pairs, in the serialization order q01,...,q23.
pub const PAIRS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn pair_index(a: u8, b: u8) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("vertex pair")
}

pub fn complement(pair: (u8, u8)) -> (u8, u8) {
    let mut rest: Vec<u8> = (0..4u8).filter(|&v| v != pair.0 && v != pair.1).collect();
    rest.sort();
    (rest[0], rest[1])
}

/// Unoriented quad kind in a tetrahedron. Kind k separates the vertex
/// pair containing 0 from its complement: 0 = 01|23, 1 = 02|13, 2 = 03|12.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct QuadType {
    pub tet: usize,
    pub kind: u8,
}

/// Transversely oriented quad type: the pair (a, b) is the positive side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct OrientedQuadType {
    pub tet: usize,
    pub pos: (u8, u8),
}

impl OrientedQuadType {
    pub fn index(&self) -> usize {
        6 * self.tet + pair_index(self.pos.0, self.pos.1)
    }

    pub fn from_index(i: usize) -> Self {
        OrientedQuadType {
            tet: i / 6,
            pos: PAIRS[i % 6],
        }
    }

    pub fn reversed(&self) -> Self {
        OrientedQuadType {
            tet: self.tet,
            pos: complement(self.pos),
        }
    }

    pub fn forget(&self) -> QuadType {
        let kind = if self.pos.0 == 0 || self.pos.1 == 0 {
            pair_index(self.pos.0, self.pos.1) as u8
        } else {
            let c = complement(self.pos);
            pair_index(c.0, c.1) as u8
        };
        QuadType {
            tet: self.tet,
            kind,
        }
    }
}

impl QuadType {
    pub fn index(&self) -> usize {
        3 * self.tet + self.kind as usize
    }

    pub fn from_index(i: usize) -> Self {
        QuadType {
            tet: i / 3,
            kind: (i % 3) as u8,
        }
    }

    /// The two vertex pairs this quad separates; `.0` contains vertex 0.
    pub fn pairs(&self) -> ((u8, u8), (u8, u8)) {
        let p = PAIRS[self.kind as usize];
        (p, complement(p))
    }

    /// The pair of opposite tetrahedron edges disjoint from this quad.
    pub fn disjoint_edges(&self) -> [(u8, u8); 2] {
        let (p, c) = self.pairs();
        [p, c]
    }

    /// True when the quad has a corner on the tetrahedron edge {a, b}.
    pub fn meets_edge(&self, a: u8, b: u8) -> bool {
        let (p, _) = self.pairs();
        let in_p = |v: u8| v == p.0 || v == p.1;
        in_p(a) != in_p(b)
    }
}

/// Sparse nonnegative vector indexed by oriented quad types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedQuadVector {
    pub num_tets: usize,
    coords: BTreeMap<usize, Rat>,
}

/// Sparse nonnegative vector indexed by unoriented quad types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnorientedQuadVector {
    pub num_tets: usize,
    coords: BTreeMap<usize, Rat>,
}

impl OrientedQuadVector {
    pub fn zero(num_tets: usize) -> Self {
        OrientedQuadVector {
            num_tets,
            coords: BTreeMap::new(),
        }
    }

    pub fn from_dense(vals: &[Rat]) -> Self {
        assert!(vals.len() % 6 == 0);
        let mut v = Self::zero(vals.len() / 6);
        for (i, x) in vals.iter().enumerate() {
            v.set(OrientedQuadType::from_index(i), x.clone());
        }
        v
    }

    pub fn from_ints(num_tets: usize, entries: &[(usize, (u8, u8), i64)]) -> Self {
        let mut v = Self::zero(num_tets);
        for &(tet, pos, n) in entries {
            v.set(OrientedQuadType { tet, pos }, Rat::from_integer(n.into()));
        }
        v
    }

    pub fn get(&self, q: OrientedQuadType) -> Rat {
        self.coords
            .get(&q.index())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, q: OrientedQuadType, val: Rat) {
        if val.is_zero() {
            self.coords.remove(&q.index());
        } else {
            self.coords.insert(q.index(), val);
        }
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (OrientedQuadType, &Rat)> {
        self.coords
            .iter()
            .map(|(&i, v)| (OrientedQuadType::from_index(i), v))
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); 6 * self.num_tets];
        for (&i, v) in &self.coords {
            out[i] = v.clone();
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.values().all(|v| !v.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.values().all(|v| v.is_integer())
    }

    pub fn is_zero_vec(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_tets, other.num_tets);
        let mut out = self.clone();
        for (q, v) in other.iter_nonzero() {
            let cur = out.get(q);
            out.set(q, cur + v);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.num_tets);
        for (q, v) in self.iter_nonzero() {
            out.set(q, v * c);
        }
        out
    }

    pub fn reversal(&self) -> Self {
        let mut out = Self::zero(self.num_tets);
        for (q, v) in self.iter_nonzero() {
            out.set(q.reversed(), v.clone());
        }
        out
    }
}

impl UnorientedQuadVector {
    pub fn zero(num_tets: usize) -> Self {
        UnorientedQuadVector {
            num_tets,
            coords: BTreeMap::new(),
        }
    }

    pub fn from_dense(vals: &[Rat]) -> Self {
        assert!(vals.len() % 3 == 0);
        let mut v = Self::zero(vals.len() / 3);
        for (i, x) in vals.iter().enumerate() {
            v.set(QuadType::from_index(i), x.clone());
        }
        v
    }

    pub fn get(&self, q: QuadType) -> Rat {
        self.coords
            .get(&q.index())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, q: QuadType, val: Rat) {
        if val.is_zero() {
            self.coords.remove(&q.index());
        } else {
            self.coords.insert(q.index(), val);
        }
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (QuadType, &Rat)> {
        self.coords
            .iter()
            .map(|(&i, v)| (QuadType::from_index(i), v))
    }

    pub fn to_dense(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); 3 * self.num_tets];
        for (&i, v) in &self.coords {
            out[i] = v.clone();
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.values().all(|v| !v.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.values().all(|v| v.is_integer())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_tets, other.num_tets);
        let mut out = self.clone();
        for (q, v) in other.iter_nonzero() {
            let cur = out.get(q);
            out.set(q, cur + v);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.num_tets);
        for (q, v) in self.iter_nonzero() {
            out.set(q, v * c);
        }
        out
    }
}

/// Forgets transverse orientations by summing the two oriented
/// coordinates over each unoriented type.
pub fn forget_orientation(x: &OrientedQuadVector) -> UnorientedQuadVector {
    let mut out = UnorientedQuadVector::zero(x.num_tets);
    for (q, v) in x.iter_nonzero() {
        let u = q.forget();
        let cur = out.get(u);
        out.set(u, cur + v);
    }
    out
}

/// Admissibility: nonnegative, and in each tetrahedron at most one
/// unoriented quad type is nonzero.
pub fn is_admissible_unoriented(x: &UnorientedQuadVector) -> bool {
    if !x.is_nonnegative() {
        return false;
    }
    let mut kind_seen: BTreeMap<usize, u8> = BTreeMap::new();
    for (q, _) in x.iter_nonzero() {
        if let Some(&k) = kind_seen.get(&q.tet) {
            if k != q.kind {
                return false;
            }
        } else {
            kind_seen.insert(q.tet, q.kind);
        }
    }
    true
}

pub fn is_admissible(x: &OrientedQuadVector) -> bool {
    x.is_nonnegative() && is_admissible_unoriented(&forget_orientation(x))
}

/// Slope of a quad type at a tetrahedron edge occurrence: 0 when the quad
/// misses the edge, otherwise the sign of the vertex permutation (i j x y)
/// times the tetrahedron's coherent orientation, where the quad separates
/// {i, x} from {j, y} and the edge is {i, j}.
pub fn slope(tri: &IdealTriangulation, quad: QuadType, a: u8, b: u8) -> i8 {
    if !quad.meets_edge(a, b) {
        return 0;
    }
    let (p, c) = quad.pairs();
    let in_p = |v: u8| v == p.0 || v == p.1;
    // i on the P side of the edge, j on the complement side.
    let (i, j) = if in_p(a) { (a, b) } else { (b, a) };
    let x = if p.0 == i { p.1 } else { p.0 };
    let y = if c.0 == j { c.1 } else { c.0 };
    perm_sign(&[i, j, x, y]) * tri.sign(quad.tet)
}

/// Oriented and unoriented matching systems. Oriented rows come in pairs:
/// row 2e is the stored orientation of edge class e, row 2e+1 its reverse.
#[derive(Clone, Debug)]
pub struct MatchingSystem {
    pub oriented: RatMatrix,
    pub unoriented: RatMatrix,
    pub row_labels: Vec<(usize, bool)>,
}

/// Coefficient of the oriented quad type in the matching row of the edge
/// class oriented so the occurrence pairs run tail -> head.
fn oriented_coefficient(tri: &IdealTriangulation, e: &EdgeClass, forward: bool) -> Vec<i64> {
    let mut row = vec![0i64; 6 * tri.num_tets()];
    for step in &e.around {
        let (tail, head) = if forward {
            step.pair
        } else {
            (step.pair.1, step.pair.0)
        };
        for (pi, &pos) in PAIRS.iter().enumerate() {
            let q = OrientedQuadType { tet: step.tet, pos };
            let u = q.forget();
            if !u.meets_edge(tail, head) {
                continue;
            }
            // The corner's induced orientation points toward the element
            // of the positive pair; it matches e when that element is the
            // head.
            let in_pos = |v: u8| v == pos.0 || v == pos.1;
            if !in_pos(head) {
                continue;
            }
            row[6 * step.tet + pi] += slope(tri, u, tail, head) as i64;
        }
    }
    row
}

pub fn build_matching(tri: &IdealTriangulation) -> MatchingSystem {
    let t = tri.num_tets();
    let mut oriented_rows = Vec::new();
    let mut unoriented_rows = Vec::new();
    let mut row_labels = Vec::new();
    for e in tri.edges() {
        let fwd = oriented_coefficient(tri, e, true);
        let rev = oriented_coefficient(tri, e, false);
        // Unoriented (Tollefson) row: image of the sum of the two oriented
        // rows under the forgetful column identification.
        let mut uno = vec![0i64; 3 * t];
        for i in 0..6 * t {
            let q = OrientedQuadType::from_index(i);
            uno[q.forget().index()] += fwd[i] + rev[i];
        }
        for u in uno.iter_mut() {
            // Each unoriented coefficient is counted once from each of the
            // two orientations of the quad.
            debug_assert!(*u % 2 == 0);
            *u /= 2;
        }
        oriented_rows.push(fwd.iter().map(|&v| Rat::from_integer(v.into())).collect());
        oriented_rows.push(rev.iter().map(|&v| Rat::from_integer(v.into())).collect());
        unoriented_rows.push(uno.iter().map(|&v| Rat::from_integer(v.into())).collect());
        row_labels.push((e.id, true));
        row_labels.push((e.id, false));
    }
    MatchingSystem {
        oriented: RatMatrix::from_rows(oriented_rows),
        unoriented: RatMatrix::from_rows(unoriented_rows),
        row_labels,
    }
}

impl MatchingSystem {
    pub fn satisfies_oriented(&self, x: &OrientedQuadVector) -> bool {
        self.oriented
            .mul_vec(&x.to_dense())
            .iter()
            .all(|v| v.is_zero())
    }

    pub fn satisfies_unoriented(&self, x: &UnorientedQuadVector) -> bool {
        self.unoriented
            .mul_vec(&x.to_dense())
            .iter()
            .all(|v| v.is_zero())
    }
}

/// Per-step corner-label shifts around an oriented edge class, for an
/// oriented vector: only quads whose transverse orientation points toward
/// the head contribute. The composed shift equals the matching row value.
pub fn edge_translation(
    tri: &IdealTriangulation,
    edge: usize,
    forward: bool,
    x: &OrientedQuadVector,
) -> (Vec<Rat>, Rat) {
    let e = &tri.edges()[edge];
    let mut shifts = Vec::with_capacity(e.around.len());
    let mut total = Rat::zero();
    for step in &e.around {
        let (tail, head) = if forward {
            step.pair
        } else {
            (step.pair.1, step.pair.0)
        };
        let mut shift = Rat::zero();
        for &pos in PAIRS.iter() {
            let q = OrientedQuadType { tet: step.tet, pos };
            let u = q.forget();
            if !u.meets_edge(tail, head) {
                continue;
            }
            let in_pos = |v: u8| v == pos.0 || v == pos.1;
            if !in_pos(head) {
                continue;
            }
            let s = slope(tri, u, tail, head);
            shift += Rat::from_integer(s.into()) * x.get(q);
        }
        total += &shift;
        shifts.push(shift);
    }
    (shifts, total)
}

/// Unoriented per-step shifts (the Dunfield-Garoufalidis shift): every
/// corner contributes with its slope sign. The composed shift equals the
/// unoriented matching row value.
pub fn edge_translation_unoriented(
    tri: &IdealTriangulation,
    edge: usize,
    x: &UnorientedQuadVector,
) -> (Vec<Rat>, Rat) {
    let e = &tri.edges()[edge];
    let mut shifts = Vec::with_capacity(e.around.len());
    let mut total = Rat::zero();
    for step in &e.around {
        let (a, b) = step.pair;
        let mut shift = Rat::zero();
        for kind in 0..3u8 {
            let q = QuadType {
                tet: step.tet,
                kind,
            };
            let s = slope(tri, q, a, b);
            if s != 0 {
                shift += Rat::from_integer(s.into()) * x.get(q);
            }
        }
        total += &shift;
        shifts.push(shift);
    }
    (shifts, total)
}

/// Parses a JSON array of integers in the serialization order into an
/// oriented (6t entries) or unoriented (3t entries) vector.
pub fn parse_vector_json(
    tri: &IdealTriangulation,
    text: &str,
    oriented: bool,
) -> Result<(Option<OrientedQuadVector>, UnorientedQuadVector)> {
    let vals: Vec<i64> = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let t = tri.num_tets();
    let expected = if oriented { 6 * t } else { 3 * t };
    if vals.len() != expected {
        return Err(Error::VectorLength {
            expected,
            got: vals.len(),
        });
    }
    let rats: Vec<Rat> = vals.iter().map(|&v| Rat::from_integer(v.into())).collect();
    if oriented {
        let x = OrientedQuadVector::from_dense(&rats);
        let u = forget_orientation(&x);
        Ok((Some(x), u))
    } else {
        Ok((None, UnorientedQuadVector::from_dense(&rats)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spunnorm_exact::rat;

    #[test]
    fn pair_indexing_round_trips() {
        for i in 0..6 {
            let q = OrientedQuadType::from_index(i);
            assert_eq!(q.index(), i);
        }
        assert_eq!(pair_index(2, 0), 1);
        assert_eq!(complement((0, 3)), (1, 2));
    }

    #[test]
    fn forget_identifies_opposite_orientations() {
        let q = OrientedQuadType {
            tet: 1,
            pos: (0, 3),
        };
        assert_eq!(q.forget(), q.reversed().forget());
        assert_eq!(q.forget().kind, 2);
        assert_eq!(q.reversed().pos, (1, 2));
    }

    #[test]
    fn quad_edge_incidence() {
        let q = QuadType { tet: 0, kind: 0 }; // 01|23
        assert!(!q.meets_edge(0, 1));
        assert!(!q.meets_edge(2, 3));
        assert!(q.meets_edge(0, 2));
        assert_eq!(q.disjoint_edges(), [(0, 1), (2, 3)]);
    }

    #[test]
    fn admissibility_checks() {
        let mut x = UnorientedQuadVector::zero(2);
        x.set(QuadType { tet: 0, kind: 1 }, rat(3));
        x.set(QuadType { tet: 1, kind: 0 }, rat(2));
        assert!(is_admissible_unoriented(&x));
        x.set(QuadType { tet: 0, kind: 2 }, rat(1));
        assert!(!is_admissible_unoriented(&x));
        x.set(QuadType { tet: 0, kind: 2 }, rat(-1));
        assert!(!is_admissible_unoriented(&x));
    }
}
