//! Ideal triangulation data model: gluing tables, coherent orientations,
//! edge classes, cusp cross-sections and peripheral curves.

pub mod basis;
pub mod native;
pub mod snappea;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Permutation of the vertex labels {0,1,2,3}.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub fn identity() -> Self {
        Perm([0, 1, 2, 3])
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = [0u8; 4];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = [false; 4];
        for &v in &self.0 {
            if v > 3 || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    pub fn sign(&self) -> i8 {
        let mut sign = 1i8;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    sign = -sign;
                }
            }
        }
        sign
    }
}

/// Sign of a permutation of distinct small integers, given as a slice.
pub fn perm_sign(vals: &[u8]) -> i8 {
    let mut sign = 1i8;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if vals[i] > vals[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// One face pairing entry: face `face` of a tetrahedron is glued to
/// tetrahedron `tet` via `perm` (carrying source vertex labels to target
/// vertex labels).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

/// One wedge of the walk around an edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeStep {
    pub tet: usize,
    /// Ordered vertex pair of this occurrence, consistent with the class
    /// orientation (tail, head).
    pub pair: (u8, u8),
    pub enter_face: u8,
    pub leave_face: u8,
}

#[derive(Clone, Debug)]
pub struct EdgeClass {
    pub id: usize,
    pub around: Vec<EdgeStep>,
    /// Vertex classes of (tail, head).
    pub endpoints: (usize, usize),
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.around.len()
    }
}

/// A normal-curve step: the curve crosses the cusp triangle at ideal
/// vertex `vertex` of `tet`, entering through its side in face `enter`
/// and leaving through its side in face `exit`.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct CurveStep {
    pub tet: usize,
    pub vertex: u8,
    pub enter: u8,
    pub exit: u8,
}

/// Closed oriented normal curve on one cusp cross-section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralCurve {
    pub cusp: usize,
    pub steps: Vec<CurveStep>,
}

/// The (meridian, longitude) pair used on one cusp.
#[derive(Clone, Debug)]
pub struct CuspBasis {
    pub mu: PeripheralCurve,
    pub lambda: PeripheralCurve,
    /// True when the basis was derived internally rather than read from
    /// the input file; slope reports are then flagged.
    pub internal: bool,
}

/// Combinatorial cusp cross-section: the torus made of the cusp triangles
/// at one vertex class.
#[derive(Clone, Debug)]
pub struct CuspCrossSection {
    pub id: usize,
    /// Corners (tet, vertex) in this cusp, sorted.
    pub triangles: Vec<(usize, u8)>,
}

/// Side of a cusp triangle: the arc of the triangle at `vertex` lying in
/// face `face` of `tet`.
pub type Side = (usize, u8, u8);

/// Corner of a cusp triangle: the corner of the triangle at `vertex`
/// facing the tetrahedron edge {vertex, other}.
pub type Corner = (usize, u8, u8);

#[derive(Clone, Debug)]
pub struct IdealTriangulation {
    num_tets: usize,
    gluings: Vec<[Gluing; 4]>,
    orientation: Vec<i8>,
    edges: Vec<EdgeClass>,
    /// (edge class index, true when the occurrence pair (a,b) with a<b
    /// matches the class orientation) for each (tet, unordered edge).
    edge_lookup: BTreeMap<(usize, u8, u8), (usize, bool)>,
    vertex_class: Vec<[usize; 4]>,
    cusps: Vec<CuspCrossSection>,
    side_class: BTreeMap<Side, usize>,
    side_reps: Vec<[Side; 2]>,
    corner_class: BTreeMap<Corner, usize>,
    num_corner_classes: usize,
    bases: Vec<CuspBasis>,
}

impl IdealTriangulation {
    /// Validates a gluing table, derives all combinatorial structure, and
    /// attaches peripheral curves (deriving an internal basis when the
    /// input supplies none).
    pub fn new(
        num_tets: usize,
        gluings: Vec<[Gluing; 4]>,
        peripheral: Vec<(usize, PeripheralCurve, PeripheralCurve)>,
    ) -> Result<Self> {
        Self::new_with_labels(num_tets, gluings, peripheral, None)
    }

    /// As `new`, but with an externally imposed cusp numbering given as
    /// the cusp label of every (tet, vertex).
    pub fn new_with_labels(
        num_tets: usize,
        gluings: Vec<[Gluing; 4]>,
        peripheral: Vec<(usize, PeripheralCurve, PeripheralCurve)>,
        labels: Option<&[[usize; 4]]>,
    ) -> Result<Self> {
        if num_tets == 0 {
            return Err(Error::EmptyTriangulation);
        }
        assert_eq!(gluings.len(), num_tets);
        validate_gluings(num_tets, &gluings)?;
        let orientation = orient(num_tets, &gluings)?;
        let mut vertex_class = vertex_classes(num_tets, &gluings);
        if let Some(labels) = labels {
            vertex_class = relabel_classes(&vertex_class, labels)?;
        }
        let edges = edge_classes(num_tets, &gluings, &vertex_class)?;
        let mut edge_lookup = BTreeMap::new();
        for e in &edges {
            for step in &e.around {
                let (a, b) = step.pair;
                let key = (step.tet, a.min(b), a.max(b));
                let forward = a < b;
                edge_lookup.insert(key, (e.id, forward));
            }
        }

        let num_cusps = 1 + vertex_class
            .iter()
            .flat_map(|r| r.iter())
            .max()
            .copied()
            .unwrap_or(0);
        let mut cusps: Vec<CuspCrossSection> = (0..num_cusps)
            .map(|id| CuspCrossSection {
                id,
                triangles: Vec::new(),
            })
            .collect();
        for tet in 0..num_tets {
            for v in 0..4u8 {
                cusps[vertex_class[tet][v as usize]]
                    .triangles
                    .push((tet, v));
            }
        }

        // Cusp edge (side) classes: each side glues to exactly one partner.
        let mut side_class = BTreeMap::new();
        let mut side_reps = Vec::new();
        for tet in 0..num_tets {
            for v in 0..4u8 {
                for f in 0..4u8 {
                    if f == v {
                        continue;
                    }
                    let side: Side = (tet, v, f);
                    if side_class.contains_key(&side) {
                        continue;
                    }
                    let partner = side_partner(&gluings, side);
                    let id = side_reps.len();
                    side_class.insert(side, id);
                    side_class.insert(partner, id);
                    side_reps.push([side, partner]);
                }
            }
        }

        // Cusp vertex (corner) classes via union-find over side gluings.
        let mut corner_ids: BTreeMap<Corner, usize> = BTreeMap::new();
        let mut all_corners: Vec<Corner> = Vec::new();
        for tet in 0..num_tets {
            for v in 0..4u8 {
                for w in 0..4u8 {
                    if w != v {
                        corner_ids.insert((tet, v, w), all_corners.len());
                        all_corners.push((tet, v, w));
                    }
                }
            }
        }
        let mut uf = UnionFind::new(all_corners.len());
        for tet in 0..num_tets {
            for v in 0..4u8 {
                for f in 0..4u8 {
                    if f == v {
                        continue;
                    }
                    let g = gluings[tet][f as usize];
                    for w in 0..4u8 {
                        if w == v || w == f {
                            continue;
                        }
                        let a = corner_ids[&(tet, v, w)];
                        let b = corner_ids[&(g.tet, g.perm.apply(v), g.perm.apply(w))];
                        uf.union(a, b);
                    }
                }
            }
        }
        let mut corner_class = BTreeMap::new();
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        for (corner, &idx) in &corner_ids {
            let root = uf.find(idx);
            let next = relabel.len();
            let id = *relabel.entry(root).or_insert(next);
            corner_class.insert(*corner, id);
        }
        let num_corner_classes = relabel.len();

        let mut tri = IdealTriangulation {
            num_tets,
            gluings,
            orientation,
            edges,
            edge_lookup,
            vertex_class,
            cusps,
            side_class,
            side_reps,
            corner_class,
            num_corner_classes,
            bases: Vec::new(),
        };
        tri.check_torus_cusps()?;
        tri.attach_bases(peripheral)?;
        Ok(tri)
    }

    fn check_torus_cusps(&self) -> Result<()> {
        let mut class_cusp = vec![usize::MAX; self.num_corner_classes];
        for (&(tet, v, _), &id) in &self.corner_class {
            class_cusp[id] = self.vertex_class[tet][v as usize];
        }
        for cusp in &self.cusps {
            let f = cusp.triangles.len() as i64;
            let e = (3 * f) / 2;
            let v = class_cusp.iter().filter(|&&c| c == cusp.id).count() as i64;
            let chi = v - e + f;
            if chi != 0 {
                return Err(Error::NonTorusCusp { cusp: cusp.id, chi });
            }
        }
        Ok(())
    }

    fn attach_bases(
        &mut self,
        peripheral: Vec<(usize, PeripheralCurve, PeripheralCurve)>,
    ) -> Result<()> {
        let mut provided: BTreeMap<usize, (PeripheralCurve, PeripheralCurve)> = BTreeMap::new();
        for (cusp, mu, lambda) in peripheral {
            if cusp >= self.cusps.len() {
                return Err(Error::BadPeripheralCurve(format!(
                    "cusp index {cusp} out of range"
                )));
            }
            provided.insert(cusp, (mu, lambda));
        }
        let mut bases = Vec::new();
        for cusp in 0..self.cusps.len() {
            let basis = match provided.remove(&cusp) {
                Some((mu, lambda)) => {
                    basis::validate_curve(self, &mu)?;
                    basis::validate_curve(self, &lambda)?;
                    basis::normalize_basis(self, mu, lambda, false)?
                }
                None => basis::derive_cusp_basis(self, cusp)?,
            };
            bases.push(basis);
        }
        self.bases = bases;
        Ok(())
    }

    pub fn num_tets(&self) -> usize {
        self.num_tets
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// Coherent orientation sign of a tetrahedron.
    pub fn sign(&self, tet: usize) -> i8 {
        self.orientation[tet]
    }

    pub fn edges(&self) -> &[EdgeClass] {
        &self.edges
    }

    /// Edge class and orientation agreement for the occurrence (tet, a, b):
    /// the bool is true when a -> b matches the class orientation.
    pub fn edge_of(&self, tet: usize, a: u8, b: u8) -> (usize, bool) {
        let key = (tet, a.min(b), a.max(b));
        let (id, fwd) = self.edge_lookup[&key];
        if a < b {
            (id, fwd)
        } else {
            (id, !fwd)
        }
    }

    pub fn cusps(&self) -> &[CuspCrossSection] {
        &self.cusps
    }

    pub fn cusp_of(&self, tet: usize, vertex: u8) -> usize {
        self.vertex_class[tet][vertex as usize]
    }

    pub fn num_side_classes(&self) -> usize {
        self.side_reps.len()
    }

    pub fn side_class(&self, side: Side) -> usize {
        self.side_class[&side]
    }

    pub fn side_rep(&self, class: usize) -> [Side; 2] {
        self.side_reps[class]
    }

    /// The side glued to the given cusp-triangle side.
    pub fn side_partner(&self, side: Side) -> Side {
        side_partner(&self.gluings, side)
    }

    pub fn corner_class(&self, corner: Corner) -> usize {
        self.corner_class[&corner]
    }

    pub fn num_corner_classes(&self) -> usize {
        self.num_corner_classes
    }

    pub fn bases(&self) -> &[CuspBasis] {
        &self.bases
    }

    /// Positively oriented cyclic corner order of the cusp triangle at
    /// (tet, v), for the cusp torus oriented away from the ideal vertex.
    /// The parity is pinned by the figure-8 calibration: the stored bases
    /// must satisfy iota(lambda, mu) = +1 with the knot-theoretic pair.
    pub fn triangle_cycle(&self, tet: usize, v: u8) -> [u8; 3] {
        let mut others: Vec<u8> = (0..4u8).filter(|&w| w != v).collect();
        let flip = self.orientation[tet] * if v % 2 == 0 { -1 } else { 1 };
        if flip < 0 {
            others.swap(1, 2);
        }
        [others[0], others[1], others[2]]
    }
}

fn side_partner(gluings: &[[Gluing; 4]], (tet, v, f): Side) -> Side {
    let g = gluings[tet][f as usize];
    (g.tet, g.perm.apply(v), g.perm.apply(f))
}

fn validate_gluings(num_tets: usize, gluings: &[[Gluing; 4]]) -> Result<()> {
    for (tet, faces) in gluings.iter().enumerate() {
        for (face, g) in faces.iter().enumerate() {
            let face = face as u8;
            if g.tet >= num_tets {
                return Err(Error::GluingOutOfRange { tet, face });
            }
            if !g.perm.is_valid() {
                return Err(Error::BadPermutation {
                    tet,
                    face,
                    perm: g.perm.0,
                });
            }
            // The excluded vertex must map to the excluded vertex of the
            // target face.
            let target_face = g.perm.apply(face);
            if g.tet == tet && target_face == face {
                return Err(Error::SelfGluedFace { tet, face });
            }
            let back = gluings[g.tet][target_face as usize];
            if back.tet != tet
                || back.perm != g.perm.inverse()
                || back.perm.apply(target_face) != face
            {
                return Err(Error::InvolutionViolation { tet, face });
            }
        }
    }
    Ok(())
}

/// Coherent orientation: sign(tet 0) = +1 and every gluing permutation is
/// odd after composing with the two tetrahedron signs.
fn orient(num_tets: usize, gluings: &[[Gluing; 4]]) -> Result<Vec<i8>> {
    let mut sign = vec![0i8; num_tets];
    let mut stack = vec![0usize];
    sign[0] = 1;
    while let Some(tet) = stack.pop() {
        for face in 0..4usize {
            let g = gluings[tet][face];
            let want = -sign[tet] * g.perm.sign();
            if sign[g.tet] == 0 {
                sign[g.tet] = want;
                stack.push(g.tet);
            } else if sign[g.tet] != want {
                return Err(Error::NonOrientable { tet: g.tet });
            }
        }
    }
    if sign.iter().any(|&s| s == 0) {
        // Disconnected triangulations are rejected as unsupported input.
        return Err(Error::Other("triangulation is not connected".to_string()));
    }
    Ok(sign)
}

/// Replaces internal vertex-class ids by externally supplied cusp labels,
/// checking the labeling is constant on classes and a bijection onto
/// 0..num_cusps.
fn relabel_classes(vertex_class: &[[usize; 4]], labels: &[[usize; 4]]) -> Result<Vec<[usize; 4]>> {
    let num_classes = 1 + vertex_class
        .iter()
        .flat_map(|r| r.iter())
        .max()
        .copied()
        .unwrap_or(0);
    let mut label_of = vec![usize::MAX; num_classes];
    for (tet, row) in vertex_class.iter().enumerate() {
        for v in 0..4 {
            let class = row[v];
            let label = labels[tet][v];
            if label_of[class] == usize::MAX {
                label_of[class] = label;
            } else if label_of[class] != label {
                return Err(Error::Other(format!(
                    "cusp labels inconsistent at tetrahedron {tet} vertex {v}"
                )));
            }
        }
    }
    let mut seen = vec![false; num_classes];
    for &l in &label_of {
        if l >= num_classes || seen[l] {
            return Err(Error::Other("cusp labels are not a bijection".into()));
        }
        seen[l] = true;
    }
    Ok(vertex_class
        .iter()
        .map(|row| {
            let mut out = [0usize; 4];
            for v in 0..4 {
                out[v] = label_of[row[v]];
            }
            out
        })
        .collect())
}

fn vertex_classes(num_tets: usize, gluings: &[[Gluing; 4]]) -> Vec<[usize; 4]> {
    let mut uf = UnionFind::new(4 * num_tets);
    for tet in 0..num_tets {
        for face in 0..4u8 {
            let g = gluings[tet][face as usize];
            for v in 0..4u8 {
                if v == face {
                    continue;
                }
                uf.union(4 * tet + v as usize, 4 * g.tet + g.perm.apply(v) as usize);
            }
        }
    }
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = vec![[0usize; 4]; num_tets];
    for tet in 0..num_tets {
        for v in 0..4usize {
            let root = uf.find(4 * tet + v);
            let next = relabel.len();
            out[tet][v] = *relabel.entry(root).or_insert(next);
        }
    }
    out
}

/// Partitions the 6t tetrahedron edges into classes by walking around
/// each edge through the face pairings.
fn edge_classes(
    num_tets: usize,
    gluings: &[[Gluing; 4]],
    vertex_class: &[[usize; 4]],
) -> Result<Vec<EdgeClass>> {
    let mut seen: BTreeMap<(usize, u8, u8), bool> = BTreeMap::new();
    let mut classes: Vec<EdgeClass> = Vec::new();
    for tet in 0..num_tets {
        for a in 0..4u8 {
            for b in a + 1..4u8 {
                if seen.contains_key(&(tet, a, b)) {
                    continue;
                }
                let id = classes.len();
                let faces: Vec<u8> = (0..4u8).filter(|&f| f != a && f != b).collect();
                let start = EdgeStep {
                    tet,
                    pair: (a, b),
                    enter_face: faces[0],
                    leave_face: faces[1],
                };
                let mut around = vec![start];
                loop {
                    let cur = *around.last().unwrap();
                    let g = gluings[cur.tet][cur.leave_face as usize];
                    let pair = (g.perm.apply(cur.pair.0), g.perm.apply(cur.pair.1));
                    let enter = g.perm.apply(cur.leave_face);
                    let leave = (0..4u8)
                        .find(|&f| f != pair.0 && f != pair.1 && f != enter)
                        .unwrap();
                    let next = EdgeStep {
                        tet: g.tet,
                        pair,
                        enter_face: enter,
                        leave_face: leave,
                    };
                    let next_slot = (
                        next.tet,
                        next.pair.0.min(next.pair.1),
                        next.pair.0.max(next.pair.1),
                    );
                    let start_slot = (start.tet, a, b);
                    if next_slot == start_slot {
                        if next.pair != start.pair || next.enter_face != start.enter_face {
                            return Err(Error::ReversedEdge { edge: id });
                        }
                        break;
                    }
                    if around.len() > 6 * num_tets {
                        return Err(Error::ReversedEdge { edge: id });
                    }
                    around.push(next);
                }
                for step in &around {
                    let (x, y) = step.pair;
                    let prev = seen.insert((step.tet, x.min(y), x.max(y)), x < y);
                    if prev.is_some() {
                        // The same slot appearing twice would mean the
                        // wedge cycle is degenerate.
                        return Err(Error::ReversedEdge { edge: id });
                    }
                }
                let endpoints = (vertex_class[tet][a as usize], vertex_class[tet][b as usize]);
                classes.push(EdgeClass {
                    id,
                    around,
                    endpoints,
                });
            }
        }
    }
    Ok(classes)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
