//! Combinatorial reconstruction of the compact core of a spun-normal
//! surface from a quad coordinate vector, topology analysis, the
//! embeddedness check, and Haken sums.
//!
//! The oriented (immersed) reconstruction instantiates quad copies with
//! integer corner labels and glues arcs across face pairings by label;
//! the unoriented (embedded) reconstruction stacks parallel sheets and
//! glues arcs by their position in the cut-corner order.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{ToPrimitive, Zero};
use spunnorm_exact::Rat;

use crate::angles::{euler_char_unoriented, GeneralizedAngleStructure};
use crate::error::{Error, Result};
use crate::qcoords::{
    build_matching, complement, forget_orientation, is_admissible_unoriented, pair_index,
    OrientedQuadType, OrientedQuadVector, QuadType, UnorientedQuadVector,
};
use crate::tri::IdealTriangulation;

/// A cell of the reconstructed complex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Cell {
    /// Copy `copy` (1-based) of the transversely oriented quad with
    /// positive pair `pos`.
    Quad {
        tet: usize,
        pos: (u8, u8),
        copy: i64,
    },
    /// Small triangle at an ideal vertex, level >= 1; transverse
    /// orientation toward the vertex.
    Small { tet: usize, vertex: u8, level: i64 },
    /// Large triangle dual to a face (cutting off the opposite vertex,
    /// oriented away from it), level >= 1.
    Large { tet: usize, face: u8, level: i64 },
    /// Sheet `sheet` (1-based from the 0-pair side) of the unoriented
    /// quad of kind `kind`.
    UQuad { tet: usize, kind: u8, sheet: i64 },
    /// Triangle at an ideal vertex in the unoriented reconstruction,
    /// level >= 0.
    UTri { tet: usize, vertex: u8, level: i64 },
}

impl Cell {
    pub fn is_quad(&self) -> bool {
        matches!(self, Cell::Quad { .. } | Cell::UQuad { .. })
    }

    fn corner_count(&self) -> usize {
        if self.is_quad() {
            4
        } else {
            3
        }
    }

    /// Corner i as the tetrahedron edge it lies on, in the reference
    /// boundary cycle of the cell.
    fn corner_edge(&self, i: usize) -> (u8, u8) {
        match *self {
            Cell::Quad { pos, .. } => {
                let (a, b) = pos;
                let (c, d) = complement(pos);
                [(a, c), (a, d), (b, d), (b, c)][i]
            }
            Cell::UQuad { kind, .. } => {
                let (p, q) = QuadType { tet: 0, kind }.pairs();
                [(p.0, q.0), (p.0, q.1), (p.1, q.1), (p.1, q.0)][i]
            }
            Cell::Small { vertex, .. } | Cell::UTri { vertex, .. } => {
                let o = others(vertex);
                [(vertex, o[0]), (vertex, o[1]), (vertex, o[2])][i]
            }
            Cell::Large { face, .. } => {
                let o = others(face);
                [(face, o[0]), (face, o[1]), (face, o[2])][i]
            }
        }
    }

    fn tet(&self) -> usize {
        match *self {
            Cell::Quad { tet, .. }
            | Cell::Small { tet, .. }
            | Cell::Large { tet, .. }
            | Cell::UQuad { tet, .. }
            | Cell::UTri { tet, .. } => tet,
        }
    }
}

fn others(v: u8) -> [u8; 3] {
    let mut o: Vec<u8> = (0..4u8).filter(|&w| w != v).collect();
    o.sort();
    [o[0], o[1], o[2]]
}

/// Arc address local to one face of one tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum ArcAddress {
    /// Oriented scheme: short arc toward a vertex with an integer label.
    Short {
        tet: usize,
        face: u8,
        vertex: u8,
        label: i64,
    },
    /// Oriented scheme: long arc toward an edge of the face.
    Long {
        tet: usize,
        face: u8,
        edge: (u8, u8),
        label: i64,
    },
    /// Unoriented scheme: arc cutting a corner at a position counted from
    /// the far end.
    Cut {
        tet: usize,
        face: u8,
        corner: u8,
        position: i64,
    },
}

impl ArcAddress {
    fn face(&self) -> (usize, u8) {
        match *self {
            ArcAddress::Short { tet, face, .. }
            | ArcAddress::Long { tet, face, .. }
            | ArcAddress::Cut { tet, face, .. } => (tet, face),
        }
    }

    /// The same arc seen from the glued face.
    fn partner(&self, tri: &IdealTriangulation) -> ArcAddress {
        let (tet, face) = self.face();
        let g = tri.gluing(tet, face);
        let nf = g.perm.apply(face);
        match *self {
            ArcAddress::Short { vertex, label, .. } => ArcAddress::Short {
                tet: g.tet,
                face: nf,
                vertex: g.perm.apply(vertex),
                label,
            },
            ArcAddress::Long { edge, label, .. } => {
                let (a, b) = (g.perm.apply(edge.0), g.perm.apply(edge.1));
                ArcAddress::Long {
                    tet: g.tet,
                    face: nf,
                    edge: (a.min(b), a.max(b)),
                    label,
                }
            }
            ArcAddress::Cut {
                corner, position, ..
            } => ArcAddress::Cut {
                tet: g.tet,
                face: nf,
                corner: g.perm.apply(corner),
                position,
            },
        }
    }

    fn canonical(&self, tri: &IdealTriangulation) -> ArcAddress {
        let p = self.partner(tri);
        if *self <= p {
            *self
        } else {
            p
        }
    }
}

/// Truncation windows per (tet, vertex) family and, in the oriented
/// scheme, per (tet, face) family of large triangles.
#[derive(Clone, Debug)]
struct Windows {
    small: Vec<[i64; 4]>,
    large: Vec<[i64; 4]>,
}

struct Builder<'a> {
    oriented: Option<&'a OrientedQuadVector>,
    unoriented: &'a UnorientedQuadVector,
    windows: Windows,
}

impl<'a> Builder<'a> {
    fn quad_count(&self, tet: usize, pos: (u8, u8)) -> i64 {
        let x = self
            .oriented
            .expect("oriented count in oriented reconstruction")
            .get(OrientedQuadType { tet, pos });
        x.to_integer().to_i64().expect("quad count fits i64")
    }

    fn ukind_count(&self, tet: usize, kind: u8) -> i64 {
        let x = self.unoriented.get(QuadType { tet, kind });
        x.to_integer().to_i64().expect("quad count fits i64")
    }

    /// All arc slots of a cell: (address, endpoint edges in traversal
    /// order). Slot i runs from corner i to corner i+1.
    fn slots(&self, cell: Cell) -> Vec<ArcAddress> {
        match cell {
            Cell::Quad { tet, pos, copy } => {
                let (a, b) = pos;
                let (c, d) = complement(pos);
                let k = self.quad_count(tet, pos);
                // Cycle corners: (a,c) (a,d) (b,d) (b,c); slots between
                // them cut a, d, b, c in that order.
                vec![
                    ArcAddress::Short {
                        tet,
                        face: b,
                        vertex: a,
                        label: copy - 1,
                    },
                    ArcAddress::Long {
                        tet,
                        face: c,
                        edge: (a.min(b), a.max(b)),
                        label: copy - k - 1,
                    },
                    ArcAddress::Short {
                        tet,
                        face: a,
                        vertex: b,
                        label: copy - 1,
                    },
                    ArcAddress::Long {
                        tet,
                        face: d,
                        edge: (a.min(b), a.max(b)),
                        label: copy - k - 1,
                    },
                ]
            }
            Cell::Small { tet, vertex, level } => {
                let o = others(vertex);
                // Slot i joins corners (vertex, o[i]) and (vertex, o[i+1]):
                // it lies in the face through vertex, o[i], o[i+1].
                (0..3)
                    .map(|i| {
                        let u = o[i];
                        let w = o[(i + 1) % 3];
                        let face = 6 - vertex - u - w;
                        let k = self.quad_count(tet, sorted(vertex, face));
                        ArcAddress::Short {
                            tet,
                            face,
                            vertex,
                            label: k + level - 1,
                        }
                    })
                    .collect()
            }
            Cell::Large {
                tet,
                face: g,
                level,
            } => {
                let o = others(g);
                (0..3)
                    .map(|i| {
                        let u = o[i];
                        let w = o[(i + 1) % 3];
                        let f = 6 - g - u - w;
                        let edge = edge_of_faces(f, g);
                        let k = self.quad_count(tet, edge);
                        ArcAddress::Long {
                            tet,
                            face: f,
                            edge,
                            label: -k - level,
                        }
                    })
                    .collect()
            }
            Cell::UQuad { tet, kind, sheet } => {
                let (p, q) = QuadType { tet: 0, kind }.pairs();
                let k = self.ukind_count(tet, kind);
                // Corners (p0,q0) (p0,q1) (p1,q1) (p1,q0); slots cut
                // p0, q1, p1, q0.
                let cut = [(p.0, p.1), (q.1, q.0), (p.1, p.0), (q.0, q.1)];
                cut.iter()
                    .map(|&(c, partner)| {
                        let position = if c.min(partner) == 0 {
                            k - sheet
                        } else {
                            sheet - 1
                        };
                        ArcAddress::Cut {
                            tet,
                            face: partner,
                            corner: c,
                            position,
                        }
                    })
                    .collect()
            }
            Cell::UTri { tet, vertex, level } => {
                let o = others(vertex);
                (0..3)
                    .map(|i| {
                        let u = o[i];
                        let w = o[(i + 1) % 3];
                        let face = 6 - vertex - u - w;
                        let kind = kind_of_pair(vertex, face);
                        let k = self.ukind_count(tet, kind);
                        ArcAddress::Cut {
                            tet,
                            face,
                            corner: vertex,
                            position: k + level,
                        }
                    })
                    .collect()
            }
        }
    }

    /// Resolves an arc address to the cell owning it, or None when the
    /// cell lies beyond the truncation window.
    fn membership(&self, addr: ArcAddress) -> Option<Cell> {
        match addr {
            ArcAddress::Short {
                tet,
                face,
                vertex,
                label,
            } => {
                let k = self.quad_count(tet, sorted(vertex, face));
                if label < k {
                    Some(Cell::Quad {
                        tet,
                        pos: sorted(vertex, face),
                        copy: label + 1,
                    })
                } else {
                    let level = label - k + 1;
                    if level > self.windows.small[tet][vertex as usize] {
                        None
                    } else {
                        Some(Cell::Small { tet, vertex, level })
                    }
                }
            }
            ArcAddress::Long {
                tet,
                face,
                edge,
                label,
            } => {
                let k = self.quad_count(tet, edge);
                if -label <= k {
                    Some(Cell::Quad {
                        tet,
                        pos: edge,
                        copy: label + k + 1,
                    })
                } else {
                    let g = 6 - edge.0 - edge.1 - face;
                    let level = -label - k;
                    if level > self.windows.large[tet][g as usize] {
                        None
                    } else {
                        Some(Cell::Large {
                            tet,
                            face: g,
                            level,
                        })
                    }
                }
            }
            ArcAddress::Cut {
                tet,
                face,
                corner,
                position,
            } => {
                let kind = kind_of_pair(corner, face);
                let k = self.ukind_count(tet, kind);
                if position < k {
                    let sheet = if corner.min(face) == 0 {
                        k - position
                    } else {
                        position + 1
                    };
                    Some(Cell::UQuad { tet, kind, sheet })
                } else {
                    let level = position - k;
                    if level >= self.windows.small[tet][corner as usize] {
                        None
                    } else {
                        Some(Cell::UTri {
                            tet,
                            vertex: corner,
                            level,
                        })
                    }
                }
            }
        }
    }
}

fn sorted(a: u8, b: u8) -> (u8, u8) {
    (a.min(b), a.max(b))
}

fn edge_of_faces(f: u8, g: u8) -> (u8, u8) {
    let mut e: Vec<u8> = (0..4u8).filter(|&v| v != f && v != g).collect();
    e.sort();
    (e[0], e[1])
}

fn kind_of_pair(a: u8, b: u8) -> u8 {
    let (a, b) = sorted(a, b);
    if a == 0 {
        pair_index(a, b) as u8
    } else {
        let (c, d) = complement((a, b));
        pair_index(c, d) as u8
    }
}

/// The reconstructed compact core.
#[derive(Clone, Debug)]
pub struct SurfaceComplex {
    pub cells: Vec<Cell>,
    /// Interior arcs as (cell, slot) pairs.
    pub interior: Vec<((usize, usize), (usize, usize))>,
    /// Cut (boundary) arcs with the cusp they spin toward.
    pub cut: Vec<((usize, usize), usize)>,
    /// Component index per cell.
    pub component: Vec<usize>,
    pub num_components: usize,
    /// Boundary circles as (component, cusp, arc count).
    pub circles: Vec<(usize, usize, usize)>,
    /// Orientability per component.
    pub orientable: Vec<bool>,
    /// Euler characteristic per component.
    pub euler: Vec<i64>,
    /// Boundary circle count per component.
    pub boundary: Vec<usize>,
    /// Transverse orientability and a sign assignment per cell when it
    /// exists (unoriented reconstruction only).
    pub transverse: Option<Vec<Option<i8>>>,
}

fn initial_window(tri: &IdealTriangulation, total_quads: i64) -> i64 {
    let _ = tri;
    total_quads + 2
}

/// Reconstructs the immersed transversely oriented surface of an oriented
/// coordinate vector (when `oriented` is given) or the unique embedded
/// surface of an unoriented vector.
fn reconstruct_with_window(
    tri: &IdealTriangulation,
    oriented: Option<&OrientedQuadVector>,
    unoriented: &UnorientedQuadVector,
    window: i64,
) -> Result<SurfaceComplex> {
    let t = tri.num_tets();
    let windows = Windows {
        small: vec![[window; 4]; t],
        large: vec![[window; 4]; t],
    };
    let builder = Builder {
        oriented,
        unoriented,
        windows,
    };

    // Seed with all quad cells.
    let mut cells: Vec<Cell> = Vec::new();
    match oriented {
        Some(x) => {
            for (q, v) in x.iter_nonzero() {
                let k = v.to_integer().to_i64().expect("count");
                for copy in 1..=k {
                    cells.push(Cell::Quad {
                        tet: q.tet,
                        pos: q.pos,
                        copy,
                    });
                }
            }
        }
        None => {
            for (q, v) in unoriented.iter_nonzero() {
                let k = v.to_integer().to_i64().expect("count");
                for sheet in 1..=k {
                    cells.push(Cell::UQuad {
                        tet: q.tet,
                        kind: q.kind,
                        sheet,
                    });
                }
            }
        }
    }
    cells.sort();
    let mut index: BTreeMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut queue: VecDeque<usize> = (0..cells.len()).collect();

    // key -> list of (cell index, slot).
    let mut arcs: BTreeMap<ArcAddress, Vec<(usize, usize)>> = BTreeMap::new();
    while let Some(ci) = queue.pop_front() {
        let cell = cells[ci];
        for (slot, addr) in builder.slots(cell).into_iter().enumerate() {
            let key = addr.canonical(tri);
            arcs.entry(key).or_default().push((ci, slot));
            // Ensure the partner cell exists.
            let partner_addr = addr.partner(tri);
            if let Some(pcell) = builder.membership(partner_addr) {
                if !index.contains_key(&pcell) {
                    let idx = cells.len();
                    cells.push(pcell);
                    index.insert(pcell, idx);
                    queue.push_back(idx);
                }
            }
        }
    }

    // Classify arcs.
    let mut interior: Vec<((usize, usize), (usize, usize))> = Vec::new();
    let mut cut: Vec<((usize, usize), usize)> = Vec::new();
    for (key, sides) in &arcs {
        match sides.len() {
            2 => interior.push((sides[0], sides[1])),
            1 => {
                // The missing side must be a beyond-window triangle.
                let (ci, slot) = sides[0];
                let addr = builder.slots(cells[ci])[slot];
                let partner = addr.partner(tri);
                if builder.membership(partner).is_some() {
                    return Err(Error::NonStabilizing(format!(
                        "arc {key:?} missing a side that should exist"
                    )));
                }
                // Tag by the cusp of the absent triangle family.
                let cusp = match partner {
                    ArcAddress::Short { tet, vertex, .. } => tri.cusp_of(tet, vertex),
                    ArcAddress::Long {
                        tet, face, edge, ..
                    } => {
                        let g = 6 - edge.0 - edge.1 - face;
                        tri.cusp_of(tet, g)
                    }
                    ArcAddress::Cut { tet, corner, .. } => tri.cusp_of(tet, corner),
                };
                cut.push((sides[0], cusp));
            }
            n => return Err(Error::NonStabilizing(format!("arc {key:?} has {n} sides"))),
        }
    }

    // Components over interior arcs.
    let mut uf = UnionFind::new(cells.len());
    for &((a, _), (b, _)) in &interior {
        uf.union(a, b);
    }
    let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut component = vec![usize::MAX; cells.len()];
    // Keep only components containing a quad.
    let mut has_quad: BTreeMap<usize, bool> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        let r = uf.find(i);
        if c.is_quad() {
            has_quad.insert(r, true);
        }
    }
    for (i, _) in cells.iter().enumerate() {
        let r = uf.find(i);
        if has_quad.get(&r).copied().unwrap_or(false) {
            let next = comp_of_root.len();
            let id = *comp_of_root.entry(r).or_insert(next);
            component[i] = id;
        }
    }
    let num_components = comp_of_root.len();

    let kept = |i: usize| component[i] != usize::MAX;

    // Corner orbits through interior arc identifications.
    // Corner key: (cell, corner index).
    let corner_base: Vec<usize> = {
        let mut acc = 0;
        cells
            .iter()
            .map(|c| {
                let b = acc;
                acc += c.corner_count();
                b
            })
            .collect()
    };
    let total_corners: usize = cells.iter().map(|c| c.corner_count()).sum();
    let mut cuf = UnionFind::new(total_corners);
    let mut orient_uf = SignedUnionFind::new(cells.len());
    for &((a, sa), (b, sb)) in &interior {
        let ca = cells[a];
        let cb = cells[b];
        let na = ca.corner_count();
        let nb = cb.corner_count();
        // Endpoint tetrahedron edges in traversal order on each side.
        let ea = (ca.corner_edge(sa), ca.corner_edge((sa + 1) % na));
        let eb = (cb.corner_edge(sb), cb.corner_edge((sb + 1) % nb));
        // Map side a's endpoints through the face gluing.
        let addr = builder.slots(ca)[sa];
        let (tet, face) = addr.face();
        debug_assert_eq!(tet, ca.tet());
        let g = tri.gluing(tet, face);
        let map = |(x, y): (u8, u8)| -> (u8, u8) { sorted(g.perm.apply(x), g.perm.apply(y)) };
        let (fa1, fa2) = (map(ea.0), map(ea.1));
        let (sb1, sb2) = (sorted(eb.0 .0, eb.0 .1), sorted(eb.1 .0, eb.1 .1));
        let (match_start, flip) = if (fa1, fa2) == (sb1, sb2) {
            // Same traversal direction: orientation-reversing gluing.
            (true, true)
        } else if (fa1, fa2) == (sb2, sb1) {
            (false, false)
        } else {
            return Err(Error::NonStabilizing(
                "arc endpoints do not match across a face pairing".into(),
            ));
        };
        let a0 = corner_base[a] + sa;
        let a1 = corner_base[a] + (sa + 1) % na;
        let b0 = corner_base[b] + sb;
        let b1 = corner_base[b] + (sb + 1) % nb;
        if match_start {
            cuf.union(a0, b0);
            cuf.union(a1, b1);
        } else {
            cuf.union(a0, b1);
            cuf.union(a1, b0);
        }
        // Coherent orientation demands opposite traversal directions.
        orient_uf.union(a, b, flip);
    }

    // Per-component counts.
    let mut euler = vec![0i64; num_components];
    let mut boundary = vec![0usize; num_components];
    let mut orientable = vec![true; num_components];
    let mut faces = vec![0i64; num_components];
    let mut edges = vec![0i64; num_components];
    let mut verts = vec![0i64; num_components];
    for (i, _) in cells.iter().enumerate() {
        if kept(i) {
            faces[component[i]] += 1;
        }
    }
    for &((a, _), _) in &interior {
        if kept(a) {
            edges[component[a]] += 1;
        }
    }
    for &((a, _), _) in &cut {
        if kept(a) {
            edges[component[a]] += 1;
        }
    }
    // Vertex orbits restricted to kept cells.
    let mut orbit_seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        if !kept(i) {
            continue;
        }
        for k in 0..c.corner_count() {
            let root = cuf.find(corner_base[i] + k);
            orbit_seen.entry(root).or_insert(component[i]);
        }
    }
    for (_, comp) in &orbit_seen {
        verts[*comp] += 1;
    }
    for comp in 0..num_components {
        euler[comp] = verts[comp] - edges[comp] + faces[comp];
    }
    for (i, _) in cells.iter().enumerate() {
        if kept(i) && orient_uf.conflicted(i) {
            orientable[component[i]] = false;
        }
    }

    // Boundary circles: walk cut arcs through shared corner orbits.
    // Each cut arc endpoint lies in an orbit touching exactly one other
    // cut arc endpoint.
    let mut endpoint_orbits: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (arc_idx, &((ci, slot), _)) in cut.iter().enumerate() {
        if !kept(ci) {
            continue;
        }
        let n = cells[ci].corner_count();
        for (which, corner) in [(0usize, slot), (1, (slot + 1) % n)] {
            let root = cuf.find(corner_base[ci] + corner);
            endpoint_orbits
                .entry(root)
                .or_default()
                .push((arc_idx, which));
        }
    }
    for ends in endpoint_orbits.values() {
        if ends.len() != 2 {
            return Err(Error::NonStabilizing(format!(
                "boundary vertex with {} incident cut arcs",
                ends.len()
            )));
        }
    }
    let mut circle_of = vec![usize::MAX; cut.len()];
    let mut circles: Vec<(usize, usize, usize)> = Vec::new();
    for start in 0..cut.len() {
        let ((ci, _), cusp) = cut[start];
        if !kept(ci) || circle_of[start] != usize::MAX {
            continue;
        }
        let circle_id = circles.len();
        let comp = component[ci];
        let mut count = 0usize;
        // Stand at endpoint 1 of the current arc, hop through the shared
        // corner orbit to the partner endpoint, traverse that arc.
        let mut cur = start;
        let mut leave_end = 1usize;
        loop {
            circle_of[cur] = circle_id;
            count += 1;
            let ((cci, cslot), ccusp) = cut[cur];
            debug_assert_eq!(ccusp, cusp);
            let n = cells[cci].corner_count();
            let corner = if leave_end == 0 {
                cslot
            } else {
                (cslot + 1) % n
            };
            let root = cuf.find(corner_base[cci] + corner);
            let ends = &endpoint_orbits[&root];
            let (next, next_end) = if ends[0] == (cur, leave_end) {
                ends[1]
            } else {
                ends[0]
            };
            if next == start {
                break;
            }
            cur = next;
            leave_end = 1 - next_end;
        }
        circles.push((comp, cusp, count));
        boundary[comp] += 1;
    }

    // Transverse orientation assignment for the unoriented reconstruction.
    let transverse = if oriented.is_none() {
        let mut tuf = SignedUnionFind::new(cells.len());
        for &((a, sa), (b, sb)) in &interior {
            let side = |cell: Cell, slot: usize| -> bool {
                // True when the canonical transverse orientation points
                // toward the cut corner of this arc.
                match cell {
                    Cell::UQuad { kind, .. } => {
                        let (p, _) = QuadType { tet: 0, kind }.pairs();
                        let cut_corner = match slot {
                            0 => p.0,
                            1 => QuadType { tet: 0, kind }.pairs().1 .1,
                            2 => p.1,
                            _ => QuadType { tet: 0, kind }.pairs().1 .0,
                        };
                        cut_corner == p.0 || cut_corner == p.1
                    }
                    Cell::UTri { .. } => true,
                    _ => unreachable!("oriented cell in unoriented complex"),
                }
            };
            let flip = side(cells[a], sa) != side(cells[b], sb);
            tuf.union(a, b, flip);
        }
        let mut assignment: Vec<Option<i8>> = vec![None; cells.len()];
        let mut ok = vec![true; num_components];
        for (i, _) in cells.iter().enumerate() {
            if !kept(i) {
                continue;
            }
            if tuf.conflicted(i) {
                ok[component[i]] = false;
            } else {
                assignment[i] = Some(tuf.sign(i));
            }
        }
        for (i, _) in cells.iter().enumerate() {
            if kept(i) && !ok[component[i]] {
                assignment[i] = None;
            }
        }
        Some(assignment)
    } else {
        None
    };

    Ok(SurfaceComplex {
        cells,
        interior,
        cut,
        component,
        num_components,
        circles,
        orientable,
        euler,
        boundary,
        transverse,
    })
}

/// Signature of the topological outcome, used for the stabilization
/// certificate.
fn signature(c: &SurfaceComplex) -> (usize, Vec<(i64, bool, usize)>) {
    let mut per: Vec<(i64, bool, usize)> = (0..c.num_components)
        .map(|i| (c.euler[i], c.orientable[i], c.boundary[i]))
        .collect();
    per.sort();
    (c.num_components, per)
}

/// Reconstructs with stabilization: the window doubles until the
/// topological signature is unchanged and the Euler characteristic
/// matches the angle-structure functional exactly.
pub fn reconstruct(
    tri: &IdealTriangulation,
    gas: &GeneralizedAngleStructure,
    oriented: Option<&OrientedQuadVector>,
    unoriented: &UnorientedQuadVector,
) -> Result<SurfaceComplex> {
    if !is_admissible_unoriented(unoriented) {
        return Err(Error::NotAdmissible);
    }
    if !unoriented.is_integral() || !unoriented.is_nonnegative() {
        return Err(Error::NotAdmissible);
    }
    let matching = build_matching(tri);
    match oriented {
        Some(x) => {
            if !matching.satisfies_oriented(x) {
                return Err(Error::NotNormalCoordinate);
            }
        }
        None => {
            if !matching.satisfies_unoriented(unoriented) {
                return Err(Error::NotNormalCoordinate);
            }
        }
    }
    let chi_star = euler_char_unoriented(gas, unoriented);
    if !chi_star.is_integer() {
        return Err(Error::NonStabilizing(format!(
            "chi* = {chi_star} is not an integer"
        )));
    }
    let chi_star = chi_star.to_integer().to_i64().expect("chi fits i64");

    let total: Rat = unoriented.iter_nonzero().map(|(_, v)| v.clone()).sum();
    let mut window = initial_window(tri, total.to_integer().to_i64().unwrap_or(0).abs());
    let mut prev: Option<(usize, Vec<(i64, bool, usize)>)> = None;
    let mut stable_mismatch = 0usize;
    let mut last: Option<SurfaceComplex> = None;
    for _ in 0..8 {
        let complex = reconstruct_with_window(tri, oriented, unoriented, window)?;
        let sig = signature(&complex);
        let chi_total: i64 = complex.euler.iter().sum();
        if chi_total == chi_star && prev.as_ref() == Some(&sig) {
            return Ok(complex);
        }
        if prev.as_ref() == Some(&sig) {
            stable_mismatch += 1;
        } else {
            stable_mismatch = 0;
        }
        prev = Some(sig);
        last = Some(complex);
        window *= 2;
    }
    // Distinguish a genuinely unstable window from a stable complex whose
    // Euler characteristic disagrees with the functional. The latter
    // means some end cross-section is null-homotopic on its cusp torus
    // (nonzero rotational holonomy), which happens exactly when an edge
    // of the triangulation is isotopic into a cusp; the Euler functional
    // is not valid for such coordinates.
    if stable_mismatch >= 2 {
        let complex = last.expect("at least one build");
        let chi_total: i64 = complex.euler.iter().sum();
        let trivial_ends = complex
            .circles
            .iter()
            .filter(|&&(_, _, count)| count <= 2)
            .count();
        return Err(Error::NonStabilizing(format!(
            "reconstructed Euler characteristic {chi_total} differs from the Euler functional \
             {chi_star} on a stable complex ({trivial_ends} boundary circles of <= 2 arcs look \
             null-homotopic); the coordinate has ends the functional cannot certify, which \
             indicates an edge isotopic into a cusp (triangulation not 0-efficient)"
        )));
    }
    Err(Error::NonStabilizing(format!(
        "window grew to {window} without stabilizing"
    )))
}

/// Topological report of one component.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ComponentReport {
    pub orientable: bool,
    pub euler: i64,
    pub boundary: usize,
    pub genus: i64,
    pub name: String,
}

/// Full report of an analyzed surface.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SurfaceReport {
    pub connected: bool,
    pub orientable: bool,
    pub euler: i64,
    pub boundary: usize,
    pub name: String,
    pub components: Vec<ComponentReport>,
}

fn component_name(orientable: bool, euler: i64, boundary: usize) -> (i64, String) {
    if orientable {
        let g2 = 2 - euler - boundary as i64;
        debug_assert!(g2 >= 0 && g2 % 2 == 0);
        let g = g2 / 2;
        (g, format!("S_{g},{boundary}"))
    } else {
        let g = 2 - euler - boundary as i64;
        debug_assert!(g >= 1);
        (g, format!("N_{g},{boundary}"))
    }
}

pub fn analyze(complex: &SurfaceComplex) -> SurfaceReport {
    let mut components = Vec::new();
    for i in 0..complex.num_components {
        let (genus, name) =
            component_name(complex.orientable[i], complex.euler[i], complex.boundary[i]);
        components.push(ComponentReport {
            orientable: complex.orientable[i],
            euler: complex.euler[i],
            boundary: complex.boundary[i],
            genus,
            name,
        });
    }
    components.sort_by(|a, b| a.name.cmp(&b.name));
    let connected = complex.num_components == 1;
    let orientable = components.iter().all(|c| c.orientable);
    let euler = components.iter().map(|c| c.euler).sum();
    let boundary = components.iter().map(|c| c.boundary).sum();
    let name = if components.is_empty() {
        "empty".to_string()
    } else {
        components
            .iter()
            .map(|c| c.name.clone())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    SurfaceReport {
        connected,
        orientable,
        euler,
        boundary,
        name,
        components,
    }
}

/// Embeddedness of an oriented coordinate: reconstruct the unique
/// embedded surface of the unoriented image, try both transverse
/// orientations of each component, and compare coordinates with x.
pub fn is_embedded(
    tri: &IdealTriangulation,
    gas: &GeneralizedAngleStructure,
    x: &OrientedQuadVector,
) -> Result<bool> {
    let u = forget_orientation(x);
    let complex = reconstruct(tri, gas, None, &u)?;
    let Some(assignment) = &complex.transverse else {
        return Ok(false);
    };
    // Collect per-component oriented coordinate contributions for the
    // canonical orientation choice.
    let k = complex.num_components;
    if k > 20 {
        return Err(Error::Other(format!(
            "embedded surface has {k} components; refusing 2^{k} checks"
        )));
    }
    let mut per_comp: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); k];
    for (i, cell) in complex.cells.iter().enumerate() {
        let comp = complex.component[i];
        if comp == usize::MAX {
            continue;
        }
        if let Cell::UQuad { tet, kind, .. } = *cell {
            let Some(sign) = assignment[i] else {
                return Ok(false);
            };
            let (p, q) = QuadType { tet: 0, kind }.pairs();
            // Canonical transverse orientation points toward the 0-pair.
            let pos = if sign > 0 { p } else { q };
            let idx = OrientedQuadType { tet, pos }.index();
            *per_comp[comp].entry(idx).or_insert(0) += 1;
        }
    }
    let target: BTreeMap<usize, i64> = x
        .iter_nonzero()
        .map(|(q, v)| (q.index(), v.to_integer().to_i64().expect("count")))
        .collect();
    // Try all sign choices.
    'choice: for mask in 0..(1u32 << k) {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (comp, contrib) in per_comp.iter().enumerate() {
            let flip = mask & (1 << comp) != 0;
            for (&idx, &n) in contrib {
                let key = if flip {
                    OrientedQuadType::from_index(idx).reversed().index()
                } else {
                    idx
                };
                *acc.entry(key).or_insert(0) += n;
            }
        }
        acc.retain(|_, v| *v != 0);
        if acc == target {
            return Ok(true);
        }
        continue 'choice;
    }
    Ok(false)
}

/// Coordinatewise Haken sum; errors when the sum is not admissible.
pub fn haken_sum(
    x1: &UnorientedQuadVector,
    x2: &UnorientedQuadVector,
) -> Result<UnorientedQuadVector> {
    let sum = x1.add(x2);
    if !is_admissible_unoriented(&sum) {
        let clash = sum
            .iter_nonzero()
            .map(|(q, _)| q.tet)
            .find(|&tet| {
                (0..3u8)
                    .filter(|&kind| !sum.get(QuadType { tet, kind }).is_zero())
                    .count()
                    > 1
            })
            .unwrap_or(0);
        return Err(Error::IncompatibleSum { tet: clash });
    }
    Ok(sum)
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

/// Union-find with a sign relative to the root; detects conflicts.
struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<i8>,
    conflict: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind {
            parent: (0..n).collect(),
            sign: vec![1; n],
            conflict: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        if self.parent[x] == x {
            return (x, 1);
        }
        let (root, s) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.sign[x] *= s;
        (root, self.sign[x])
    }

    /// Joins a and b with relative sign -1 when `flip`.
    fn union(&mut self, a: usize, b: usize, flip: bool) {
        let rel = if flip { -1 } else { 1 };
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa * rel != sb {
                self.conflict[ra] = true;
            }
            return;
        }
        let (keep, kill) = (ra.min(rb), ra.max(rb));
        // sign of kill-root relative to keep-root.
        let s = if kill == rb {
            sa * rel * sb
        } else {
            sb * rel * sa
        };
        self.parent[kill] = keep;
        self.sign[kill] = s;
        self.conflict[keep] = self.conflict[keep] || self.conflict[kill];
    }

    fn conflicted(&mut self, x: usize) -> bool {
        let (r, _) = self.find(x);
        self.conflict[r]
    }

    fn sign(&mut self, x: usize) -> i8 {
        let (_, s) = self.find(x);
        s
    }
}
