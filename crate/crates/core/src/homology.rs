//! Simplicial homology of the pseudo-manifold and of the truncated
//! compact manifold, the quad-to-chain map, homological longitudes, and
//! the peripheral homology map.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use spunnorm_exact::{
    kernel_basis, smith_normal_form, solve, Int, IntMatrix, LinearSolution, Rat, RatMatrix,
};

use crate::error::{Error, Result};
use crate::qcoords::{OrientedQuadType, OrientedQuadVector};
use crate::tri::basis::{class_direction_in, intersection_number, pair_chain_curve, SideChain};
use crate::tri::IdealTriangulation;

/// One glued face pair with a chosen representative side and orientation.
#[derive(Clone, Debug)]
pub struct FaceClass {
    pub rep: (usize, u8),
    pub partner: (usize, u8),
}

/// Chain complex of the pseudo-manifold P (ideal vertices included) and
/// of the truncated compact manifold.
pub struct Complexes {
    pub face_classes: Vec<FaceClass>,
    /// (face class index, sign) for every (tet, face).
    face_coeff: Vec<[(usize, i8); 4]>,
    // Pseudo-manifold complex.
    pub p_d3: IntMatrix,
    pub p_d2: IntMatrix,
    pub p_d1: IntMatrix,
    // Truncated complex: C2 = hexagons (face classes) then cusp triangles;
    // C1 = cusp sides then truncated edges; C0 = cusp corners.
    pub t_d3: IntMatrix,
    pub t_d2: IntMatrix,
    pub t_d1: IntMatrix,
    num_tets: usize,
    num_edges: usize,
    num_sides: usize,
}

fn ascending_others(v: u8) -> [u8; 3] {
    let mut o: Vec<u8> = (0..4u8).filter(|&w| w != v).collect();
    o.sort();
    [o[0], o[1], o[2]]
}

/// Parity of the permutation taking `from` to `to` (both triples of the
/// same three distinct labels).
fn triple_parity(from: [u8; 3], to: [u8; 3]) -> i8 {
    let mut perm = [0usize; 3];
    for (i, f) in from.iter().enumerate() {
        perm[i] = to.iter().position(|t| t == f).expect("same label set");
    }
    let mut sign = 1i8;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

impl Complexes {
    pub fn new(tri: &IdealTriangulation) -> Self {
        let t = tri.num_tets();
        let ne = tri.edges().len();
        let ns = tri.num_side_classes();
        let nc = tri.num_corner_classes();
        let nv = tri.cusps().len();

        // Face classes with representatives.
        let mut face_classes: Vec<FaceClass> = Vec::new();
        let mut class_of = vec![[usize::MAX; 4]; t];
        for tet in 0..t {
            for f in 0..4u8 {
                if class_of[tet][f as usize] != usize::MAX {
                    continue;
                }
                let g = tri.gluing(tet, f);
                let pf = g.perm.apply(f);
                let id = face_classes.len();
                class_of[tet][f as usize] = id;
                class_of[g.tet][pf as usize] = id;
                face_classes.push(FaceClass {
                    rep: (tet, f),
                    partner: (g.tet, pf),
                });
            }
        }
        // Sign of expressing the ascending orientation of (tet, f) in the
        // representative's ascending basis.
        let mut face_coeff = vec![[(0usize, 0i8); 4]; t];
        for tet in 0..t {
            for f in 0..4u8 {
                let id = class_of[tet][f as usize];
                let fc = &face_classes[id];
                let sign = if fc.rep == (tet, f) {
                    1
                } else {
                    let g = tri.gluing(tet, f);
                    let from = ascending_others(f);
                    let image = [
                        g.perm.apply(from[0]),
                        g.perm.apply(from[1]),
                        g.perm.apply(from[2]),
                    ];
                    triple_parity(image, ascending_others(fc.rep.1))
                };
                face_coeff[tet][f as usize] = (id, sign);
            }
        }

        let nf = face_classes.len();

        // Pseudo-manifold boundary maps.
        let mut p_d3 = IntMatrix::zero(nf, t);
        for tet in 0..t {
            for f in 0..4u8 {
                let (id, sign) = face_coeff[tet][f as usize];
                let s = if f % 2 == 0 { 1 } else { -1 } * sign;
                let v = &p_d3[(id, tet)] + Int::from(s);
                p_d3[(id, tet)] = v;
            }
        }
        let mut p_d2 = IntMatrix::zero(ne, nf);
        for (id, fc) in face_classes.iter().enumerate() {
            let (tet, f) = fc.rep;
            let [w0, w1, w2] = ascending_others(f);
            for ((a, b), base_sign) in [((w1, w2), 1i8), ((w0, w2), -1), ((w0, w1), 1)] {
                let (eid, fwd) = tri.edge_of(tet, a, b);
                let s = base_sign * if fwd { 1 } else { -1 };
                let v = &p_d2[(eid, id)] + Int::from(s);
                p_d2[(eid, id)] = v;
            }
        }
        let mut p_d1 = IntMatrix::zero(nv, ne);
        for e in tri.edges() {
            let (tail, head) = e.endpoints;
            let v = &p_d1[(head, e.id)] + Int::one();
            p_d1[(head, e.id)] = v;
            let v = &p_d1[(tail, e.id)] - Int::one();
            p_d1[(tail, e.id)] = v;
        }

        // Truncated complex.
        let tc2 = nf + 4 * t;
        let tc1 = ns + ne;
        let mut t_d3 = IntMatrix::zero(tc2, t);
        for tet in 0..t {
            for f in 0..4u8 {
                let (id, sign) = face_coeff[tet][f as usize];
                let s = if f % 2 == 0 { 1 } else { -1 } * sign;
                let v = &t_d3[(id, tet)] + Int::from(s);
                t_d3[(id, tet)] = v;
            }
            for vtx in 0..4u8 {
                let s = if vtx % 2 == 0 { -1 } else { 1 };
                let row = nf + 4 * tet + vtx as usize;
                let v = &t_d3[(row, tet)] + Int::from(s);
                t_d3[(row, tet)] = v;
            }
        }

        let mut t_d2 = IntMatrix::zero(tc1, tc2);
        // Hexagon boundaries: truncated edges plus one cusp side per corner.
        for (id, fc) in face_classes.iter().enumerate() {
            let (tet, f) = fc.rep;
            let [w0, w1, w2] = ascending_others(f);
            for ((a, b), base_sign) in [((w1, w2), 1i8), ((w0, w2), -1), ((w0, w1), 1)] {
                let (eid, fwd) = tri.edge_of(tet, a, b);
                let s = base_sign * if fwd { 1 } else { -1 };
                let row = ns + eid;
                let v = &t_d2[(row, id)] + Int::from(s);
                t_d2[(row, id)] = v;
            }
            // Truncation arcs: at corner v, directed from the (v; prev)
            // corner to the (v; next) corner following w0 -> w1 -> w2 -> w0.
            for (prev, v, next) in [(w2, w0, w1), (w0, w1, w2), (w1, w2, w0)] {
                let side = (tet, v, f);
                let class = tri.side_class(side);
                let (src, _dst) = class_direction_in(tri, side);
                let s = if src == prev { 1 } else { -1 };
                let v2 = &t_d2[(class, id)] + Int::from(s);
                t_d2[(class, id)] = v2;
                let _ = next;
            }
        }
        // Cusp triangle boundaries, in the ascending corner cycle.
        for tet in 0..t {
            for v in 0..4u8 {
                let col = nf + 4 * tet + v as usize;
                let [u1, u2, u3] = ascending_others(v);
                for (a, b) in [(u1, u2), (u2, u3), (u3, u1)] {
                    let face = 6 - v - a - b;
                    let side = (tet, v, face);
                    let class = tri.side_class(side);
                    let (src, _dst) = class_direction_in(tri, side);
                    let s = if src == a { 1 } else { -1 };
                    let val = &t_d2[(class, col)] + Int::from(s);
                    t_d2[(class, col)] = val;
                }
            }
        }

        let mut t_d1 = IntMatrix::zero(nc, tc1);
        for class in 0..ns {
            let [rep, _] = tri.side_rep(class);
            let (rt, rv, _) = rep;
            let (src, dst) = class_direction_in(tri, rep);
            let src_c = tri.corner_class((rt, rv, src));
            let dst_c = tri.corner_class((rt, rv, dst));
            let v = &t_d1[(dst_c, class)] + Int::one();
            t_d1[(dst_c, class)] = v;
            let v = &t_d1[(src_c, class)] - Int::one();
            t_d1[(src_c, class)] = v;
        }
        for e in tri.edges() {
            let step = e.around[0];
            let (tail, head) = step.pair;
            let head_c = tri.corner_class((step.tet, head, tail));
            let tail_c = tri.corner_class((step.tet, tail, head));
            let col = ns + e.id;
            let v = &t_d1[(head_c, col)] + Int::one();
            t_d1[(head_c, col)] = v;
            let v = &t_d1[(tail_c, col)] - Int::one();
            t_d1[(tail_c, col)] = v;
        }

        Complexes {
            face_classes,
            face_coeff,
            p_d3,
            p_d2,
            p_d1,
            t_d3,
            t_d2,
            t_d1,
            num_tets: t,
            num_edges: ne,
            num_sides: ns,
        }
    }

    pub fn num_face_classes(&self) -> usize {
        self.face_classes.len()
    }

    /// The quad-to-2-chain map: a transversely oriented quad maps to the
    /// two faces of its tetrahedron containing the positive-pair edge.
    pub fn phi_quad(&self, tri: &IdealTriangulation, q: OrientedQuadType) -> Vec<(usize, i8)> {
        let (c, d) = crate::qcoords::complement(q.pos);
        let mut out = Vec::new();
        for k in [c, d] {
            let (id, sign) = self.face_coeff[q.tet][k as usize];
            // Global sign pinned by the figure-8 calibration: the
            // connecting map of phi(x) must equal the total boundary
            // class of x.
            let eps = tri.sign(q.tet) * if k % 2 == 0 { 1 } else { -1 } * sign;
            out.push((id, eps));
        }
        out
    }

    pub fn phi_chain(&self, tri: &IdealTriangulation, x: &OrientedQuadVector) -> Vec<Rat> {
        let mut chain = vec![Rat::zero(); self.num_face_classes()];
        for (q, v) in x.iter_nonzero() {
            for (id, eps) in self.phi_quad(tri, q) {
                chain[id] += Rat::from_integer(Int::from(eps)) * v;
            }
        }
        chain
    }

    /// Connecting homomorphism: the boundary of the truncated 2-chain on
    /// the cusp tori, as a side-class 1-chain.
    pub fn connecting(&self, chain: &[Rat]) -> Vec<Rat> {
        assert_eq!(chain.len(), self.num_face_classes());
        let mut out = vec![Rat::zero(); self.num_sides];
        for (col, c) in chain.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for row in 0..self.num_sides {
                let w = &self.t_d2[(row, col)];
                if !w.is_zero() {
                    out[row] += Rat::from_integer(w.clone()) * c;
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_sides(&self) -> usize {
        self.num_sides
    }

    pub fn num_tets_c(&self) -> usize {
        self.num_tets
    }
}

/// Finitely generated abelian group presented as cycles modulo
/// boundaries, with coordinates for cycle classes.
pub struct ZModule {
    /// Kernel lattice basis as columns.
    kernel: IntMatrix,
    /// Unimodular change of basis; class coordinates are uprime * coords.
    uprime: IntMatrix,
    /// Diagonal of the relation SNF (length = kernel rank).
    diag: Vec<Int>,
    relation_rank: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl ZModule {
    /// H = ker(d_low) / im(d_high).
    pub fn homology(d_low: &IntMatrix, d_high: &IntMatrix) -> Self {
        let n = d_low.ncols();
        assert_eq!(n, d_high.nrows());
        let snf_low = smith_normal_form(d_low);
        let r = snf_low.rank();
        let k = n - r;
        let mut kernel = IntMatrix::zero(n, k);
        for j in 0..k {
            for i in 0..n {
                kernel[(i, j)] = snf_low.v[(i, r + j)].clone();
            }
        }
        // Relations in kernel coordinates.
        let m = d_high.ncols();
        let mut rel = IntMatrix::zero(k, m);
        let kern_rat = int_to_rat(&kernel);
        for col in 0..m {
            let rhs: Vec<Rat> = (0..n)
                .map(|i| Rat::from_integer(d_high[(i, col)].clone()))
                .collect();
            match solve(&kern_rat, &rhs) {
                LinearSolution::Solution(c) => {
                    for (i, v) in c.iter().enumerate() {
                        assert!(v.is_integer(), "boundary not in kernel lattice");
                        rel[(i, col)] = v.to_integer();
                    }
                }
                LinearSolution::Infeasible { .. } => {
                    panic!("boundary column outside kernel (d.d != 0)")
                }
            }
        }
        let snf_rel = smith_normal_form(&rel);
        let rr = snf_rel.rank();
        let mut diag = vec![Int::zero(); k];
        for i in 0..k.min(rel.ncols()).max(0) {
            if i < rel.ncols().min(k) {
                diag[i] = snf_rel.d[(i, i)].clone();
            }
        }
        let torsion: Vec<Int> = diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        ZModule {
            kernel,
            uprime: snf_rel.u.clone(),
            diag,
            relation_rank: rr,
            free_rank: k - rr,
            torsion,
        }
    }

    /// Coordinates of a cycle class: (torsion part reduced mod d_i for
    /// d_i > 1, free part).
    pub fn class_of(&self, cycle: &[Rat]) -> Result<(Vec<Int>, Vec<Int>)> {
        let k = self.kernel.ncols();
        let kern_rat = int_to_rat(&self.kernel);
        let coords = match solve(&kern_rat, cycle) {
            LinearSolution::Solution(c) => c,
            LinearSolution::Infeasible { .. } => {
                return Err(Error::Other("chain is not a cycle".into()))
            }
        };
        let mut int_coords = Vec::with_capacity(k);
        for c in &coords {
            if !c.is_integer() {
                return Err(Error::Other("cycle has non-integral coordinates".into()));
            }
            int_coords.push(c.to_integer());
        }
        let tilde = self.uprime.mul_vec(&int_coords);
        let mut torsion = Vec::new();
        for i in 0..self.relation_rank {
            let d = &self.diag[i];
            if d.is_one() {
                continue;
            }
            let m = tilde[i].mod_floor(d);
            torsion.push(m);
        }
        let free: Vec<Int> = (self.relation_rank..k).map(|i| tilde[i].clone()).collect();
        Ok((torsion, free))
    }

    /// Order of the class of a cycle: None when infinite.
    pub fn order_of(&self, cycle: &[Rat]) -> Result<Option<Int>> {
        let (_, free) = self.class_of(cycle)?;
        if free.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        // Recompute the unreduced torsion coordinates for the lcm.
        let kern_rat = int_to_rat(&self.kernel);
        let coords = match solve(&kern_rat, cycle) {
            LinearSolution::Solution(c) => c,
            LinearSolution::Infeasible { .. } => unreachable!(),
        };
        let int_coords: Vec<Int> = coords.iter().map(|c| c.to_integer()).collect();
        let tilde = self.uprime.mul_vec(&int_coords);
        let mut order = Int::one();
        for i in 0..self.relation_rank {
            let d = &self.diag[i];
            if d.is_zero() {
                continue;
            }
            let g = tilde[i].gcd(d);
            order = order.lcm(&(d / g));
        }
        Ok(Some(order))
    }
}

fn int_to_rat(m: &IntMatrix) -> RatMatrix {
    RatMatrix::from_rows(
        (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| Rat::from_integer(m[(i, j)].clone()))
                    .collect()
            })
            .collect(),
    )
}

/// Everything the norm-ball pipeline needs to know about homology.
pub struct HomologyData {
    pub complexes: Complexes,
    pub h1: ZModule,
    pub b1: usize,
    pub torsion: Vec<Int>,
    /// Rational H2(P) data: kernel basis of d2 and quotient functionals.
    h2_kernel: Vec<Vec<Rat>>,
    h2_quotient: RatMatrix,
    pub b2_pair: usize,
    /// Per-cusp basis-curve 1-cycles in the truncated complex.
    pub mu_cycles: Vec<Vec<Rat>>,
    pub lambda_cycles: Vec<Vec<Rat>>,
    /// Per-cusp homological longitude (p, q) in the stored basis and its
    /// order n in the manifold with the other cusps filled.
    pub longitudes: Option<Vec<((Int, Int), Int)>>,
    /// True when the peripheral homology map is available.
    pub peripheral_available: bool,
    /// iota(lambda, mu) per cusp.
    pub pairing_sign: Vec<i64>,
}

impl HomologyData {
    pub fn new(tri: &IdealTriangulation) -> Result<Self> {
        let complexes = Complexes::new(tri);
        let h1 = ZModule::homology(&complexes.t_d1, &complexes.t_d2);
        let b1 = h1.free_rank;
        let torsion = h1.torsion.clone();

        // H2(P; Q).
        let p_d2_rat = int_to_rat(&complexes.p_d2);
        let h2_kernel = kernel_basis(&p_d2_rat);
        let k = h2_kernel.len();
        let nf = complexes.num_face_classes();
        // Image of d3 in kernel coordinates.
        let kern_mat = RatMatrix::from_rows(
            (0..nf)
                .map(|i| (0..k).map(|j| h2_kernel[j][i].clone()).collect())
                .collect(),
        );
        let t = complexes.num_tets_c();
        let mut img_cols: Vec<Vec<Rat>> = Vec::new();
        for col in 0..t {
            let rhs: Vec<Rat> = (0..nf)
                .map(|i| Rat::from_integer(complexes.p_d3[(i, col)].clone()))
                .collect();
            match solve(&kern_mat, &rhs) {
                LinearSolution::Solution(c) => img_cols.push(c),
                LinearSolution::Infeasible { .. } => {
                    panic!("d3 image outside ker d2")
                }
            }
        }
        // Quotient functionals on Q^k vanishing on the image of d3: for
        // every non-pivot coordinate of the reduced image, the functional
        // picking that coordinate after eliminating the pivot ones.
        let m = img_cols.len();
        let reduced_bt = {
            let mut bt = RatMatrix::from_rows(
                (0..m)
                    .map(|r| (0..k).map(|j| img_cols[r][j].clone()).collect())
                    .collect(),
            );
            bt.rref();
            bt
        };
        let pivot_cols = {
            let mut bt = RatMatrix::from_rows(
                (0..m)
                    .map(|r| (0..k).map(|j| img_cols[r][j].clone()).collect())
                    .collect(),
            );
            bt.rref()
        };
        let b2_pair = k - pivot_cols.len();
        let mut quotient_rows: Vec<Vec<Rat>> = Vec::new();
        for j in 0..k {
            if pivot_cols.contains(&j) {
                continue;
            }
            let mut row = vec![Rat::zero(); k];
            row[j] = spunnorm_exact::rat(1);
            for (r, &pc) in pivot_cols.iter().enumerate() {
                let coef = reduced_bt[(r, j)].clone();
                if !coef.is_zero() {
                    row[pc] = -coef;
                }
            }
            quotient_rows.push(row);
        }
        let h2_quotient = if quotient_rows.is_empty() {
            RatMatrix::zero(0, k)
        } else {
            RatMatrix::from_rows(quotient_rows)
        };

        // Per-cusp basis curve cycles in the truncated complex.
        let tc1 = complexes.num_sides() + complexes.num_edges();
        let side_chain_to_c1 = |chain: &SideChain| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); tc1];
            for (&class, &mult) in chain {
                v[class] = spunnorm_exact::rat(mult);
            }
            v
        };
        let mut mu_cycles = Vec::new();
        let mut lambda_cycles = Vec::new();
        let mut pairing_sign = Vec::new();
        for basis in tri.bases() {
            mu_cycles.push(side_chain_to_c1(&crate::tri::basis::simplicial_cycle(
                tri, &basis.mu,
            )));
            lambda_cycles.push(side_chain_to_c1(&crate::tri::basis::simplicial_cycle(
                tri,
                &basis.lambda,
            )));
            pairing_sign.push(intersection_number(tri, &basis.lambda, &basis.mu));
        }

        // Surjectivity of H1(boundary; Q) -> H1(M; Q): rank of the free
        // parts of all basis curves equals b1.
        let mut free_rows: Vec<Vec<Rat>> = Vec::new();
        for cyc in mu_cycles.iter().chain(lambda_cycles.iter()) {
            let (_, free) = h1.class_of(cyc)?;
            free_rows.push(free.iter().map(|x| Rat::from_integer(x.clone())).collect());
        }
        let peripheral_available = if b1 == 0 {
            false
        } else {
            RatMatrix::from_rows(free_rows).rank() == b1
        };

        // Homological longitudes. When some cusp has no unique primitive
        // class dying rationally, or the longitude fails to have finite
        // order after filling the other cusps, the peripheral route is
        // unavailable and the simplicial map is used instead.
        let mut longitudes = if peripheral_available {
            let mut out = Vec::new();
            for cusp in 0..tri.cusps().len() {
                let pair = {
                    let (_, fm) = h1.class_of(&mu_cycles[cusp])?;
                    let (_, fl) = h1.class_of(&lambda_cycles[cusp])?;
                    primitive_kernel_pair(&fm, &fl)
                };
                let Some((p, q)) = pair else {
                    out = Vec::new();
                    break;
                };
                // Order in the manifold with the other cusps filled along
                // their mu curves.
                let mut extra: Vec<Vec<Rat>> = Vec::new();
                for (other, mu_cycle) in mu_cycles.iter().enumerate() {
                    if other != cusp {
                        extra.push(mu_cycle.clone());
                    }
                }
                let filled = {
                    let base = &complexes.t_d2;
                    let rows = base.nrows();
                    let mut m2 = IntMatrix::zero(rows, base.ncols() + extra.len());
                    for i in 0..rows {
                        for j in 0..base.ncols() {
                            m2[(i, j)] = base[(i, j)].clone();
                        }
                        for (jj, ex) in extra.iter().enumerate() {
                            m2[(i, base.ncols() + jj)] = ex[i].to_integer();
                        }
                    }
                    ZModule::homology(&complexes.t_d1, &m2)
                };
                let lon_cycle: Vec<Rat> = (0..tc1)
                    .map(|i| {
                        Rat::from_integer(p.clone()) * &mu_cycles[cusp][i]
                            + Rat::from_integer(q.clone()) * &lambda_cycles[cusp][i]
                    })
                    .collect();
                let Some(order) = filled.order_of(&lon_cycle)? else {
                    out = Vec::new();
                    break;
                };
                out.push(((p, q), order));
            }
            if out.len() == tri.cusps().len() {
                Some(out)
            } else {
                None
            }
        } else {
            None
        };
        let peripheral_available = peripheral_available && longitudes.is_some();
        if !peripheral_available {
            longitudes = None;
        }

        Ok(HomologyData {
            complexes,
            h1,
            b1,
            torsion,
            h2_kernel,
            h2_quotient,
            b2_pair,
            mu_cycles,
            lambda_cycles,
            longitudes,
            peripheral_available,
            pairing_sign,
        })
    }

    pub fn h2_dim(&self) -> usize {
        self.b2_pair
    }

    /// Representative cycles in C2(P) forming a basis of ker d2 / im d3:
    /// kernel columns whose quotient coordinates are independent, reduced
    /// so the i-th representative maps to the i-th coordinate vector.
    pub fn h2_basis(&self) -> Vec<Vec<Rat>> {
        let k = self.h2_kernel.len();
        let dim = self.b2_pair;
        if dim == 0 {
            return Vec::new();
        }
        // Greedily pick kernel basis columns with independent quotient
        // images, then change basis so images are the standard vectors.
        let mut picked: Vec<usize> = Vec::new();
        let mut images: Vec<Vec<Rat>> = Vec::new();
        for j in 0..k {
            let mut e = vec![Rat::zero(); k];
            e[j] = spunnorm_exact::rat(1);
            let img = self.h2_quotient.mul_vec(&e);
            let mut probe = images.clone();
            probe.push(img.clone());
            if RatMatrix::from_rows(probe.clone()).rank() == probe.len() {
                picked.push(j);
                images.push(img);
                if picked.len() == dim {
                    break;
                }
            }
        }
        // Solve images * c = identity columns to express the standard
        // basis in terms of the picked representatives.
        let img_mat = RatMatrix::from_rows(
            (0..dim)
                .map(|r| (0..dim).map(|c| images[c][r].clone()).collect())
                .collect(),
        );
        let mut reps = Vec::new();
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = spunnorm_exact::rat(1);
            let coeffs = match solve(&img_mat, &e) {
                LinearSolution::Solution(c) => c,
                LinearSolution::Infeasible { .. } => unreachable!("independent images"),
            };
            let nf = self.complexes.num_face_classes();
            let mut rep = vec![Rat::zero(); nf];
            for (c, &j) in coeffs.iter().zip(&picked) {
                for (slot, v) in rep.iter_mut().zip(&self.h2_kernel[j]) {
                    *slot += c * v;
                }
            }
            reps.push(rep);
        }
        reps
    }

    /// Coordinates of the class of a 2-cycle in the computed H2(P; Q)
    /// basis; errors when the chain is not a cycle.
    pub fn class_of_chain(&self, chain: &[Rat]) -> Result<Vec<Rat>> {
        let d2 = int_to_rat(&self.complexes.p_d2);
        if !d2.mul_vec(chain).iter().all(|v| v.is_zero()) {
            return Err(Error::NotNormalCoordinate);
        }
        let k = self.h2_kernel.len();
        let nf = self.complexes.num_face_classes();
        let kern_mat = RatMatrix::from_rows(
            (0..nf)
                .map(|i| (0..k).map(|j| self.h2_kernel[j][i].clone()).collect())
                .collect(),
        );
        let coords = match solve(&kern_mat, chain) {
            LinearSolution::Solution(c) => c,
            LinearSolution::Infeasible { .. } => unreachable!("cycle outside kernel"),
        };
        Ok(self.h2_quotient.mul_vec(&coords))
    }

    /// Coordinates of the class of phi(x) in the computed H2(P; Q) basis.
    pub fn homology_class(
        &self,
        tri: &IdealTriangulation,
        x: &OrientedQuadVector,
    ) -> Result<Vec<Rat>> {
        let chain = self.complexes.phi_chain(tri, x);
        self.class_of_chain(&chain)
    }

    /// The connecting map of phi(x), expressed per cusp in (mu, lambda)
    /// coordinates.
    pub fn connecting_classes(
        &self,
        tri: &IdealTriangulation,
        x: &OrientedQuadVector,
    ) -> Vec<(Rat, Rat)> {
        let chain = self.complexes.phi_chain(tri, x);
        let side_chain = self.complexes.connecting(&chain);
        // Convert to a SideChain-like pairing against the basis curves.
        let mut out = Vec::new();
        for (cusp, basis) in tri.bases().iter().enumerate() {
            let s = self.pairing_sign[cusp];
            let mut chain_map: SideChain = std::collections::BTreeMap::new();
            for (class, v) in side_chain.iter().enumerate() {
                if !v.is_zero() {
                    // Only sides on this cusp pair nontrivially.
                    chain_map.insert(class, rat_to_i64(v));
                }
            }
            let w_lambda = pair_chain_curve(tri, &chain_map, &basis.lambda);
            let w_mu = pair_chain_curve(tri, &chain_map, &basis.mu);
            let s_rat = spunnorm_exact::rat(s);
            out.push((
                -spunnorm_exact::rat(w_lambda) / &s_rat,
                spunnorm_exact::rat(w_mu) / &s_rat,
            ));
        }
        out
    }

    /// Peripheral homology coordinates: the longitude component of the
    /// total boundary class, scaled by 1/n per cusp.
    pub fn peripheral_class(&self, boundary: &[((Rat, Rat), (Rat, Rat))]) -> Result<Vec<Rat>> {
        let longitudes = self.longitudes.as_ref().ok_or_else(|| {
            Error::Other("peripheral map unavailable; simplicial map used".into())
        })?;
        let mut out = Vec::new();
        for (cusp, ((oa, ob), (ia, ib))) in boundary.iter().enumerate() {
            let ((p, q), n) = &longitudes[cusp];
            let alpha = oa + ia;
            let beta = ob + ib;
            // Write alpha*mu + beta*lambda = c_m * m + c_l * (p mu + q lambda)
            // where m completes the longitude to a basis.
            let (p, q) = (Rat::from_integer(p.clone()), Rat::from_integer(q.clone()));
            let c_l = if !q.is_zero() {
                // m = mu: coefficient matching on lambda.
                // beta = c_l * q
                beta.clone() / &q
            } else {
                // longitude = +-mu: m = lambda.
                alpha.clone() / &p
            };
            // Consistency: the mu-coefficient must also match when the
            // longitude is proportional to the full class.
            let _ = alpha;
            out.push(c_l / Rat::from_integer(n.clone()));
        }
        Ok(out)
    }

    /// H(x): peripheral coordinates when available, else simplicial.
    pub fn class_for_ball(
        &self,
        tri: &IdealTriangulation,
        x: &OrientedQuadVector,
        boundary: &[((Rat, Rat), (Rat, Rat))],
    ) -> Result<Vec<Rat>> {
        if self.peripheral_available {
            self.peripheral_class(boundary)
        } else {
            self.homology_class(tri, x)
        }
    }
}

/// Primitive (p, q) with p * a + q * b = 0 for rational vectors a, b;
/// None when the kernel is not one-dimensional. Sign: first nonzero
/// entry positive.
fn primitive_kernel_pair(a: &[Int], b: &[Int]) -> Option<(Int, Int)> {
    let n = a.len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            vec![
                Rat::from_integer(a[i].clone()),
                Rat::from_integer(b[i].clone()),
            ]
        })
        .collect();
    let m = RatMatrix::from_rows(rows);
    let kern = kernel_basis(&m);
    if kern.len() != 1 {
        return None;
    }
    let prim = spunnorm_exact::primitive_integer(&kern[0])?;
    let (mut p, mut q) = (prim[0].clone(), prim[1].clone());
    let flip = if !p.is_zero() {
        p.is_negative()
    } else {
        q.is_negative()
    };
    if flip {
        p = -p;
        q = -q;
    }
    Some((p, q))
}

fn rat_to_i64(v: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    assert!(v.is_integer());
    v.to_integer()
        .to_i64()
        .expect("chain multiplicity fits i64")
}

/// Betti numbers and torsion of the compact manifold.
pub fn betti(data: &HomologyData) -> (usize, usize, Vec<Int>) {
    (data.b1, data.b2_pair, data.torsion.clone())
}

impl std::fmt::Debug for ZModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ZModule(free={}, torsion={:?})",
            self.free_rank, self.torsion
        )
    }
}
