//! Outward/inward boundary functionals and boundary curve maps of
//! transversely oriented quad vectors, spinning slopes, boundary
//! component counts, and the end-embeddability criterion.

use num_integer::Integer;
use num_traits::Zero;
use spunnorm_exact::{Int, Rat};

use crate::qcoords::{
    complement, OrientedQuadType, OrientedQuadVector, UnorientedQuadVector, PAIRS,
};
use crate::tri::basis::intersection_number;
use crate::tri::{IdealTriangulation, PeripheralCurve};

/// The four boundary-arc slots of an oriented quad: at each cusp triangle
/// (tet, corner) the arc lies in the side contained in `face`. Outward
/// arcs sit at the positive pair's corners, inward arcs at the others.
pub fn arc_slots(q: OrientedQuadType) -> ([(u8, u8); 2], [(u8, u8); 2]) {
    let (a, b) = q.pos;
    let (c, d) = complement(q.pos);
    // (corner, face containing the arc).
    let outward = [(a, b), (b, a)];
    let inward = [(c, d), (d, c)];
    (outward, inward)
}

/// w^+- of a single oriented quad type against a normal curve: a curve
/// step entering through an outward arc's side contributes +1, leaving
/// contributes -1; signs are switched for inward arcs.
pub fn w_pm_quad(q: OrientedQuadType, gamma: &PeripheralCurve) -> (i64, i64) {
    let (outward, inward) = arc_slots(q);
    let mut wp = 0i64;
    let mut wm = 0i64;
    for step in &gamma.steps {
        if step.tet != q.tet {
            continue;
        }
        for &(corner, face) in &outward {
            if step.vertex == corner {
                if step.enter == face {
                    wp += 1;
                }
                if step.exit == face {
                    wp -= 1;
                }
            }
        }
        for &(corner, face) in &inward {
            if step.vertex == corner {
                if step.enter == face {
                    wm -= 1;
                }
                if step.exit == face {
                    wm += 1;
                }
            }
        }
    }
    (wp, wm)
}

/// Linear extension of the per-quad crossing counts over a vector.
pub fn w_pm(
    _tri: &IdealTriangulation,
    gamma: &PeripheralCurve,
    x: &OrientedQuadVector,
) -> (Rat, Rat) {
    let mut wp = Rat::zero();
    let mut wm = Rat::zero();
    for (q, v) in x.iter_nonzero() {
        let (p, m) = w_pm_quad(q, gamma);
        if p != 0 {
            wp += Rat::from_integer(p.into()) * v;
        }
        if m != 0 {
            wm += Rat::from_integer(m.into()) * v;
        }
    }
    (wp, wm)
}

/// Per-cusp boundary classes a*mu + b*lambda of the outward and inward
/// ends of the surface with coordinate x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryClass {
    /// One (outward, inward) pair of (a, b) coordinates per cusp.
    pub per_cusp: Vec<((Rat, Rat), (Rat, Rat))>,
    /// True when any cusp uses an internally derived basis.
    pub internal_basis: bool,
}

/// Assembles (a, b) with [c] = a*mu + b*lambda from the crossing
/// functionals, using the measured pairing s = iota(lambda, mu).
fn class_coords(w_lambda: Rat, w_mu: Rat, s: i64) -> (Rat, Rat) {
    let s = Rat::from_integer(s.into());
    (-w_lambda / &s, w_mu / &s)
}

pub fn boundary_classes(tri: &IdealTriangulation, x: &OrientedQuadVector) -> BoundaryClass {
    let mut per_cusp = Vec::new();
    let mut internal = false;
    for basis in tri.bases() {
        internal = internal || basis.internal;
        let s = intersection_number(tri, &basis.lambda, &basis.mu);
        let (wp_mu, wm_mu) = w_pm(tri, &basis.mu, x);
        let (wp_la, wm_la) = w_pm(tri, &basis.lambda, x);
        let outward = class_coords(wp_la, wp_mu, s);
        let inward = class_coords(wm_la, wm_mu, s);
        per_cusp.push((outward, inward));
    }
    BoundaryClass {
        per_cusp,
        internal_basis: internal,
    }
}

/// Spinning slopes of an unoriented vector: orientations on the
/// boundary come from the spin direction, so each quad contributes its
/// outward minus inward crossings (independent of the chosen lift).
pub fn spinning_slopes(tri: &IdealTriangulation, x: &UnorientedQuadVector) -> Vec<(Rat, Rat)> {
    let mut out = Vec::new();
    for basis in tri.bases() {
        let s = intersection_number(tri, &basis.lambda, &basis.mu);
        let mut w_mu = Rat::zero();
        let mut w_la = Rat::zero();
        for (u, v) in x.iter_nonzero() {
            let (p, _) = u.pairs();
            let q = OrientedQuadType { tet: u.tet, pos: p };
            let (pp_mu, mm_mu) = w_pm_quad(q, &basis.mu);
            let (pp_la, mm_la) = w_pm_quad(q, &basis.lambda);
            w_mu += Rat::from_integer((pp_mu - mm_mu).into()) * v;
            w_la += Rat::from_integer((pp_la - mm_la).into()) * v;
        }
        out.push(class_coords(w_la, w_mu, s));
    }
    out
}

fn gcd_pair(a: &Rat, b: &Rat) -> Option<Int> {
    if !a.is_integer() || !b.is_integer() {
        return None;
    }
    Some(a.to_integer().gcd(&b.to_integer()))
}

/// Number of boundary components per cusp: (k1, k2) with k the gcd of the
/// outward resp. inward class, 0 for the zero class.
pub fn num_boundary_components(
    tri: &IdealTriangulation,
    x: &OrientedQuadVector,
) -> (Vec<(Int, Int)>, Int) {
    let classes = boundary_classes(tri, x);
    let mut out = Vec::new();
    let mut total = Int::zero();
    for ((oa, ob), (ia, ib)) in &classes.per_cusp {
        let k1 = gcd_pair(oa, ob).expect("integral vector");
        let k2 = gcd_pair(ia, ib).expect("integral vector");
        total += &k1 + &k2;
        out.push((k1, k2));
    }
    (out, total)
}

fn primitive_class(a: &Rat, b: &Rat) -> Option<(Int, Int)> {
    let g = gcd_pair(a, b)?;
    if g.is_zero() {
        return Some((Int::zero(), Int::zero()));
    }
    Some((a.to_integer() / &g, b.to_integer() / &g))
}

/// The union of the ends can be normally homotoped to be embedded iff at
/// every cusp the primitive outward class equals the primitive class of
/// the negated inward class, or one of the two vanishes.
pub fn ends_embeddable(tri: &IdealTriangulation, x: &OrientedQuadVector) -> bool {
    let classes = boundary_classes(tri, x);
    for ((oa, ob), (ia, ib)) in &classes.per_cusp {
        let pout = primitive_class(oa, ob).expect("integral vector");
        let pin = primitive_class(&-ia.clone(), &-ib.clone()).expect("integral vector");
        let zero = (Int::zero(), Int::zero());
        if pout == zero || pin == zero {
            continue;
        }
        if pout != pin {
            return false;
        }
    }
    true
}

/// Signed contribution counts used by the figure-8 example: per oriented
/// matching row, the numbers of positive and negative slope corners among
/// the quads of x.
pub fn slope_sign_census(
    tri: &IdealTriangulation,
    x: &OrientedQuadVector,
) -> Vec<(usize, bool, i64, i64)> {
    use crate::qcoords::slope;
    let mut out = Vec::new();
    for e in tri.edges() {
        for &forward in &[true, false] {
            let mut pos = 0i64;
            let mut neg = 0i64;
            for step in &e.around {
                let (tail, head) = if forward {
                    step.pair
                } else {
                    (step.pair.1, step.pair.0)
                };
                for &pp in PAIRS.iter() {
                    let q = OrientedQuadType {
                        tet: step.tet,
                        pos: pp,
                    };
                    let u = q.forget();
                    if !u.meets_edge(tail, head) {
                        continue;
                    }
                    let in_pos = |v: u8| v == pp.0 || v == pp.1;
                    if !in_pos(head) {
                        continue;
                    }
                    let val = x.get(q);
                    if val.is_zero() {
                        continue;
                    }
                    let s = slope(tri, u, tail, head);
                    let count = val.to_integer().try_into().unwrap_or(0i64);
                    if s > 0 {
                        pos += count;
                    } else {
                        neg += count;
                    }
                }
            }
            out.push((e.id, forward, pos, neg));
        }
    }
    out
}
