//! Normal curves on cusp cross-sections: crossing signs, flow (cocycle)
//! coordinates, realization of flows as normal multicurves, intersection
//! numbers, and derivation of an internal (mu, lambda) basis.

use std::collections::BTreeMap;

use num_traits::Zero;
use spunnorm_exact::{smith_normal_form, Int, IntMatrix};

use crate::error::{Error, Result};
use crate::tri::{CurveStep, CuspBasis, IdealTriangulation, PeripheralCurve, Side};

/// True when (x, y) is a positively oriented (consecutive) pair in the
/// cyclic corner order of the cusp triangle at (tet, v).
fn consecutive_sign(tri: &IdealTriangulation, tet: usize, v: u8, x: u8, y: u8) -> i8 {
    let cyc = tri.triangle_cycle(tet, v);
    let pos = |c: u8| cyc.iter().position(|&w| w == c).expect("corner label");
    let (px, py) = (pos(x), pos(y));
    if (px + 1) % 3 == py {
        1
    } else {
        debug_assert_eq!((py + 1) % 3, px);
        -1
    }
}

/// Reference direction of a side class, expressed as corner labels in the
/// given incident side's triangle. The reference direction is ascending
/// corner labels in the representative side.
pub fn class_direction_in(tri: &IdealTriangulation, side: Side) -> (u8, u8) {
    let class = tri.side_class(side);
    let [rep, _] = tri.side_rep(class);
    let (rt, rv, rf) = rep;
    let mut corners: Vec<u8> = (0..4u8).filter(|&w| w != rv && w != rf).collect();
    corners.sort();
    let (x, y) = (corners[0], corners[1]);
    if side == rep {
        (x, y)
    } else {
        let g = tri.gluing(rt, rf);
        debug_assert_eq!(tri.side_partner(rep), side);
        (g.perm.apply(x), g.perm.apply(y))
    }
}

/// Sign of a crossing where a curve passes through the side of the cusp
/// triangle at (tet, v) lying in `face`, measured against the side
/// class's reference direction. `entering` tells whether the curve enters
/// or leaves the triangle through this side.
pub fn crossing_sign(tri: &IdealTriangulation, tet: usize, v: u8, face: u8, entering: bool) -> i8 {
    let side: Side = (tet, v, face);
    let (x, y) = class_direction_in(tri, side);
    let s = consecutive_sign(tri, tet, v, x, y);
    if entering {
        s
    } else {
        -s
    }
}

/// Net signed crossings of the curve through every side class, measured
/// against the class reference directions. This is the curve's dual
/// cocycle (its flow coordinates).
pub fn flows(tri: &IdealTriangulation, curve: &PeripheralCurve) -> BTreeMap<usize, i64> {
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    for step in &curve.steps {
        let class = tri.side_class((step.tet, step.vertex, step.enter));
        *out.entry(class).or_insert(0) +=
            crossing_sign(tri, step.tet, step.vertex, step.enter, true) as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Evaluates a flow vector (cocycle) against a normal curve: the signed
/// count of the curve's crossings weighted by the flow.
pub fn pair_flow_curve(
    tri: &IdealTriangulation,
    flow: &BTreeMap<usize, i64>,
    curve: &PeripheralCurve,
) -> i64 {
    let mut total = 0i64;
    for step in &curve.steps {
        let class = tri.side_class((step.tet, step.vertex, step.enter));
        if let Some(&w) = flow.get(&class) {
            total += w * crossing_sign(tri, step.tet, step.vertex, step.enter, true) as i64;
        }
    }
    total
}

/// A 1-chain on the cusp 1-skeleton: multiplicity per side class,
/// relative to the class reference directions.
pub type SideChain = BTreeMap<usize, i64>;

/// Replaces each normal arc of the curve by a boundary path between the
/// anchor corners of its enter and exit sides, producing a homologous
/// simplicial 1-cycle.
pub fn simplicial_cycle(tri: &IdealTriangulation, curve: &PeripheralCurve) -> SideChain {
    let mut chain: SideChain = BTreeMap::new();
    for step in &curve.steps {
        let anchor_in = class_direction_in(tri, (step.tet, step.vertex, step.enter)).0;
        let anchor_out = class_direction_in(tri, (step.tet, step.vertex, step.exit)).0;
        // Walk positively around the triangle from anchor_in to anchor_out.
        let cyc = tri.triangle_cycle(step.tet, step.vertex);
        let mut cur = anchor_in;
        while cur != anchor_out {
            let pos = cyc.iter().position(|&w| w == cur).unwrap();
            let next = cyc[(pos + 1) % 3];
            // Directed corner path cur -> next lies in the side not
            // containing the remaining corner.
            let side_face = 6 - step.vertex - cur - next;
            let side: Side = (step.tet, step.vertex, side_face);
            let class = tri.side_class(side);
            let (x, _) = class_direction_in(tri, side);
            let sign = if x == cur { 1 } else { -1 };
            *chain.entry(class).or_insert(0) += sign;
            cur = next;
        }
    }
    chain.retain(|_, v| *v != 0);
    chain
}

/// Signed intersection count of a simplicial 1-cycle with a normal curve.
/// The two are transverse since the cycle runs along 1-cells and the curve
/// crosses their interiors.
pub fn pair_chain_curve(
    tri: &IdealTriangulation,
    chain: &SideChain,
    curve: &PeripheralCurve,
) -> i64 {
    pair_flow_curve(tri, chain, curve)
}

/// Algebraic intersection number of two normal curves on one cusp torus,
/// computed by straightening the first onto the 1-skeleton.
pub fn intersection_number(
    tri: &IdealTriangulation,
    a: &PeripheralCurve,
    b: &PeripheralCurve,
) -> i64 {
    pair_chain_curve(tri, &simplicial_cycle(tri, a), b)
}

pub fn reversed(curve: &PeripheralCurve) -> PeripheralCurve {
    PeripheralCurve {
        cusp: curve.cusp,
        steps: curve
            .steps
            .iter()
            .rev()
            .map(|s| CurveStep {
                tet: s.tet,
                vertex: s.vertex,
                enter: s.exit,
                exit: s.enter,
            })
            .collect(),
    }
}

/// Checks that the step list is a closed normal curve on a single cusp.
pub fn validate_curve(tri: &IdealTriangulation, curve: &PeripheralCurve) -> Result<()> {
    if curve.steps.is_empty() {
        return Err(Error::BadPeripheralCurve("empty step list".into()));
    }
    for step in &curve.steps {
        if step.vertex > 3
            || step.enter > 3
            || step.exit > 3
            || step.enter == step.vertex
            || step.exit == step.vertex
            || step.enter == step.exit
            || step.tet >= tri.num_tets()
        {
            return Err(Error::BadPeripheralCurve(format!("invalid step {step:?}")));
        }
        if tri.cusp_of(step.tet, step.vertex) != curve.cusp {
            return Err(Error::BadPeripheralCurve(format!(
                "step {step:?} lies on cusp {}, expected {}",
                tri.cusp_of(step.tet, step.vertex),
                curve.cusp
            )));
        }
    }
    for (i, step) in curve.steps.iter().enumerate() {
        let next = &curve.steps[(i + 1) % curve.steps.len()];
        let partner = tri.side_partner((step.tet, step.vertex, step.exit));
        if partner != (next.tet, next.vertex, next.enter) {
            return Err(Error::BadPeripheralCurve(format!(
                "steps {i} and {} do not share a cusp edge",
                (i + 1) % curve.steps.len()
            )));
        }
    }
    Ok(())
}

/// The oriented boundary of a small disc around one cusp vertex class,
/// as a normal curve.
pub fn loop_around_corner(tri: &IdealTriangulation, corner_class: usize) -> PeripheralCurve {
    // Find a corner in the class and walk around it.
    let mut start = None;
    'outer: for tet in 0..tri.num_tets() {
        for v in 0..4u8 {
            for w in 0..4u8 {
                if w != v && tri.corner_class((tet, v, w)) == corner_class {
                    start = Some((tet, v, w));
                    break 'outer;
                }
            }
        }
    }
    let (tet0, v0, w0) = start.expect("corner class out of range");
    let cusp = tri.cusp_of(tet0, v0);
    // In the triangle at (tet, v), the arc cutting off corner w runs
    // between the two sides adjacent to w. Walk so that consecutive steps
    // share a side.
    let mut steps = Vec::new();
    let mut cur = (tet0, v0, w0);
    loop {
        let (tet, v, w) = cur;
        let sides: Vec<u8> = (0..4u8).filter(|&f| f != v && f != w).collect();
        // Orient the loop positively: exit through the side such that the
        // walk turns consistently; entering side is fixed by the previous
        // step, so on the first step pick by corner cycle.
        let cyc = tri.triangle_cycle(tet, v);
        let posw = cyc.iter().position(|&c| c == w).unwrap();
        let after = cyc[(posw + 1) % 3];
        // sides = {others} minus w; cyc = (w, after, before) in some
        // rotation. Enter through the side not containing `after`, exit
        // through the side not containing `before`.
        let before = cyc[(posw + 2) % 3];
        let enter = after;
        let exit = before;
        debug_assert!(sides.contains(&enter) && sides.contains(&exit));
        steps.push(CurveStep {
            tet,
            vertex: v,
            enter,
            exit,
        });
        let (nt, nv, nf) = tri.side_partner((tet, v, exit));
        let g = tri.gluing(tet, exit);
        let nw = g.perm.apply(w);
        cur = (nt, nv, nw);
        debug_assert_eq!(tri.corner_class(cur), corner_class);
        let _ = nf;
        if cur == (tet0, v0, w0) {
            break;
        }
    }
    PeripheralCurve { cusp, steps }
}

/// Realizes a flow vector as an embedded normal multicurve on one cusp.
/// Returns the list of components. The flow must satisfy the cocycle
/// condition on every triangle of the cusp.
pub fn realize_flows(
    tri: &IdealTriangulation,
    cusp: usize,
    flow: &BTreeMap<usize, i64>,
) -> Result<Vec<Vec<CurveStep>>> {
    // Directed arcs per triangle: (enter side, exit side) -> count.
    #[derive(Default, Clone)]
    struct TriArcs {
        // arcs[corner w] = (direction, count): direction true means the
        // arc runs enter=side_a -> exit=side_b where (a, b) are the sides
        // adjacent to w in ascending face order.
        counts: BTreeMap<u8, (bool, i64)>,
    }
    let mut tri_arcs: BTreeMap<(usize, u8), TriArcs> = BTreeMap::new();

    for &(tet, v) in &tri.cusps()[cusp].triangles {
        let faces: Vec<u8> = (0..4u8).filter(|&f| f != v).collect();
        // Net inflow through each side.
        let mut inflow: BTreeMap<u8, i64> = BTreeMap::new();
        for &f in &faces {
            let class = tri.side_class((tet, v, f));
            let w = flow.get(&class).copied().unwrap_or(0);
            let e = crossing_sign(tri, tet, v, f, true) as i64;
            inflow.insert(f, w * e);
        }
        let total: i64 = inflow.values().sum();
        if total != 0 {
            return Err(Error::BadPeripheralCurve(format!(
                "flow is not a cocycle at triangle ({tet},{v})"
            )));
        }
        // Decompose net inflows into directed corner arcs: positive sides
        // feed negative sides; a corner arc between sides f1, f2 cuts off
        // the remaining corner w = 6 - v - f1 - f2.
        let mut arcs = TriArcs::default();
        let pos: Vec<u8> = faces.iter().copied().filter(|f| inflow[f] > 0).collect();
        let neg: Vec<u8> = faces.iter().copied().filter(|f| inflow[f] < 0).collect();
        let mut remaining: BTreeMap<u8, i64> = inflow.clone();
        for &p in &pos {
            for &n in &neg {
                let amount = remaining[&p].min(-remaining[&n]);
                if amount <= 0 {
                    continue;
                }
                *remaining.get_mut(&p).unwrap() -= amount;
                *remaining.get_mut(&n).unwrap() += amount;
                let w = 6 - v - p - n;
                let ascending = p < n;
                arcs.counts.insert(w, (ascending, amount));
            }
        }
        tri_arcs.insert((tet, v), arcs);
    }

    // Strand positions along each side, measured from the source corner of
    // the class reference direction. Arcs at corner w occupy the w-end.
    let strand_count = |arcs: &TriArcs, tet: usize, v: u8, f: u8, corner: u8| -> i64 {
        let _ = (tet, v, f);
        arcs.counts.get(&corner).map(|&(_, c)| c).unwrap_or(0)
    };

    // An arc instance: (tet, v, corner w, rank). Its endpoint position on
    // side f (one of the two sides at w): rank measured from w, converted
    // to a position from the side's reference source corner.
    let position_on_side = |arcs: &TriArcs, tet: usize, v: u8, f: u8, w: u8, rank: i64| -> i64 {
        let (src, dst) = {
            let side: Side = (tet, v, f);
            class_direction_in(tri, side)
        };
        debug_assert!(w == src || w == dst);
        let n_src = strand_count(arcs, tet, v, f, src);
        let n_dst = strand_count(arcs, tet, v, f, dst);
        let _ = n_dst;
        if w == src {
            rank
        } else {
            n_src + (strand_count(arcs, tet, v, f, dst) - 1 - rank)
        }
    };

    // For walking: given (tet, v, entering side f, position), find the arc
    // instance that starts there, i.e. the arc with an endpoint at that
    // position whose direction ENTERS through f.
    let arc_entering =
        |arcs: &TriArcs, tet: usize, v: u8, f: u8, posn: i64| -> Option<(u8, i64, u8)> {
            // Returns (corner w, rank, exit side).
            for (&w, &(ascending, count)) in &arcs.counts {
                let sides: Vec<u8> = (0..4u8).filter(|&x| x != v && x != w).collect();
                let (sa, sb) = (sides[0], sides[1]);
                let (enter, exit) = if ascending { (sa, sb) } else { (sb, sa) };
                if enter != f {
                    continue;
                }
                for rank in 0..count {
                    if position_on_side(arcs, tet, v, f, w, rank) == posn {
                        return Some((w, rank, exit));
                    }
                }
            }
            None
        };

    // Consume arcs into closed walks.
    let mut used: BTreeMap<(usize, u8, u8, i64), bool> = BTreeMap::new();
    let mut components: Vec<Vec<CurveStep>> = Vec::new();
    let keys: Vec<(usize, u8)> = tri_arcs.keys().copied().collect();
    for &(tet0, v0) in &keys {
        let arcs0 = tri_arcs[&(tet0, v0)].clone();
        for (&w0, &(asc0, count0)) in &arcs0.counts {
            for rank0 in 0..count0 {
                if used.contains_key(&(tet0, v0, w0, rank0)) {
                    continue;
                }
                // Walk forward from this arc.
                let mut steps: Vec<CurveStep> = Vec::new();
                let (mut tet, mut v, mut w, mut rank) = (tet0, v0, w0, rank0);
                let mut asc = asc0;
                loop {
                    if used.insert((tet, v, w, rank), true).is_some() {
                        return Err(Error::BadPeripheralCurve(
                            "flow realization revisited an arc".into(),
                        ));
                    }
                    let sides: Vec<u8> = (0..4u8).filter(|&x| x != v && x != w).collect();
                    let (enter, exit) = if asc {
                        (sides[0], sides[1])
                    } else {
                        (sides[1], sides[0])
                    };
                    steps.push(CurveStep {
                        tet,
                        vertex: v,
                        enter,
                        exit,
                    });
                    // Cross the exit side.
                    let arcs_here = &tri_arcs[&(tet, v)];
                    let posn = position_on_side(arcs_here, tet, v, exit, w, rank);
                    let (nt, nv, nf) = tri.side_partner((tet, v, exit));
                    let arcs_next = tri_arcs
                        .get(&(nt, nv))
                        .ok_or_else(|| Error::BadPeripheralCurve("flow leaves the cusp".into()))?;
                    let Some((nw, nrank, _nexit)) = arc_entering(arcs_next, nt, nv, nf, posn)
                    else {
                        return Err(Error::BadPeripheralCurve(
                            "flow strands do not match across a cusp edge".into(),
                        ));
                    };
                    let (nasc, _) = arcs_next.counts[&nw];
                    // Verify the entering side of the next arc is nf.
                    tet = nt;
                    v = nv;
                    w = nw;
                    rank = nrank;
                    asc = nasc;
                    if (tet, v, w, rank) == (tet0, v0, w0, rank0) {
                        break;
                    }
                }
                components.push(steps);
            }
        }
    }
    components.sort();
    Ok(components)
}

/// Derives a deterministic internal (mu, lambda) basis of simple normal
/// curves on the given cusp, with intersection number iota(lambda, mu) = 1.
pub fn derive_cusp_basis(tri: &IdealTriangulation, cusp: usize) -> Result<CuspBasis> {
    let triangles = &tri.cusps()[cusp].triangles;
    // Side classes and corner classes restricted to this cusp.
    let mut side_ids: Vec<usize> = Vec::new();
    let mut corner_ids: Vec<usize> = Vec::new();
    for &(tet, v) in triangles {
        for f in 0..4u8 {
            if f == v {
                continue;
            }
            side_ids.push(tri.side_class((tet, v, f)));
            for w in 0..4u8 {
                if w != v && w != f {
                    corner_ids.push(tri.corner_class((tet, v, w)));
                }
            }
        }
    }
    side_ids.sort();
    side_ids.dedup();
    corner_ids.sort();
    corner_ids.dedup();
    let side_index: BTreeMap<usize, usize> =
        side_ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let n = side_ids.len();

    // Cocycle condition rows: one per triangle.
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for &(tet, v) in triangles {
        let mut row = vec![Int::zero(); n];
        for f in 0..4u8 {
            if f == v {
                continue;
            }
            let class = tri.side_class((tet, v, f));
            let e = crossing_sign(tri, tet, v, f, true);
            row[side_index[&class]] += Int::from(e);
        }
        rows.push(row);
    }
    let delta1 = IntMatrix::from_rows(rows);

    // Integral kernel basis from the SNF column transform.
    let snf = smith_normal_form(&delta1);
    let rank = snf.rank();
    let kernel: Vec<Vec<Int>> = (rank..n)
        .map(|j| (0..n).map(|i| snf.v[(i, j)].clone()).collect())
        .collect();

    // Coboundaries of the cusp's 0-cells.
    let coboundary = |corner_class: usize| -> Vec<Int> {
        let mut theta = vec![Int::zero(); n];
        for (i, &sc) in side_ids.iter().enumerate() {
            let [rep, partner] = tri.side_rep(sc);
            let _ = partner;
            let (rt, rv, rf) = rep;
            let (src, dst) = class_direction_in(tri, rep);
            let _ = rf;
            let src_class = tri.corner_class((rt, rv, src));
            let dst_class = tri.corner_class((rt, rv, dst));
            if dst_class == corner_class {
                theta[i] += Int::from(1);
            }
            if src_class == corner_class {
                theta[i] -= Int::from(1);
            }
        }
        theta
    };
    let cobs: Vec<Vec<Int>> = corner_ids.iter().map(|&c| coboundary(c)).collect();

    // Quotient ker / coboundaries: express coboundaries in kernel
    // coordinates and split off the free part.
    let free_gens = quotient_free_generators(&kernel, &cobs)?;
    if free_gens.len() != 2 {
        return Err(Error::Other(format!(
            "cusp {cusp}: expected H^1 of rank 2, got {}",
            free_gens.len()
        )));
    }

    let to_flow = |theta: &[Int]| -> BTreeMap<usize, i64> {
        let mut m = BTreeMap::new();
        for (i, v) in theta.iter().enumerate() {
            let val = int_to_i64(v);
            if val != 0 {
                m.insert(side_ids[i], val);
            }
        }
        m
    };

    let reduce = |theta: Vec<Int>| reduce_weight(theta, &cobs);

    let g1 = reduce(free_gens[0].clone());
    let g2 = reduce(free_gens[1].clone());

    let curve_of = |theta: &[Int]| -> Result<PeripheralCurve> {
        let flow = to_flow(theta);
        let comps = realize_flows(tri, cusp, &flow)?;
        let essential: Vec<_> = comps;
        if essential.len() != 1 {
            return Err(Error::Other(format!(
                "cusp {cusp}: basis flow realized as {} components",
                essential.len()
            )));
        }
        Ok(PeripheralCurve {
            cusp,
            steps: essential.into_iter().next().unwrap(),
        })
    };

    let mu = curve_of(&g1)?;
    let lambda = curve_of(&g2)?;
    normalize_basis(tri, mu, lambda, true)
}

/// Validates intersection pairing and orients lambda so that
/// iota(lambda, mu) = +1.
pub fn normalize_basis(
    tri: &IdealTriangulation,
    mu: PeripheralCurve,
    lambda: PeripheralCurve,
    internal: bool,
) -> Result<CuspBasis> {
    let i = intersection_number(tri, &lambda, &mu);
    if i.abs() != 1 {
        return Err(Error::BadPeripheralCurve(format!(
            "basis curves have intersection number {i}, expected +-1"
        )));
    }
    let lambda = if i == 1 {
        lambda
    } else if internal {
        reversed(&lambda)
    } else {
        // Keep user-provided curves as given; the pairing sign is
        // consulted where coordinates are assembled.
        lambda
    };
    Ok(CuspBasis {
        mu,
        lambda,
        internal,
    })
}

/// iota(lambda, mu) for a stored basis.
pub fn basis_pairing(tri: &IdealTriangulation, basis: &CuspBasis) -> i64 {
    intersection_number(tri, &basis.lambda, &basis.mu)
}

/// Free generators of kernel / span(relations); all vectors are in the
/// ambient coordinates of the kernel vectors.
fn quotient_free_generators(kernel: &[Vec<Int>], relations: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let k = kernel.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = kernel[0].len();
    // Solve kernel-coordinates of each relation: K c = r where K has the
    // kernel vectors as columns.
    let kmat = IntMatrix::from_rows(
        (0..n)
            .map(|i| (0..k).map(|j| kernel[j][i].clone()).collect())
            .collect(),
    );
    let coords = integer_coordinates(&kmat, relations)?;
    // coords: k x (#relations) matrix C; quotient = Z^k / im C.
    let c = IntMatrix::from_rows(
        (0..k)
            .map(|i| (0..relations.len()).map(|j| coords[j][i].clone()).collect())
            .collect(),
    );
    let snf = smith_normal_form(&c);
    let rank = snf.rank();
    // New basis K~ = K * U^{-1}; free generators are the columns past rank.
    let uinv = unimodular_inverse(&snf.u);
    let mut gens = Vec::new();
    for j in rank..k {
        let mut vec = vec![Int::zero(); n];
        for i in 0..k {
            if uinv[(i, j)].is_zero() {
                continue;
            }
            for (slot, val) in vec.iter_mut().zip(kernel[i].iter()) {
                *slot += &uinv[(i, j)] * val;
            }
        }
        gens.push(vec);
    }
    Ok(gens)
}

/// Solves K c = r over the integers for each relation r (the solutions
/// must be integral because the kernel basis spans the lattice).
fn integer_coordinates(kmat: &IntMatrix, relations: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    use spunnorm_exact::{solve, LinearSolution, Rat, RatMatrix};
    let ratm = RatMatrix::from_rows(
        (0..kmat.nrows())
            .map(|i| {
                (0..kmat.ncols())
                    .map(|j| Rat::from_integer(kmat[(i, j)].clone()))
                    .collect()
            })
            .collect(),
    );
    let mut out = Vec::new();
    for r in relations {
        let rhs: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
        match solve(&ratm, &rhs) {
            LinearSolution::Solution(c) => {
                let ints: Option<Vec<Int>> = c
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            Some(x.to_integer())
                        } else {
                            None
                        }
                    })
                    .collect();
                out.push(ints.ok_or_else(|| {
                    Error::Other("coboundary not integral in kernel lattice".into())
                })?);
            }
            LinearSolution::Infeasible { .. } => {
                return Err(Error::Other("coboundary outside cocycle kernel".into()))
            }
        }
    }
    Ok(out)
}

fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    use spunnorm_exact::{solve, LinearSolution, Rat, RatMatrix};
    let n = u.nrows();
    let ratm = RatMatrix::from_rows(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rat::from_integer(u[(i, j)].clone()))
                    .collect()
            })
            .collect(),
    );
    let mut inv = IntMatrix::zero(n, n);
    for col in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[col] = Rat::from_integer(Int::from(1));
        match solve(&ratm, &e) {
            LinearSolution::Solution(x) => {
                for (i, v) in x.iter().enumerate() {
                    assert!(v.is_integer(), "unimodular inverse not integral");
                    inv[(i, col)] = v.to_integer();
                }
            }
            LinearSolution::Infeasible { .. } => unreachable!("unimodular matrix"),
        }
    }
    inv
}

/// Constructs a simple normal curve in the integer homology class given
/// as a combination of existing curves on the same cusp.
pub fn curve_in_class(
    tri: &IdealTriangulation,
    cusp: usize,
    combination: &[(&PeripheralCurve, i64)],
) -> Result<PeripheralCurve> {
    let mut flow: BTreeMap<usize, i64> = BTreeMap::new();
    for (curve, c) in combination {
        if *c == 0 {
            continue;
        }
        for (class, w) in flows(tri, curve) {
            *flow.entry(class).or_insert(0) += c * w;
        }
    }
    flow.retain(|_, v| *v != 0);
    // Reduce against the coboundaries of this cusp's vertices.
    let mut corner_ids: Vec<usize> = Vec::new();
    let mut side_ids: Vec<usize> = Vec::new();
    for &(tet, v) in &tri.cusps()[cusp].triangles {
        for f in 0..4u8 {
            if f == v {
                continue;
            }
            side_ids.push(tri.side_class((tet, v, f)));
            for w in 0..4u8 {
                if w != v && w != f {
                    corner_ids.push(tri.corner_class((tet, v, w)));
                }
            }
        }
    }
    side_ids.sort();
    side_ids.dedup();
    corner_ids.sort();
    corner_ids.dedup();
    let side_index: BTreeMap<usize, usize> =
        side_ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let coboundary = |corner_class: usize| -> Vec<Int> {
        let mut theta = vec![Int::zero(); side_ids.len()];
        for (i, &sc) in side_ids.iter().enumerate() {
            let [rep, _] = tri.side_rep(sc);
            let (rt, rv, _) = rep;
            let (src, dst) = class_direction_in(tri, rep);
            if tri.corner_class((rt, rv, dst)) == corner_class {
                theta[i] += Int::from(1);
            }
            if tri.corner_class((rt, rv, src)) == corner_class {
                theta[i] -= Int::from(1);
            }
        }
        theta
    };
    let cobs: Vec<Vec<Int>> = corner_ids.iter().map(|&c| coboundary(c)).collect();
    let mut theta = vec![Int::zero(); side_ids.len()];
    for (&class, &w) in &flow {
        theta[side_index[&class]] = Int::from(w);
    }
    let theta = reduce_weight(theta, &cobs);
    let mut reduced: BTreeMap<usize, i64> = BTreeMap::new();
    for (i, v) in theta.iter().enumerate() {
        let w = int_to_i64(v);
        if w != 0 {
            reduced.insert(side_ids[i], w);
        }
    }
    let comps = realize_flows(tri, cusp, &reduced)?;
    if comps.len() != 1 {
        return Err(Error::Other(format!(
            "class not realized by a single normal curve ({} components)",
            comps.len()
        )));
    }
    Ok(PeripheralCurve {
        cusp,
        steps: comps.into_iter().next().unwrap(),
    })
}

/// Greedy L1 weight reduction by adding coboundaries.
fn reduce_weight(mut theta: Vec<Int>, cobs: &[Vec<Int>]) -> Vec<Int> {
    let weight = |t: &[Int]| -> Int {
        let mut acc = Int::zero();
        for x in t {
            acc += num_traits::Signed::abs(x);
        }
        acc
    };
    let mut best = weight(&theta);
    let mut improved = true;
    let mut rounds = 0;
    while improved && rounds < 200 {
        improved = false;
        rounds += 1;
        for cob in cobs {
            for sign in [1i64, -1] {
                let cand: Vec<Int> = theta
                    .iter()
                    .zip(cob)
                    .map(|(a, b)| a + Int::from(sign) * b)
                    .collect();
                let w = weight(&cand);
                if w < best {
                    best = w;
                    theta = cand;
                    improved = true;
                }
            }
        }
    }
    theta
}

fn int_to_i64(x: &Int) -> i64 {
    use num_traits::ToPrimitive;
    x.to_i64().expect("flow weight fits in i64")
}
