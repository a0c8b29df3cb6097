//! Generalized angle structures with vanishing peripheral rotational
//! holonomy, and the Euler characteristic functional.

use num_traits::Zero;
use spunnorm_exact::{rat, solve, LinearSolution, Rat, RatMatrix};

use crate::error::{Error, Result};
use crate::qcoords::{
    forget_orientation, pair_index, OrientedQuadVector, QuadType, UnorientedQuadVector,
};
use crate::tri::{CurveStep, IdealTriangulation, PeripheralCurve};

/// Rational dihedral angle assignment in units of pi, one value per
/// unoriented quad type. Angles may be negative or exceed pi.
#[derive(Clone, Debug)]
pub struct GeneralizedAngleStructure {
    pub angles: Vec<Rat>,
}

impl GeneralizedAngleStructure {
    pub fn angle(&self, q: QuadType) -> &Rat {
        &self.angles[q.index()]
    }
}

/// Per-cusp holonomy values of the stored basis curves; exact zeros after
/// a successful solve.
#[derive(Clone, Debug)]
pub struct HolonomyLedger {
    pub per_cusp: Vec<(Rat, Rat)>,
}

/// Number of edges of the tetrahedron of `q` in the class `edge` that are
/// disjoint from `q` (0, 1, or 2).
pub fn edge_index(tri: &IdealTriangulation, edge: usize, q: QuadType) -> usize {
    q.disjoint_edges()
        .iter()
        .filter(|&&(a, b)| tri.edge_of(q.tet, a, b).0 == edge)
        .count()
}

/// The angle of the triangle corner cut off by a curve step: the quad
/// type of the tetrahedron disjoint from the edge {vertex, cut corner}.
fn cut_corner_quad(step: CurveStep) -> QuadType {
    let u = 6 - step.vertex - step.enter - step.exit;
    QuadType {
        tet: step.tet,
        kind: kind_of_pair(step.vertex, u),
    }
}

fn kind_of_pair(a: u8, b: u8) -> u8 {
    let (a, b) = (a.min(b), a.max(b));
    if a == 0 {
        pair_index(a, b) as u8
    } else {
        let (c, d) = crate::qcoords::complement((a, b));
        pair_index(c, d) as u8
    }
}

/// Sign of a holonomy term: +1 when the step cuts its corner off to the
/// left of the direction of travel.
pub fn holonomy_sign(tri: &IdealTriangulation, step: CurveStep) -> i8 {
    let u = 6 - step.vertex - step.enter - step.exit;
    // Corners of the enter side are {u, exit}, of the exit side {u, enter}.
    // The cut corner is on the left iff (u, exit, enter) is positively
    // cyclic in the triangle's corner order.
    let cyc = tri.triangle_cycle(step.tet, step.vertex);
    let pos = |c: u8| cyc.iter().position(|&w| w == c).unwrap();
    let (pu, pe) = (pos(u), pos(step.exit));
    if (pu + 1) % 3 == pe {
        1
    } else {
        -1
    }
}

/// Signed angle sum along a normal curve, in units of pi.
pub fn rotational_holonomy(
    tri: &IdealTriangulation,
    gas: &GeneralizedAngleStructure,
    curve: &PeripheralCurve,
) -> Rat {
    let mut total = Rat::zero();
    for &step in &curve.steps {
        let q = cut_corner_quad(step);
        let s = holonomy_sign(tri, step);
        total += Rat::from_integer(s.into()) * gas.angle(q);
    }
    total
}

/// Row of holonomy coefficients for a curve, over the 3t angle variables.
fn holonomy_row(tri: &IdealTriangulation, curve: &PeripheralCurve) -> Vec<Rat> {
    let mut row = vec![Rat::zero(); 3 * tri.num_tets()];
    for &step in &curve.steps {
        let q = cut_corner_quad(step);
        let s = holonomy_sign(tri, step);
        row[q.index()] += rat(s.into());
    }
    row
}

/// Solves for a generalized angle structure with vanishing rotational
/// holonomy on both stored basis curves of every cusp. Deterministic:
/// free variables of the solved system are set to zero.
pub fn solve_gas(tri: &IdealTriangulation) -> Result<(GeneralizedAngleStructure, HolonomyLedger)> {
    let t = tri.num_tets();
    let n = 3 * t;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // Per tetrahedron: the three quad angles sum to pi.
    for tet in 0..t {
        let mut row = vec![Rat::zero(); n];
        for kind in 0..3u8 {
            row[QuadType { tet, kind }.index()] = rat(1);
        }
        rows.push(row);
        rhs.push(rat(1));
    }
    // Per edge class: total dihedral angle 2 pi.
    for e in tri.edges() {
        let mut row = vec![Rat::zero(); n];
        for tet in 0..t {
            for kind in 0..3u8 {
                let q = QuadType { tet, kind };
                let i = edge_index(tri, e.id, q);
                if i > 0 {
                    row[q.index()] += rat(i as i64);
                }
            }
        }
        rows.push(row);
        rhs.push(rat(2));
    }
    // Per cusp: vanishing holonomy of both basis curves.
    for basis in tri.bases() {
        rows.push(holonomy_row(tri, &basis.mu));
        rhs.push(rat(0));
        rows.push(holonomy_row(tri, &basis.lambda));
        rhs.push(rat(0));
    }
    let a = RatMatrix::from_rows(rows);
    match solve(&a, &rhs) {
        LinearSolution::Solution(x) => {
            let gas = GeneralizedAngleStructure { angles: x };
            let ledger = holonomy_ledger(tri, &gas);
            debug_assert!(ledger
                .per_cusp
                .iter()
                .all(|(m, l)| m.is_zero() && l.is_zero()));
            Ok((gas, ledger))
        }
        LinearSolution::Infeasible { .. } => Err(Error::NoAngleStructure),
    }
}

pub fn holonomy_ledger(
    tri: &IdealTriangulation,
    gas: &GeneralizedAngleStructure,
) -> HolonomyLedger {
    let per_cusp = tri
        .bases()
        .iter()
        .map(|b| {
            (
                rotational_holonomy(tri, gas, &b.mu),
                rotational_holonomy(tri, gas, &b.lambda),
            )
        })
        .collect();
    HolonomyLedger { per_cusp }
}

/// Checks the defining equations of a generalized angle structure.
pub fn check_gas(tri: &IdealTriangulation, gas: &GeneralizedAngleStructure) -> bool {
    let t = tri.num_tets();
    for tet in 0..t {
        let sum: Rat = (0..3u8)
            .map(|kind| gas.angle(QuadType { tet, kind }).clone())
            .sum();
        if sum != rat(1) {
            return false;
        }
    }
    for e in tri.edges() {
        let mut sum = Rat::zero();
        for tet in 0..t {
            for kind in 0..3u8 {
                let q = QuadType { tet, kind };
                let i = edge_index(tri, e.id, q);
                if i > 0 {
                    sum += rat(i as i64) * gas.angle(q);
                }
            }
        }
        if sum != rat(2) {
            return false;
        }
    }
    true
}

/// The Euler characteristic functional: chi*(x) = -sum a(q) x(q).
pub fn euler_char_unoriented(gas: &GeneralizedAngleStructure, x: &UnorientedQuadVector) -> Rat {
    let mut total = Rat::zero();
    for (q, v) in x.iter_nonzero() {
        total += gas.angle(q) * v;
    }
    -total
}

pub fn euler_char(gas: &GeneralizedAngleStructure, x: &OrientedQuadVector) -> Rat {
    euler_char_unoriented(gas, &forget_orientation(x))
}
