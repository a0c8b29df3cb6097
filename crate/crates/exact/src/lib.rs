//! Exact rational linear algebra and polyhedral computation.
//!
//! Everything in this crate runs on arbitrary-precision rationals or
//! integers; no floating point is used anywhere. The polyhedral side
//! (extreme rays, convex hulls) is built on a single double-description
//! engine over pointed cones.

pub mod dd;
pub mod hull;
pub mod matrix;
pub mod snf;
pub mod solve;

pub use dd::{extreme_rays, ConeDescription};
pub use hull::{convex_hull, Facet, Polytope};
pub use matrix::RatMatrix;
pub use snf::{smith_normal_form, IntMatrix, Snf};
pub use solve::{kernel_basis, solve, LinearSolution};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rat = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for n/d.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Scales a rational vector to a primitive integer vector (gcd of entries 1),
/// preserving direction. Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rat]) -> Option<Vec<Int>> {
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut denom_lcm = Int::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    debug_assert!(g.is_positive());
    Some(ints.iter().map(|x| x / &g).collect())
}
