use num_traits::Zero;

use crate::matrix::{dot, RatMatrix};
use crate::Rat;

/// Result of an exact linear solve. `Infeasible` carries a certificate
/// row combination y with yᵀA = 0 and yᵀb ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solution(Vec<Rat>),
    Infeasible { certificate: Vec<Rat> },
}

/// Solves A x = b exactly. When the system is underdetermined the free
/// variables are set to zero, so the result is deterministic.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> LinearSolution {
    assert_eq!(a.nrows(), b.len(), "dimension mismatch in solve");
    let n = a.ncols();
    let m = a.nrows();
    // Augment with b and with an identity block recording row operations,
    // so an inconsistent row yields a certificate.
    let mut aug = RatMatrix::zero(m, n + 1 + m);
    for i in 0..m {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
        aug[(i, n + 1 + i)] = crate::rat(1);
    }
    // Eliminate on the first n columns only.
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !aug[(i, c)].is_zero()) else {
            continue;
        };
        aug.swap_rows(r, p);
        let inv = aug[(r, c)].recip();
        for j in 0..aug.ncols() {
            let v = &aug[(r, j)] * &inv;
            aug[(r, j)] = v;
        }
        for i in 0..m {
            if i != r && !aug[(i, c)].is_zero() {
                let f = aug[(i, c)].clone();
                for j in 0..aug.ncols() {
                    let v = &aug[(i, j)] - &f * &aug[(r, j)];
                    aug[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // Any eliminated row with zero coefficients but nonzero rhs is a witness.
    for i in r..m {
        if !aug[(i, n)].is_zero() {
            let certificate = (0..m).map(|j| aug[(i, n + 1 + j)].clone()).collect();
            return LinearSolution::Infeasible { certificate };
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[(row, n)].clone();
    }
    LinearSolution::Solution(x)
}

/// Exact basis of the kernel {x : Ax = 0}, one vector per free column of
/// the reduced row echelon form. Deterministic.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<Rat>> {
    let n = a.ncols();
    let mut m = a.clone();
    let pivots = m.rref();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rat::zero(); n];
        v[free] = crate::rat(1);
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -m[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Verifies a claimed certificate of infeasibility.
pub fn check_certificate(a: &RatMatrix, b: &[Rat], y: &[Rat]) -> bool {
    let at = a.transpose();
    let yta = at.mul_vec(y);
    yta.iter().all(|x| x.is_zero()) && !dot(y, b).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    #[test]
    fn solve_identity() {
        let a = RatMatrix::identity(3);
        let b = vec![rat(4), rat(-1), ratio(1, 2)];
        assert_eq!(solve(&a, &b), LinearSolution::Solution(b));
    }

    #[test]
    fn solve_inconsistent_has_certificate() {
        let a = RatMatrix::from_i64_rows(&[&[1, 0], &[1, 0]]);
        let b = vec![rat(0), rat(1)];
        match solve(&a, &b) {
            LinearSolution::Infeasible { certificate } => {
                assert!(check_certificate(&a, &b, &certificate));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn solve_constructed_system() {
        // b = A x0 must be solvable with exactly zero residual.
        let a = RatMatrix::from_i64_rows(&[
            &[2, 0, -1, 3, 5, 1, 0],
            &[0, 1, 1, -2, 0, 4, 1],
            &[7, -3, 0, 0, 2, 2, 2],
            &[1, 1, 1, 1, 1, 1, 1],
            &[0, 0, 5, -5, 1, 0, 3],
        ]);
        let x0: Vec<Rat> = (0..7).map(|i| rat(i - 3)).collect();
        let b = a.mul_vec(&x0);
        match solve(&a, &b) {
            LinearSolution::Solution(x) => {
                assert_eq!(a.mul_vec(&x), b);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2, 3, 4], &[0, 1, 1, 0]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&RatMatrix::identity(4)).is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_full() {
        let a = RatMatrix::zero(3, 3);
        assert_eq!(kernel_basis(&a).len(), 3);
    }
}
