use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Int;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols));
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = &self[(i, k)] * &other[(k, j)];
                    let v = &out[(i, j)] + term;
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += c * row b
    fn add_row(&mut self, a: usize, b: usize, c: &Int) {
        for j in 0..self.cols {
            let v = &self[(a, j)] + c * &self[(b, j)];
            self[(a, j)] = v;
        }
    }

    /// col a += c * col b
    fn add_col(&mut self, a: usize, b: usize, c: &Int) {
        for i in 0..self.rows {
            let v = &self[(i, a)] + c * &self[(i, b)];
            self[(i, a)] = v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form U·A·V = D with U, V unimodular and D diagonal with
/// the divisibility chain d_i | d_{i+1}.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        (0..self.d.nrows().min(self.d.ncols()))
            .take_while(|&i| !self.d[(i, i)].is_zero())
            .count()
    }

    /// Diagonal entries of D, nonzero ones first.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let lim = m.min(n);
    let mut k = 0;
    while k < lim {
        // Entry with minimal nonzero absolute value in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d[(i, j)].abs() < d[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Reduce column k and row k by the pivot. A nonzero remainder is
        // strictly smaller in absolute value, so the loop terminates.
        let mut dirty = false;
        for i in k + 1..m {
            if d[(i, k)].is_zero() {
                continue;
            }
            let q = -div_round(&d[(i, k)], &d[(k, k)]);
            d.add_row(i, k, &q);
            u.add_row(i, k, &q);
            dirty = dirty || !d[(i, k)].is_zero();
        }
        for j in k + 1..n {
            if d[(k, j)].is_zero() {
                continue;
            }
            let q = -div_round(&d[(k, j)], &d[(k, k)]);
            d.add_col(j, k, &q);
            v.add_col(j, k, &q);
            dirty = dirty || !d[(k, j)].is_zero();
        }
        if dirty {
            continue;
        }

        // Row k and column k are clear. Enforce divisibility of the rest
        // of the block by the pivot; on failure pull the offender into
        // row k and restart this step.
        let mut offender = None;
        'scan: for i in k + 1..m {
            for j in k + 1..n {
                if !(&d[(i, j)] % &d[(k, k)]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = Int::from(1);
            d.add_row(k, i, &one);
            u.add_row(k, i, &one);
            continue;
        }

        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }
    Snf { u, d, v }
}

/// Round-to-nearest division; keeps intermediate entries small.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    if (&r * Int::from(2)).abs() > b.abs() {
        if r.is_positive() == b.is_positive() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        // Recomposition.
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.d, "U*A*V != D");
        // Diagonal with divisibility chain.
        for i in 0..snf.d.nrows() {
            for j in 0..snf.d.ncols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            }
        }
        // U, V unimodular.
        assert!(det(&snf.u).abs() == Int::from(1));
        assert!(det(&snf.v).abs() == Int::from(1));
    }

    /// Fraction-free determinant (Bareiss), test-only oracle.
    fn det(a: &IntMatrix) -> Int {
        let n = a.nrows();
        assert_eq!(n, a.ncols());
        let mut m = a.clone();
        let mut sign = Int::from(1);
        let mut prev = Int::from(1);
        for k in 0..n {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Int::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = Int::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(4);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d, IntMatrix::identity(4));
        check(&a);
    }

    #[test]
    fn snf_already_diagonal() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d, a);
        check(&a);
    }

    #[test]
    fn snf_classic_example() {
        let a = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.diagonal(),
            vec![Int::from(2), Int::from(2), Int::from(156)]
        );
        check(&a);
    }

    #[test]
    fn snf_random_matrices_recompose() {
        // Small deterministic pseudo-random integer matrices.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 19) as i64 - 9
        };
        for _ in 0..8 {
            let rows: Vec<Vec<Int>> = (0..6)
                .map(|_| (0..6).map(|_| Int::from(next())).collect())
                .collect();
            check(&IntMatrix::from_rows(rows));
        }
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_i64_rows(&[&[0, 0, 5, 0], &[3, 0, 0, 0]]);
        check(&a);
        assert_eq!(smith_normal_form(&a).rank(), 2);
    }
}
