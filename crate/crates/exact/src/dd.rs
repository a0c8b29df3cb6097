use num_traits::{Signed, Zero};

use crate::matrix::{dot, RatMatrix};
use crate::solve::kernel_basis;
use crate::{primitive_integer, Int, Rat};

/// A polyhedral cone {x : Ax = 0, x >= 0} in ambient dimension n.
#[derive(Clone, Debug)]
pub struct ConeDescription {
    pub equalities: RatMatrix,
    pub ambient_dim: usize,
}

impl ConeDescription {
    pub fn new(equalities: RatMatrix, ambient_dim: usize) -> Self {
        assert_eq!(equalities.ncols(), ambient_dim, "cone matrix width");
        ConeDescription {
            equalities,
            ambient_dim,
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.iter().all(|v| !v.is_negative()) && self.equalities.mul_vec(x).iter().all(|v| v.is_zero())
    }
}

/// Complete set of extreme rays of {Ax = 0, x >= 0}, each scaled to a
/// primitive nonnegative integer vector, sorted lexicographically.
pub fn extreme_rays(cone: &ConeDescription) -> Vec<Vec<Int>> {
    let n = cone.ambient_dim;
    if n == 0 {
        return Vec::new();
    }
    // Restrict to the kernel of the equality system: x = K z with the
    // columns of K a kernel basis. The cone becomes {z : (Kz)_i >= 0},
    // which is pointed because K has full column rank.
    let kernel = kernel_basis(&cone.equalities);
    let k = kernel.len();
    if k == 0 {
        return Vec::new();
    }
    // Row i of `ineq` is the functional z -> (Kz)_i = x_i.
    let ineq_rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..k).map(|j| kernel[j][i].clone()).collect())
        .collect();
    let ineq = RatMatrix::from_rows(ineq_rows.clone());

    let z_rays = dd_pointed(&ineq, k);

    let mut rays: Vec<Vec<Int>> = z_rays
        .iter()
        .filter_map(|z| {
            let x: Vec<Rat> = (0..n).map(|i| dot(&ineq_rows[i], z)).collect();
            primitive_integer(&x)
        })
        .collect();
    rays.sort();
    rays.dedup();
    rays
}

/// Double description for a pointed cone {z : Bz >= 0}. `B` must have
/// full column rank `dim`; constraints are inserted in row order.
/// Returns one representative per extreme ray.
pub(crate) fn dd_pointed(b: &RatMatrix, dim: usize) -> Vec<Vec<Rat>> {
    assert_eq!(b.ncols(), dim);
    let m = b.nrows();

    // Initial simplicial cone from the lexicographically first maximal
    // independent row set.
    let mut base_rows: Vec<usize> = Vec::new();
    {
        let mut probe: Vec<Vec<Rat>> = Vec::new();
        for i in 0..m {
            probe.push(b.row(i).to_vec());
            let rank = RatMatrix::from_rows(probe.clone()).rank();
            if rank == probe.len() {
                base_rows.push(i);
                if rank == dim {
                    break;
                }
            } else {
                probe.pop();
            }
        }
    }
    assert_eq!(base_rows.len(), dim, "cone is not pointed");

    // Rays of {B0 z >= 0} are the columns of B0^{-1}: invert by solving
    // against the identity via Gauss-Jordan on an augmented matrix.
    let mut aug = RatMatrix::zero(dim, 2 * dim);
    for (r, &i) in base_rows.iter().enumerate() {
        for c in 0..dim {
            aug[(r, c)] = b[(i, c)].clone();
        }
        aug[(r, dim + r)] = crate::rat(1);
    }
    let pivots = aug.rref();
    assert_eq!(pivots.len(), dim);
    let mut rays: Vec<Vec<Rat>> = (0..dim)
        .map(|col| (0..dim).map(|r| aug[(r, dim + col)].clone()).collect())
        .collect();
    for r in rays.iter_mut() {
        normalize_ray(r);
    }

    let mut processed: Vec<usize> = base_rows.clone();
    for i in 0..m {
        if base_rows.contains(&i) {
            continue;
        }
        let row = b.row(i);
        let vals: Vec<Rat> = rays.iter().map(|r| dot(row, r)).collect();
        let mut plus: Vec<usize> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        let mut zero: Vec<usize> = Vec::new();
        for (idx, v) in vals.iter().enumerate() {
            if v.is_zero() {
                zero.push(idx);
            } else if v.is_positive() {
                plus.push(idx);
            } else {
                minus.push(idx);
            }
        }
        if minus.is_empty() {
            processed.push(i);
            continue;
        }
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for &p in &plus {
            next.push(rays[p].clone());
        }
        for &z in &zero {
            next.push(rays[z].clone());
        }
        for &p in &plus {
            for &q in &minus {
                if !adjacent(b, &processed, dim, &rays[p], &rays[q]) {
                    continue;
                }
                // Positive combination lying on the new hyperplane.
                let (vp, vq) = (&vals[p], &vals[q]);
                let mut newray: Vec<Rat> = (0..dim)
                    .map(|c| vp * &rays[q][c] - vq * &rays[p][c])
                    .collect();
                normalize_ray(&mut newray);
                next.push(newray);
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(i);
    }
    rays
}

/// Rank-based adjacency test: r1, r2 are adjacent extreme rays iff the
/// processed constraints tight at both span a subspace of rank dim - 2.
fn adjacent(b: &RatMatrix, processed: &[usize], dim: usize, r1: &[Rat], r2: &[Rat]) -> bool {
    if dim == 2 {
        // Any two extreme rays of a 2-dimensional pointed cone are adjacent.
        return true;
    }
    let mut tight_rows: Vec<Vec<Rat>> = Vec::new();
    for &i in processed {
        let row = b.row(i);
        if dot(row, r1).is_zero() && dot(row, r2).is_zero() {
            tight_rows.push(row.to_vec());
        }
    }
    if tight_rows.len() < dim - 2 {
        return false;
    }
    RatMatrix::from_rows(tight_rows).rank() == dim - 2
}

/// Scales a rational vector so its first nonzero entry is +1 or -1
/// preserving direction only up to positive scale (sign untouched).
fn normalize_ray(r: &mut [Rat]) {
    if let Some(first) = r.iter().find(|v| !v.is_zero()) {
        let scale = first.abs().recip();
        for v in r.iter_mut() {
            *v = &*v * &scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn cone(rows: &[&[i64]], n: usize) -> ConeDescription {
        let m = if rows.is_empty() {
            RatMatrix::zero(0, n)
        } else {
            RatMatrix::from_i64_rows(rows)
        };
        ConeDescription::new(m, n)
    }

    fn int_vec(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn positive_octant() {
        let rays = extreme_rays(&cone(&[], 3));
        assert_eq!(
            rays,
            vec![
                int_vec(&[0, 0, 1]),
                int_vec(&[0, 1, 0]),
                int_vec(&[1, 0, 0])
            ]
        );
    }

    #[test]
    fn diagonal_ray() {
        let rays = extreme_rays(&cone(&[&[1, -1]], 2));
        assert_eq!(rays, vec![int_vec(&[1, 1])]);
    }

    #[test]
    fn zero_cone_is_empty() {
        // x1 = x2 = 0 forced by x1 + x2 = 0, x >= 0.
        let rays = extreme_rays(&cone(&[&[1, 1]], 2));
        assert!(rays.is_empty());
    }

    #[test]
    fn square_cone_slice() {
        // x1 + x2 = x3 + x4 over the nonnegative orthant: 4 extreme rays.
        let rays = extreme_rays(&cone(&[&[1, 1, -1, -1]], 4));
        assert_eq!(rays.len(), 4);
        for r in &rays {
            let as_rat: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
            assert!(cone(&[&[1, 1, -1, -1]], 4).contains(&as_rat));
            assert_eq!(r.iter().filter(|x| !x.is_zero()).count(), 2);
        }
    }

    #[test]
    fn rays_satisfy_cone_and_are_primitive() {
        let c = cone(&[&[1, 2, -3, 0, 0], &[0, 1, 1, -2, 0]], 5);
        let rays = extreme_rays(&c);
        assert!(!rays.is_empty());
        for r in &rays {
            let as_rat: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
            assert!(c.contains(&as_rat));
            let mut g = Int::from(0);
            for x in r {
                g = num_integer::Integer::gcd(&g, x);
            }
            assert_eq!(g, Int::from(1));
        }
        let _ = rat(0);
    }
}
