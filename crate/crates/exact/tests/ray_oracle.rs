//! Extreme-ray enumeration checked against a brute-force support-subset
//! oracle on small random cones.

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spunnorm_exact::{extreme_rays, kernel_basis, ConeDescription, Int, Rat, RatMatrix};

/// Brute force: a nonnegative r with Ar = 0 is an extreme ray iff the
/// columns indexed by its support have a one-dimensional kernel. We
/// enumerate every support subset, solve, and keep the signable kernels.
pub fn brute_force_rays(a: &RatMatrix, n: usize) -> Vec<Vec<Int>> {
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        // Restrict A to the support columns.
        let restricted = RatMatrix::from_rows(
            (0..a.nrows())
                .map(|i| support.iter().map(|&j| a[(i, j)].clone()).collect())
                .collect(),
        );
        let kernel = kernel_basis(&restricted);
        if kernel.len() != 1 {
            continue;
        }
        let v = &kernel[0];
        let sign = if v.iter().all(|x| !x.is_negative()) {
            1
        } else if v.iter().all(|x| !x.is_positive()) {
            -1
        } else {
            continue;
        };
        if v.iter().any(|x| x.is_zero()) {
            // Support must be exact, otherwise a smaller subset finds it.
            continue;
        }
        let mut full = vec![Rat::zero(); n];
        for (k, &j) in support.iter().enumerate() {
            full[j] = if sign > 0 {
                v[k].clone()
            } else {
                -v[k].clone()
            };
        }
        if let Some(p) = spunnorm_exact::primitive_integer(&full) {
            rays.push(p);
        }
    }
    rays.sort();
    rays.dedup();
    rays
}

#[test]
fn dd_matches_brute_force_on_random_cones() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..50 {
        let n = rng.random_range(2..=10usize);
        let m = rng.random_range(1..=5usize);
        let rows: Vec<Vec<Rat>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| Rat::from_integer(Int::from(rng.random_range(-3..=3i64))))
                    .collect()
            })
            .collect();
        let a = RatMatrix::from_rows(rows);
        let cone = ConeDescription::new(a.clone(), n);
        let dd = extreme_rays(&cone);
        let brute = brute_force_rays(&a, n);
        assert_eq!(dd, brute, "case {case}: n={n} m={m}");
    }
}

#[test]
fn no_ray_is_a_combination_of_two_others() {
    use spunnorm_exact::{solve, LinearSolution};
    let mut rng = StdRng::seed_from_u64(0xbeef);
    for _ in 0..10 {
        let n = rng.random_range(3..=7usize);
        let m = rng.random_range(1..=3usize);
        let rows: Vec<Vec<Rat>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| Rat::from_integer(Int::from(rng.random_range(-2..=2i64))))
                    .collect()
            })
            .collect();
        let a = RatMatrix::from_rows(rows);
        let rays = extreme_rays(&ConeDescription::new(a, n));
        for (i, r) in rays.iter().enumerate() {
            let r_rat: Vec<Rat> = r.iter().map(|x| Rat::from_integer(x.clone())).collect();
            for (j, s) in rays.iter().enumerate() {
                for (k, t) in rays.iter().enumerate() {
                    if j == i || k == i || j >= k {
                        continue;
                    }
                    let cols = RatMatrix::from_rows(
                        (0..n)
                            .map(|row| {
                                vec![
                                    Rat::from_integer(s[row].clone()),
                                    Rat::from_integer(t[row].clone()),
                                ]
                            })
                            .collect(),
                    );
                    if let LinearSolution::Solution(c) = solve(&cols, &r_rat) {
                        let reproduces = cols.mul_vec(&c) == r_rat;
                        let nonneg = c.iter().all(|x| !x.is_negative());
                        assert!(
                            !(reproduces && nonneg),
                            "extreme ray is a nonnegative combination of two others"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn dd_matches_brute_force_on_degenerate_cones() {
    // Duplicate rows, zero rows, and a fully zero matrix.
    let cases: Vec<(Vec<Vec<i64>>, usize)> = vec![
        (vec![vec![0, 0, 0]], 3),
        (vec![vec![1, -1, 0], vec![1, -1, 0]], 3),
        (vec![vec![1, 1, 1, -1], vec![0, 0, 0, 0]], 4),
        (vec![vec![2, -1, -1], vec![-2, 1, 1]], 3),
    ];
    for (rows, n) in cases {
        let a = RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
                .collect(),
        );
        let dd = extreme_rays(&ConeDescription::new(a.clone(), n));
        let brute = brute_force_rays(&a, n);
        assert_eq!(dd, brute);
    }
}
