use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use spunnorm_exact::{
    convex_hull, primitive_integer, rat, smith_normal_form, IntMatrix, Rat, RatMatrix,
};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

proptest! {
    #[test]
    fn primitive_scaling_is_parallel_and_primitive(v in prop::collection::vec(small_rat(), 1..6)) {
        match primitive_integer(&v) {
            None => prop_assert!(v.iter().all(|x| x.is_zero())),
            Some(p) => {
                // gcd of the entries is 1.
                let mut g = spunnorm_exact::Int::zero();
                for x in &p {
                    g = g.gcd(x);
                }
                prop_assert_eq!(g, spunnorm_exact::Int::one());
                // Parallel with a positive factor: cross products vanish
                // and some entry pair has matching signs.
                for i in 0..v.len() {
                    for j in 0..v.len() {
                        let lhs = &v[i] * Rat::from_integer(p[j].clone());
                        let rhs = &v[j] * Rat::from_integer(p[i].clone());
                        prop_assert_eq!(lhs, rhs);
                    }
                }
                let k = (0..v.len()).find(|&i| !v[i].is_zero()).unwrap();
                prop_assert_eq!(v[k].is_positive(), p[k].is_positive());
            }
        }
    }

    #[test]
    fn hull_contains_points_and_is_idempotent(
        pts in prop::collection::vec((-4i64..=4, -4i64..=4), 1..9)
    ) {
        let points: Vec<Vec<Rat>> = pts.iter().map(|&(x, y)| vec![rat(x), rat(y)]).collect();
        let p = convex_hull(&points);
        for pt in &points {
            prop_assert!(p.facets.iter().all(|f| f.satisfied_by(pt)));
        }
        let q = convex_hull(&p.vertices);
        let mut a = p.vertices.clone();
        let mut b = q.vertices.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn snf_recomposes(entries in prop::collection::vec(-5i64..=5, 12)) {
        let rows: Vec<Vec<spunnorm_exact::Int>> = entries
            .chunks(4)
            .map(|c| c.iter().map(|&x| spunnorm_exact::Int::from(x)).collect())
            .collect();
        let a = IntMatrix::from_rows(rows);
        let snf = smith_normal_form(&a);
        let diag = snf.diagonal();
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate(entries in prop::collection::vec(-4i64..=4, 15)) {
        let rows: Vec<Vec<Rat>> = entries
            .chunks(5)
            .map(|c| c.iter().map(|&x| rat(x)).collect())
            .collect();
        let a = RatMatrix::from_rows(rows);
        let kernel = spunnorm_exact::kernel_basis(&a);
        prop_assert_eq!(kernel.len(), a.ncols() - a.rank());
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }
}
