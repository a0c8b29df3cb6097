use num_traits::Zero;
use proptest::prelude::*;
use spunnorm::angles::{euler_char_unoriented, solve_gas};
use spunnorm::qcoords::{forget_orientation, OrientedQuadVector};
use spunnorm::Rat;

mod common;
use common::fixtures::fig8;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

proptest! {
    #[test]
    fn forget_of_reversal_pair_doubles(coords in prop::collection::vec(0i64..4, 12)) {
        let dense: Vec<Rat> = coords.iter().map(|&c| rat(c)).collect();
        let x = OrientedQuadVector::from_dense(&dense);
        let doubled = forget_orientation(&x.add(&x.reversal()));
        let twice = forget_orientation(&x).scale(&rat(2));
        prop_assert_eq!(doubled, twice);
    }

    #[test]
    fn euler_functional_is_linear(
        a in prop::collection::vec(0i64..4, 12),
        b in prop::collection::vec(0i64..4, 12),
    ) {
        let tri = fig8();
        let (gas, _) = solve_gas(&tri).unwrap();
        let xa = forget_orientation(&OrientedQuadVector::from_dense(
            &a.iter().map(|&c| rat(c)).collect::<Vec<_>>(),
        ));
        let xb = forget_orientation(&OrientedQuadVector::from_dense(
            &b.iter().map(|&c| rat(c)).collect::<Vec<_>>(),
        ));
        let lhs = euler_char_unoriented(&gas, &xa.add(&xb));
        let rhs = euler_char_unoriented(&gas, &xa) + euler_char_unoriented(&gas, &xb);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(euler_char_unoriented(&gas, &xa.scale(&rat(0))).is_zero());
    }

    #[test]
    fn vector_json_round_trip(coords in prop::collection::vec(0i64..7, 12)) {
        let tri = fig8();
        let text = serde_json::to_string(&coords).unwrap();
        let (x, _) = spunnorm::qcoords::parse_vector_json(&tri, &text, true).unwrap();
        let dense = x.unwrap().to_dense();
        let back: Vec<i64> = dense
            .iter()
            .map(|v| {
                use num_traits::ToPrimitive;
                v.to_integer().to_i64().unwrap()
            })
            .collect();
        prop_assert_eq!(back, coords);
    }
}
