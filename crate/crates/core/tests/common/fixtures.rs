//! Fixture loading helpers shared by integration tests.

use spunnorm::qcoords::OrientedQuadVector;
use spunnorm::tri::native::load_native;
use spunnorm::tri::IdealTriangulation;

pub fn fig8() -> IdealTriangulation {
    load_native(include_str!("../../fixtures/fig8.json")).expect("fig8 fixture")
}

pub fn sister() -> IdealTriangulation {
    load_native(include_str!("../../fixtures/sister.json")).expect("sister fixture")
}

pub fn b1_2_example() -> IdealTriangulation {
    load_native(include_str!("../../fixtures/b1_2_example.json")).expect("b1=2 fixture")
}

pub fn all_fixtures() -> Vec<(&'static str, IdealTriangulation)> {
    vec![
        ("fig8", fig8()),
        ("sister", sister()),
        ("b1_2_example", b1_2_example()),
    ]
}

pub fn fig8_vector() -> OrientedQuadVector {
    OrientedQuadVector::from_ints(2, &[(0, (0, 3), 1), (0, (1, 2), 1), (1, (0, 2), 1)])
}
