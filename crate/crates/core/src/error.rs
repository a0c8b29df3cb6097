use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty triangulation")]
    EmptyTriangulation,
    #[error("tetrahedron {tet} face {face}: gluing target out of range")]
    GluingOutOfRange { tet: usize, face: u8 },
    #[error("tetrahedron {tet} face {face}: permutation {perm:?} is not a bijection")]
    BadPermutation { tet: usize, face: u8, perm: [u8; 4] },
    #[error(
        "tetrahedron {tet} face {face}: permutation does not carry this face to the target face"
    )]
    FaceMismatch { tet: usize, face: u8 },
    #[error("tetrahedron {tet} face {face}: gluing is not an involution (partner disagrees)")]
    InvolutionViolation { tet: usize, face: u8 },
    #[error("tetrahedron {tet} face {face}: face glued to itself")]
    SelfGluedFace { tet: usize, face: u8 },
    #[error("triangulation is not orientable (sign conflict at tetrahedron {tet})")]
    NonOrientable { tet: usize },
    #[error("edge class {edge} is identified with itself in reverse")]
    ReversedEdge { edge: usize },
    #[error("cusp {cusp} cross-section is not a torus (Euler characteristic {chi})")]
    NonTorusCusp { cusp: usize, chi: i64 },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unsupported native format {0:?} (expected \"tnorm-tri/1\")")]
    UnsupportedFormat(String),
    #[error("line {line}: {msg}")]
    SnapPeaParse { line: usize, msg: String },
    #[error("SnapPea file describes a non-orientable manifold")]
    SnapPeaNonOrientable,
    #[error("SnapPea file has filled or non-torus cusps which cannot be represented")]
    SnapPeaFilledCusp,
    #[error("peripheral curve invalid: {0}")]
    BadPeripheralCurve(String),
    #[error("coordinate vector has wrong length: expected {expected}, got {got}")]
    VectorLength { expected: usize, got: usize },
    #[error("coordinate vector is not admissible")]
    NotAdmissible,
    #[error("coordinate vector is not a normal coordinate (matching equations violated)")]
    NotNormalCoordinate,
    #[error("haken sum is not admissible (clashing quad types in tetrahedron {tet})")]
    IncompatibleSum { tet: usize },
    #[error("no generalized angle structure with vanishing peripheral holonomy")]
    NoAngleStructure,
    #[error("surface reconstruction failed to stabilize: {0}")]
    NonStabilizing(String),
    #[error("triangulation not 0-efficient or manifold not hyperbolic (ray with positive Euler bound found)")]
    PositiveEulerRay,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code classification: 2 = invalid input, 3 = contract
    /// violation, 4 is reserved for the non-certified b1 = 1 branch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonTorusCusp { .. } | Error::PositiveEulerRay => 3,
            _ => 2,
        }
    }
}
