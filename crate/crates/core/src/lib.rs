//! Thurston norm computation for cusped 3-manifolds via transversely
//! oriented spun-normal surface theory on ideal triangulations.

pub mod angles;
pub mod ball;
pub mod boundary;
pub mod error;
pub mod homology;
pub mod qcoords;
pub mod surface;
pub mod tri;

pub use error::{Error, Result};
pub use spunnorm_exact::{Int, Rat};
