//! Exact codimension-one Euler-Chow series of blow-ups of the projective
//! plane in at most eight general points and of a quartic K3 surface blown
//! up at a general point.
//!
//! The series are assembled from lattice-point generating functions of
//! rational polyhedral cones ([`cone_engine`]) and checked against
//! brute-force enumeration and an interpolation-rank oracle ([`oracle`]).

pub mod cone_engine;
pub mod delpezzo;
pub mod error;
pub mod json;
pub mod k3_blowup;
pub mod lattice_pic;
mod linalg;
pub mod oracle;
pub mod series_algebra;
pub mod verify;

pub use error::{Error, Result};
pub use lattice_pic::{PicClass, WeylElement, WeylGroup};
pub use series_algebra::{GradedTruncation, Grading, LaurentPoly, Polynomial};
