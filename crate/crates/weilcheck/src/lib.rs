//! Exact verification of the identity between the Weil index of the
//! canonical quadratic form on a twisted Lie algebra and the local epsilon
//! factor of the associated virtual orthogonal representation.
pub mod br2s;
pub mod clifford;
pub mod epsweil;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod localfield;
pub mod quadform;
pub mod rootdata;
pub mod torus;
pub use error::{Error, Result};
