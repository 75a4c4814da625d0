//! Exact symbolic calculus for formal distributions, Lie conformal algebras
//! and their universal enveloping vertex algebras.

mod error;
pub mod formal_dist;
pub mod frontend;
pub mod lie_conformal;
pub mod linear;
pub mod mode_algebra;
pub mod scalar;
pub mod vertex_calc;

pub use error::{Error, Result};
