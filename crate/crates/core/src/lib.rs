//! Algebraic curvature tensors, the convex cones they generate, and the
//! polyhedral and embedding constructions that test membership in them.

pub mod cone;
pub mod config;
pub mod embed;
pub mod error;
pub mod lie;
pub mod poly;
pub mod tensor;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use tensor::*;
