//! Exact p-adic linear dynamics on the unit sphere of `Q_p^n`.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod padic;
pub mod report;
pub mod semigroup;
pub mod spectral;
pub mod sphere;

pub use error::{Error, Result};
