//! Pseudospectral simulation and verification tools for two-dimensional
//! hydroelastic waves: an irrotational fluid under a thin elastic plate,
//! written in Zakharov form with a numerically computed Dirichlet-to-Neumann
//! operator.

pub mod cli;
pub mod diagnostics;
pub mod dtn;
pub mod elliptic;
pub mod error;
pub mod evolution;
pub mod paradiff;
pub mod spectral;

pub use error::{Error, Result};
