//! Flattened Laplace problem on the truncated strip `x ∈ 𝕋, z ∈ [-L_z, 0]`.

pub mod chebyshev;
pub(crate) mod gmres;
mod strip;

pub use strip::{
    depth_quadrature_g_w, solve_strip, trace_derivatives, Strip, StripField, StripOptions,
    StripProblem, StripSolver, Surface,
};
