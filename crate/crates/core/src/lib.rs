//! Fundamental solutions of the time-fractional diffusion equation
//! `∂^ν u/∂t^ν = λ² ∂²u/∂x²`, their subordination identities, and
//! Monte Carlo simulation of iterated Brownian motion and related processes.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: reciprocal Gamma, Wright, Mittag-Leffler, Airy and `K_{1/4}`.
//! * [`density`]: `u_ν(x,t)` by series, integral, closed form and stable laws.
//! * [`stable`]: stable densities in Feller's `(α, γ, η)` parametrization.
//! * [`identities`]: numerical verification of subordination and transform identities.
//! * [`processes`]: samplers, functional laws and Kolmogorov–Smirnov comparison.
//! * [`cli`]: the `fracdiff` command-line front end.

pub mod cli;
pub mod density;
pub mod error;
pub mod eval;
pub mod identities;
pub mod processes;
pub mod quad;
pub mod specfun;
pub mod stable;

pub use density::{FractionalParams, Order};
pub use error::{Error, Result};
pub use eval::{EvalResult, Method};
pub use quad::QuadratureConfig;
pub use stable::StableParams;
