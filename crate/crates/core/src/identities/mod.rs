//! Numerical verification of the subordination and transform identities
//! linking the densities `u_ν`. Every check compares a direct evaluation
//! (series or real integral) against an integral whose inner density is
//! computed by a different representation (closed form or stable law).

mod airy_mckean;
mod report;
mod subordination;
mod suite;
mod transforms;

pub use airy_mckean::{check_airy_mckean, mckean_density, mckean_normalization};
pub use report::{IdentityReport, ReportPoint};
pub use subordination::{
    check_brownian_space, check_gaussian_time, check_multiplication, check_multiplication_mc, check_nested_gaussian,
    check_stable_time, check_triplication, g_kernel_mass, nested_lambda, nested_sup_distance, triplication_kernel_mass,
    KernelConvention,
};
pub use suite::{default_points, run_identity, run_suite, SuiteOptions, IDENTITY_NAMES};
pub use transforms::{check_fourier, check_laplace_fourier, laplace_fourier};

use crate::density::methods::u_series_policy;
use crate::density::{
    has_closed_form, u_by, u_closed, u_integral, u_integral_byparts, FractionalParams, SERIES_WINDOW,
};
use crate::error::Result;
use crate::eval::{EvalResult, Method};
use crate::quad::QuadratureConfig;

/// Default acceptance tolerance of the harness.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Outer side of a comparison: Wright series inside its window, otherwise
/// the by-parts integral (or the real-line integral at `x = 0`).
pub(crate) fn direct(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    if p.reduced(x) <= SERIES_WINDOW {
        if let Ok(r) = u_series_policy(p, x) {
            return Ok(r);
        }
    }
    if x != 0.0 {
        u_integral_byparts(p, x, q)
    } else {
        u_integral(p, x, q)
    }
}

/// Inner side: closed form when the order has one, else the stable-law
/// representation, else the real-line integral.
pub(crate) fn independent(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    if has_closed_form(p) {
        return u_closed(p, x);
    }
    u_by(Method::Stable, p, x, q).or_else(|_| u_integral(p, x, q))
}

pub(crate) fn tight() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-11, abs_tol: 1e-13, max_subdivisions: 4000 }
}

pub(crate) fn inner_cfg() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 2000 }
}
