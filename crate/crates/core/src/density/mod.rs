//! The fundamental solution `u_ν(x, t)` of `∂^ν u/∂t^ν = λ² ∂²u/∂x²`,
//! `u(x, 0) = δ(x)`, evaluated by every available representation.

mod dispatch;
pub(crate) mod methods;
mod params;

pub use crate::eval::{EvalResult, Method};
pub use crate::quad::QuadratureConfig;
pub use dispatch::{applicable_methods, cross_check, normalization, standard_grid, u, u_by, u_mode, CrossCheck};
pub use methods::{
    has_closed_form, u_closed, u_integral, u_integral_byparts, u_limit_bilateral, u_origin, u_series, u_stable,
    u_stable_alt, u_stable_with, SERIES_WINDOW,
};
pub use params::{FractionalParams, Order};
