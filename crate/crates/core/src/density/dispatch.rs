use serde::Serialize;

use super::methods::{
    has_closed_form, u_closed, u_integral, u_integral_byparts, u_origin, u_series, u_series_policy, u_stable_with,
    SERIES_WINDOW,
};
use super::params::FractionalParams;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::quad::{integrate, integrate_to_infinity, QuadratureConfig};

/// 41 equally spaced points on `[-5, 5]`.
pub fn standard_grid() -> Vec<f64> {
    (0..41).map(|i| -5.0 + 0.25 * i as f64).collect()
}

/// Evaluate with one named representation. Points where the method is
/// singular (`x = 0` for the by-parts and low stable forms) fall back to
/// the exact origin value.
pub fn u_by(method: Method, p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    match method {
        Method::Series => u_series(p, x),
        Method::Integral => u_integral(p, x, q),
        Method::IntegralByParts if x == 0.0 => Ok(EvalResult::exact(u_origin(p), Method::IntegralByParts)),
        Method::IntegralByParts => u_integral_byparts(p, x, q),
        Method::ClosedForm => u_closed(p, x),
        Method::Stable if x == 0.0 && p.nu() < 1.0 => Ok(EvalResult::exact(u_origin(p), Method::Stable)),
        Method::Stable => u_stable_with(p, x, q),
    }
}

/// Methods that claim to apply at `(p, x)` before any evaluation is tried.
pub fn applicable_methods(p: &FractionalParams, x: f64) -> Vec<Method> {
    let mut out = Vec::with_capacity(5);
    if has_closed_form(p) {
        out.push(Method::ClosedForm);
    }
    if p.reduced(x) <= SERIES_WINDOW {
        out.push(Method::Series);
    }
    out.push(Method::Integral);
    if x != 0.0 {
        out.push(Method::IntegralByParts);
    }
    if x != 0.0 || p.nu() >= 1.0 {
        out.push(Method::Stable);
    }
    out
}

/// Policy evaluation: closed form, then the Wright series inside its window,
/// then the by-parts integral (`x ≠ 0`) or the real-line integral (`x = 0`).
/// Tiny negative values from quadrature noise are clamped to zero here only.
pub fn u(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    let r = if has_closed_form(p) { u_closed(p, x) } else { Err(Error::UnsupportedOrder(String::new())) };
    let r = r.or_else(|_| {
        if p.reduced(x) <= SERIES_WINDOW {
            u_series_policy(p, x)
        } else {
            Err(Error::OutOfWindow { reduced: p.reduced(x), limit: SERIES_WINDOW })
        }
    });
    let r = match r {
        Ok(v) => v,
        Err(_) if x != 0.0 => u_integral_byparts(p, x, q)?,
        Err(_) => u_integral(p, x, q)?,
    };
    Ok(EvalResult { value: r.value.max(0.0), ..r })
}

/// Outcome of evaluating every applicable method at one point.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub x: f64,
    pub results: Vec<EvalResult>,
    pub declined: Vec<(Method, String)>,
    pub max_discrepancy: f64,
    /// Every pair agrees within the sum of its error estimates plus `slack`.
    pub consistent: bool,
}

pub fn cross_check(p: &FractionalParams, x: f64, q: &QuadratureConfig, slack: f64) -> CrossCheck {
    let mut results = Vec::new();
    let mut declined = Vec::new();
    for m in applicable_methods(p, x) {
        match u_by(m, p, x, q) {
            Ok(r) => results.push(r),
            Err(e) => declined.push((m, e.to_string())),
        }
    }
    let mut max_discrepancy = 0.0f64;
    let mut consistent = true;
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            let d = (a.value - b.value).abs();
            max_discrepancy = max_discrepancy.max(d);
            if d > a.abs_err + b.abs_err + slack {
                consistent = false;
            }
        }
    }
    CrossCheck { x, results, declined, max_discrepancy, consistent }
}

/// `∫ u dx` over the real line by symmetry, `2∫_0^∞`.
pub fn normalization(p: &FractionalParams, q: &QuadratureConfig) -> Result<f64> {
    let l = p.length_scale();
    let f = |x: f64| u(p, x, q).map(|r| r.value).unwrap_or(f64::NAN);
    let cfg = QuadratureConfig { rel_tol: 1e-9, abs_tol: 1e-11, ..*q };
    let near = integrate(f, 0.0, 4.0 * l, &cfg)?;
    let far = integrate_to_infinity(f, 4.0 * l, &cfg)?;
    Ok(2.0 * (near.value + far.value))
}

/// Location of the maximum of `u(·, t)` on `x ≥ 0`: zero for `ν ≤ 1`,
/// otherwise a grid search refined by golden-section.
pub fn u_mode(p: &FractionalParams, q: &QuadratureConfig) -> Result<f64> {
    if p.nu() <= 1.0 {
        return Ok(0.0);
    }
    let l = p.length_scale();
    let f = |x: f64| u(p, x, q).map(|r| r.value);
    let step = 0.02 * l;
    let mut best = (0usize, f(0.0)?);
    for i in 1..=300 {
        let v = f(i as f64 * step)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let mut a = (best.0.saturating_sub(1)) as f64 * step;
    let mut b = (best.0 + 1) as f64 * step;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a) > 1e-10 * l {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = standard_grid();
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], -5.0);
        assert_eq!(g[20], 0.0);
        assert_eq!(g[40], 5.0);
    }

    #[test]
    fn mode_is_origin_up_to_one_and_positive_beyond() {
        let q = QuadratureConfig::default();
        for &nu in &[0.7, 1.0] {
            let p = FractionalParams::real(nu, 1.0, 1.0).unwrap();
            assert_eq!(u_mode(&p, &q).unwrap(), 0.0);
        }
        let p = FractionalParams::real(1.5, 1.0, 1.0).unwrap();
        let m = u_mode(&p, &q).unwrap();
        assert!(m > 0.0);
        let um = u(&p, m, &q).unwrap().value;
        for d in [1e-4, -1e-4] {
            assert!(u(&p, m + d, &q).unwrap().value < um);
        }
    }

    #[test]
    fn dispatcher_falls_back_outside_the_window() {
        let p = FractionalParams::real(0.5, 1.0, 1.0).unwrap();
        let q = QuadratureConfig::default();
        let r = u(&p, 12.0, &q).unwrap();
        assert_eq!(r.method, Method::IntegralByParts);
        assert!(r.value >= 0.0);
    }
}
