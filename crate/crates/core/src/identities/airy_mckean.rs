use std::f64::consts::{FRAC_PI_4, PI};

use super::report::IdentityReport;
use super::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_oscillatory, QuadratureConfig};
use crate::specfun::airy_ai_with_derivative;

/// McKean law `(3/(2π)) s^{3/2} / (1 + s³)` on `s > 0`.
pub fn mckean_density(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("mckean_density requires s > 0, got {s}")));
    }
    Ok(1.5 / PI * s.powf(1.5) / (1.0 + s * s * s))
}

/// `∫_0^∞` of the McKean density. The tail `[1, ∞)` is mapped by `s = 1/w²`
/// to the smooth integrand `2/(1 + w⁶)` on `[0, 1]`.
pub fn mckean_normalization(q: &QuadratureConfig) -> Result<f64> {
    let head = integrate(|s| 1.5 / PI * s.powf(1.5) / (1.0 + s * s * s), 0.0, 1.0, q)?;
    let tail = integrate(|w| 3.0 / PI / (1.0 + w.powi(6)), 0.0, 1.0, q)?;
    Ok(head.value + tail.value)
}

/// `Ai(|y|) = ∫_0^∞ mckean(s) Ai(-|y|s) ds` for `|y| ≤ 6`. The oscillatory
/// tail is split at the asymptotic zeros of `Ai(-z)`,
/// `(2/3)z^{3/2} = jπ - π/4`, and the panel sums are Wynn-accelerated.
pub fn check_airy_mckean(y: f64, q: &QuadratureConfig) -> Result<IdentityReport> {
    let a = y.abs();
    if !(a <= 6.0) {
        return Err(Error::Domain(format!("airy-mckean supports |y| <= 6, got {y}")));
    }
    let lhs = airy_ai_with_derivative(a).0;
    let rhs = if a == 0.0 {
        lhs * mckean_normalization(q)?
    } else {
        let f = |s: f64| 1.5 / PI * s.powf(1.5) / (1.0 + s * s * s) * airy_ai_with_derivative(-a * s).0;
        let brk = |j: usize| {
            if j == 0 {
                0.0
            } else {
                let zeta = j as f64 * PI - FRAC_PI_4;
                (1.5 * zeta).powf(2.0 / 3.0) / a
            }
        };
        integrate_oscillatory(f, brk, q, 4000)?.value
    };
    let mut rep = IdentityReport::new("airy-mckean", DEFAULT_TOLERANCE);
    rep.push(&[("y", y)], lhs, rhs);
    Ok(rep)
}
