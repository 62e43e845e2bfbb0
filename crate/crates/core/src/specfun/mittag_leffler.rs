use std::f64::consts::PI;

use super::gamma::{ln_gamma, reciprocal_gamma};
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::quad::{integrate, integrate_to_infinity, QuadratureConfig};

/// Beyond this |z| the asymptotic expansion is tried first on the negative axis.
const ASYMPTOTIC_THRESHOLD: f64 = 50.0;
/// The power series is tried only while `|z|^{1/ν}`, the log-size of
/// `Σ|terms|`, stays small.
const SERIES_GROWTH_LIMIT: f64 = 8.0;

fn series(nu: f64, z: f64, ctl: &SeriesControl) -> Result<(EvalResult, f64)> {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut zk = 1.0f64;
    let mut small_run = 0;
    for k in 0..ctl.max_terms {
        if k > 0 {
            zk *= z;
        }
        let y = nu * k as f64 + 1.0;
        let term = if zk.is_finite() && zk.abs() > 1e-280 {
            zk * reciprocal_gamma(y)
        } else {
            let mag = (k as f64 * z.abs().ln() - ln_gamma(y).0).exp();
            if z < 0.0 && k % 2 == 1 {
                -mag
            } else {
                mag
            }
        };
        sum += term;
        abs_sum += term.abs();
        if !abs_sum.is_finite() {
            break;
        }
        let past_peak = (k as f64) * nu > z.abs().powf(1.0 / nu);
        if k + 1 >= ctl.min_terms && past_peak && term.abs() <= ctl.rel_tol * sum.abs().max(1e-300) {
            small_run += 1;
            if small_run >= 2 {
                let err = term.abs() + 8.0 * f64::EPSILON * abs_sum;
                return Ok((EvalResult::new(sum, err, Method::Series), abs_sum));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergent { terms: ctl.max_terms, estimate: sum, abs_err: 8.0 * f64::EPSILON * abs_sum })
}

/// `E_ν(-x)` for `x > 0`, `ν ∈ (0,2)`, `ν ≠ 1`, from the real-axis spectral
/// integral (plus the residue pair when `ν > 1`).
fn spectral(nu: f64, x: f64) -> Result<EvalResult> {
    let c = (nu * PI).cos();
    let xp = x.powf(1.0 / nu);
    let f = |v: f64| (-(v * x).powf(1.0 / nu)).exp() / (v * v + 2.0 * v * c + 1.0);
    let cfg = QuadratureConfig { rel_tol: 1e-13, abs_tol: 1e-16, max_subdivisions: 4000 };
    let knee = (1.0 / x).min(1.0);
    let a = integrate(f, 0.0, knee, &cfg)?;
    let b = if knee < 1.0 {
        integrate(f, knee, 1.0, &cfg)?
    } else {
        crate::quad::Integral { value: 0.0, abs_err: 0.0, evaluations: 0 }
    };
    let tail = integrate_to_infinity(f, 1.0, &cfg)?;
    let pref = (nu * PI).sin() / (nu * PI);
    let mut value = pref * (a.value + b.value + tail.value);
    let err = pref.abs() * (a.abs_err + b.abs_err + tail.abs_err);
    if nu > 1.0 {
        value += 2.0 / nu * (xp * (PI / nu).cos()).exp() * (xp * (PI / nu).sin()).cos();
    }
    Ok(EvalResult::new(value, err + 4.0 * f64::EPSILON, Method::Integral))
}

/// Leading terms of `E_ν(z) ~ -Σ_k z^{-k}/Γ(1-kν)` as `z → -∞`, `0 < ν < 1`.
/// The bound `|1/Γ(1-y)| ≤ Γ(y)/π` gives an envelope that pole zeros cannot fool.
fn asymptotic(nu: f64, z: f64) -> Option<EvalResult> {
    let envelope = |k: i32| (ln_gamma(k as f64 * nu).0 - k as f64 * z.abs().ln()).exp() / PI;
    let mut sum = 0.0;
    let mut k = 1;
    loop {
        sum -= z.powi(-k) * reciprocal_gamma(1.0 - k as f64 * nu);
        let next = envelope(k + 1);
        if next < 1e-17 {
            return Some(EvalResult::new(sum, next, Method::Series));
        }
        if next > envelope(k) || k >= 80 {
            return (next < 1e-15).then(|| EvalResult::new(sum, next, Method::Series));
        }
        k += 1;
    }
}

/// Mittag-Leffler function `E_{ν,1}(z) = Σ_k z^k / Γ(νk+1)`.
pub fn mittag_leffler(nu: f64, z: f64, ctl: &SeriesControl) -> Result<EvalResult> {
    if !(nu > 0.0) || !nu.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("mittag_leffler requires nu > 0 and finite z (nu={nu}, z={z})")));
    }
    ctl.validate()?;
    if z == 0.0 {
        return Ok(EvalResult::new(1.0, 0.0, Method::Series));
    }
    if nu == 1.0 {
        return Ok(EvalResult::exact(z.exp(), Method::ClosedForm));
    }
    if nu == 2.0 && z < 0.0 {
        return Ok(EvalResult::exact((-z).sqrt().cos(), Method::ClosedForm));
    }
    if !(z < 0.0 && nu < 2.0) {
        return series(nu, z, ctl).map(|(r, _)| r);
    }
    if z.abs().powf(1.0 / nu) < SERIES_GROWTH_LIMIT {
        if let Ok((r, abs_sum)) = series(nu, z, ctl) {
            if 8.0 * f64::EPSILON * abs_sum <= 1e-12 {
                return Ok(r);
            }
        }
    }
    if nu < 1.0 && z < -ASYMPTOTIC_THRESHOLD {
        if let Some(r) = asymptotic(nu, z) {
            return Ok(r);
        }
    }
    spectral(nu, -z)
}
