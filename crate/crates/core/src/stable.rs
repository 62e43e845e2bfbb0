//! Stable densities `p_α(x; γ, η)` with characteristic function
//! `exp(-η|β|^α e^{-iπγ sgn(β)/2})` (Feller's parametrization, kept verbatim).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::quad::{integrate_panels, QuadratureConfig};
use crate::specfun::{gamma, ln_gamma, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl StableParams {
    pub fn new(alpha: f64, gamma: f64, eta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0 {
            return Err(Error::InvalidParams(format!("stable index must lie in (0,1) or (1,2], got {alpha}")));
        }
        let bound = alpha.min(2.0 - alpha);
        if !gamma.is_finite() || gamma.abs() > bound + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "skewness {gamma} outside the admissible range |gamma| <= {bound}"
            )));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParams(format!("scale must be positive, got {eta}")));
        }
        Ok(Self { alpha, gamma: gamma.clamp(-bound, bound), eta })
    }
}

/// Series for `1 < α < 2`, unit scale, `x ≥ 0`:
/// `(1/π) Σ_{k≥1} (-x)^{k-1} sin(kπ(γ+α)/(2α)) Γ(1+k/α)/k!`.
fn series_above_one(alpha: f64, gamma_: f64, x: f64, ctl: &SeriesControl) -> Option<EvalResult> {
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev_env = f64::INFINITY;
    let mut small_run = 0;
    let ln_x = x.abs().ln();
    for k in 1..=ctl.max_terms {
        let kf = k as f64;
        let ln_env = if x == 0.0 {
            if k > 1 {
                break;
            }
            0.0
        } else {
            (kf - 1.0) * ln_x
        } + ln_gamma(1.0 + kf / alpha).0
            - ln_gamma(kf + 1.0).0;
        let env = ln_env.exp();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * env * (kf * PI * (gamma_ + alpha) / (2.0 * alpha)).sin();
        sum += term;
        abs_sum += env;
        if !abs_sum.is_finite() {
            return None;
        }
        if k >= ctl.min_terms && env < prev_env && env <= ctl.rel_tol * sum.abs().max(1e-300) {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
        prev_env = env;
        if k == ctl.max_terms {
            return None;
        }
    }
    let value = sum / PI;
    let err = (prev_env + 8.0 * f64::EPSILON * abs_sum) / PI;
    Some(EvalResult::new(value, err, Method::Series))
}

/// Series for `0 < α < 1`, unit scale, `x > 0`:
/// `(α/π) Σ_{r≥0} (-1)^r Γ(α(r+1))/r! x^{-α(r+1)-1} sin(π(γ+α)(r+1)/2)`.
fn series_below_one(alpha: f64, gamma_: f64, x: f64, ctl: &SeriesControl) -> Option<EvalResult> {
    let ln_x = x.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev_env = f64::INFINITY;
    let mut small_run = 0;
    for r in 0..ctl.max_terms {
        let rf = r as f64;
        let a = alpha * (rf + 1.0);
        let env = (ln_gamma(a).0 - ln_gamma(rf + 1.0).0 - (a + 1.0) * ln_x).exp();
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * env * (0.5 * PI * (gamma_ + alpha) * (rf + 1.0)).sin();
        sum += term;
        abs_sum += env;
        if !abs_sum.is_finite() {
            return None;
        }
        if r + 1 >= ctl.min_terms && env < prev_env && env <= ctl.rel_tol * sum.abs().max(1e-300) {
            small_run += 1;
            if small_run >= 2 {
                let value = alpha / PI * sum;
                let err = alpha / PI * (env + 8.0 * f64::EPSILON * abs_sum);
                return Some(EvalResult::new(value, err, Method::Series));
            }
        } else {
            small_run = 0;
        }
        prev_env = env;
    }
    None
}

/// Fourier inversion on a rotated ray `β = ρe^{iθ}` chosen so that both the
/// phase term and the stable exponent decay exponentially.
fn inversion(alpha: f64, gamma_: f64, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    let lo = (-0.5 * PI).max((PI * gamma_ - PI) / (2.0 * alpha));
    let hi = if x == 0.0 { (PI * gamma_ + PI) / (2.0 * alpha) } else { 0.0f64.min((PI * gamma_ + PI) / (2.0 * alpha)) };
    let theta = 0.5 * (lo + hi);
    let dir = Complex64::from_polar(1.0, theta);
    let rot = Complex64::from_polar(1.0, alpha * theta - 0.5 * PI * gamma_);
    let f = |rho: f64| {
        if rho == 0.0 {
            return dir.re;
        }
        let e = -Complex64::i() * x * rho * dir - rho.powf(alpha) * rot;
        (e.exp() * dir).re
    };
    // Radius where the modulus bound exp(-(x ρ |sin θ| + ρ^α cos(αθ-πγ/2))) is negligible.
    let damp_lin = x * (-theta.sin()).max(0.0);
    let damp_pow = rot.re;
    let target = (1e3 / q.abs_tol.max(1e-300)).ln();
    let mut r_max = 1.0;
    while damp_lin * r_max + damp_pow * r_max.powf(alpha) < target {
        r_max *= 1.5;
    }
    let phase = x * theta.cos().abs() * r_max + r_max.powf(alpha) * rot.im.abs();
    let panels = ((phase / PI).ceil() as usize).clamp(4, 4000);
    let mut pts = vec![0.0];
    // Geometric refinement near the origin where ρ^α is not smooth.
    let first = r_max / panels as f64;
    for j in (1..=20).rev() {
        pts.push(first * 0.5f64.powi(j));
    }
    for j in 1..=panels {
        pts.push(r_max * j as f64 / panels as f64);
    }
    let cfg = QuadratureConfig { max_subdivisions: q.max_subdivisions.max(4000), ..*q };
    let r = integrate_panels(f, &pts, &cfg)?;
    Ok(EvalResult::new(r.value / PI, r.abs_err / PI, Method::Integral))
}

fn unit_density(alpha: f64, gamma_: f64, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    // p(x; γ) = p(-x; -γ)
    if x < 0.0 {
        return unit_density(alpha, -gamma_, -x, q);
    }
    if alpha == 2.0 {
        let v = (-x * x / 4.0).exp() / (4.0 * PI).sqrt();
        return Ok(EvalResult::exact(v, Method::ClosedForm));
    }
    let ctl = SeriesControl::default();
    let accept = |r: &EvalResult| r.abs_err <= 1e-12 + 1e-10 * r.value.abs();
    if alpha > 1.0 {
        if let Some(r) = series_above_one(alpha, gamma_, x, &ctl) {
            if accept(&r) {
                return Ok(r);
            }
        }
    } else if x > 0.0 {
        if let Some(r) = series_below_one(alpha, gamma_, x, &ctl) {
            if accept(&r) {
                return Ok(r);
            }
        }
    }
    inversion(alpha, gamma_, x, q)
}

/// `p_α(x; γ, η)`, using `p(x;γ,η) = η^{-1/α} p(x η^{-1/α}; γ, 1)`.
pub fn stable_density(sp: &StableParams, x: f64) -> Result<EvalResult> {
    stable_density_with(sp, x, &QuadratureConfig::default())
}

pub fn stable_density_with(sp: &StableParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("stable density needs finite x, got {x}")));
    }
    let s = sp.eta.powf(-1.0 / sp.alpha);
    let r = unit_density(sp.alpha, sp.gamma, x * s, q)?;
    Ok(EvalResult::new(r.value * s, r.abs_err * s, r.method))
}

/// Closed form of `p_{1/2}(y; 1/2, c)`: `(c/√2) e^{-c²/(4y)} / √(2π y³)`.
pub fn levy_half(y: f64, c: f64) -> Result<f64> {
    if !(y > 0.0) || !(c > 0.0) {
        return Err(Error::Domain(format!("levy_half requires y > 0 and c > 0 (y={y}, c={c})")));
    }
    Ok(c / 2f64.sqrt() * (-c * c / (4.0 * y)).exp() / (2.0 * PI * y * y * y).sqrt())
}

/// Value of `p_α(0; γ, 1)` for `1 < α ≤ 2`: `Γ(1+1/α) sin(π(γ+α)/(2α))/π`.
pub fn stable_density_at_zero(alpha: f64, gamma_: f64) -> f64 {
    gamma(1.0 + 1.0 / alpha) * (PI * (gamma_ + alpha) / (2.0 * alpha)).sin() / PI
}
