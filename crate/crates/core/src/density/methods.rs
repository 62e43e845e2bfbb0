use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::FractionalParams;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::quad::{integrate_panels, Integral, QuadratureConfig};
use crate::specfun::{airy_ai, gamma, wright, SeriesControl};
use crate::stable::{levy_half, stable_density_with, StableParams};

/// Largest reduced argument `|x|/(λt^{ν/2})` handed to the Wright series.
pub const SERIES_WINDOW: f64 = 10.0;

/// The Wright series is accepted only when its own error estimate
/// (truncation plus cancellation) is below `ACCEPT_ABS + ACCEPT_REL·|W|`.
/// The automatic dispatch uses the tighter floor so that callers integrating
/// `u` never see the method switch inside quadrature noise.
const SERIES_ACCEPT_REL: f64 = 1e-8;
const SERIES_ACCEPT_ABS: f64 = 1e-9;
const SERIES_POLICY_ABS: f64 = 1e-10;

fn series_with(p: &FractionalParams, x: f64, abs_floor: f64) -> Result<EvalResult> {
    let nu = p.nu();
    let r = p.reduced(x);
    if r > SERIES_WINDOW {
        return Err(Error::OutOfWindow { reduced: r, limit: SERIES_WINDOW });
    }
    let w = wright(-0.5 * nu, 1.0 - 0.5 * nu, -r, &SeriesControl::default())?;
    if w.abs_err > abs_floor + SERIES_ACCEPT_REL * w.value.abs() {
        return Err(Error::NonConvergent {
            terms: SeriesControl::default().max_terms,
            estimate: w.value,
            abs_err: w.abs_err,
        });
    }
    Ok(w.scale(0.5 / p.length_scale()))
}

/// Wright series `u = W_{-ν/2,1-ν/2}(-r) / (2λt^{ν/2})`.
pub fn u_series(p: &FractionalParams, x: f64) -> Result<EvalResult> {
    series_with(p, x, SERIES_ACCEPT_ABS)
}

/// The series as used by automatic dispatch.
pub(crate) fn u_series_policy(p: &FractionalParams, x: f64) -> Result<EvalResult> {
    series_with(p, x, SERIES_POLICY_ABS)
}

/// Smallest `ρ` with `damp(ρ) ≥ target` for an increasing damping exponent.
fn cutoff<F: Fn(f64) -> f64>(damp: F, target: f64) -> f64 {
    let mut hi = 1.0;
    while damp(hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if damp(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Integral over `[0, r_max]` with panels sized to the accumulated phase.
fn integrate_ray<F: Fn(f64) -> f64>(f: F, r_max: f64, phase: f64, q: &QuadratureConfig) -> Result<Integral> {
    let panels = ((phase.abs() / PI).ceil() as usize + 2).min(4000);
    let pts: Vec<f64> = (0..=panels).map(|j| r_max * j as f64 / panels as f64).collect();
    integrate_panels(f, &pts, q)
}

fn tail_target(q: &QuadratureConfig) -> f64 {
    (1e2 / q.abs_tol).ln().max(30.0)
}

/// Real-line integral representation
/// `u = (1/(νπ)) Im ∫_0^∞ exp(iνπ/2 - |x| y e^{iνπ/2} - (λy)^{2/ν} t) dy`.
///
/// For `ν > 1` the integrand grows before it decays on the real axis, so the
/// ray is rotated to `y = ρe^{iθ}` inside the sector where both exponents
/// decay; Cauchy's theorem leaves the value unchanged.
pub fn u_integral(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    q.validate()?;
    let nu = p.nu();
    let ax = x.abs();
    let theta = if nu <= 1.0 || ax == 0.0 { 0.0 } else { 0.5 * (-0.25 * nu * PI + 0.5 * (1.0 - nu) * PI) };
    let dir = Complex64::from_polar(1.0, theta);
    let lin = Complex64::from_polar(ax, theta + 0.5 * nu * PI);
    let pow_rot = Complex64::from_polar(p.t * p.lambda.powf(2.0 / nu), 2.0 * theta / nu);
    let head = Complex64::from_polar(1.0, 0.5 * nu * PI);
    let f = |rho: f64| {
        let e = -lin * rho - pow_rot * rho.powf(2.0 / nu);
        (head * e.exp() * dir).im
    };
    let r_max = cutoff(|rho| lin.re * rho + pow_rot.re * rho.powf(2.0 / nu), tail_target(q));
    let phase = lin.im.abs() * r_max + pow_rot.im.abs() * r_max.powf(2.0 / nu);
    let cfg = QuadratureConfig { abs_tol: q.abs_tol * nu * PI, ..*q };
    let r = integrate_ray(f, r_max, phase, &cfg)?;
    let k = 1.0 / (nu * PI);
    Ok(EvalResult::new(k * r.value, k * r.abs_err, Method::Integral))
}

/// Representation obtained by integrating twice by parts,
/// `u = (1/(πν|x|)) Im ∫_0^∞ exp(-w - r w^{ν/2} e^{-iνπ/2}) dw`,
/// `r = |x|/(λt^{ν/2})`; rotated to `w = ρe^{iφ}` when `ν > 1`.
pub fn u_integral_byparts(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    q.validate()?;
    if x == 0.0 {
        return Err(Error::Domain("the by-parts representation is singular at x = 0; use u_origin".into()));
    }
    let nu = p.nu();
    let r = p.reduced(x);
    let phi = if nu <= 1.0 { 0.0 } else { 0.5 * ((nu - 1.0) * PI / nu + 0.5 * PI) };
    let dir = Complex64::from_polar(1.0, phi);
    let rot = Complex64::from_polar(r, 0.5 * nu * (phi - PI));
    let f = |rho: f64| {
        let e = -dir * rho - rot * rho.powf(0.5 * nu);
        (e.exp() * dir).im
    };
    let r_max = cutoff(|rho| dir.re * rho + rot.re * rho.powf(0.5 * nu), tail_target(q));
    let phase = dir.im.abs() * r_max + rot.im.abs() * r_max.powf(0.5 * nu);
    let k = 1.0 / (PI * nu * x.abs());
    let cfg = QuadratureConfig { abs_tol: (q.abs_tol / k).min(0.1), ..*q };
    let res = integrate_ray(f, r_max, phase, &cfg)?;
    Ok(EvalResult::new(k * res.value, k * res.abs_err, Method::IntegralByParts))
}

/// Closed forms for `ν ∈ {1, 2/3, 4/3}` (exact rational tags only).
pub fn u_closed(p: &FractionalParams, x: f64) -> Result<EvalResult> {
    let (lam, t) = (p.lambda, p.t);
    if p.nu.is(1, 1) {
        let v = (-x * x / (4.0 * lam * lam * t)).exp() / (2.0 * lam * (PI * t).sqrt());
        return Ok(EvalResult::exact(v, Method::ClosedForm));
    }
    if p.nu.is(2, 3) {
        let c = lam * (3.0 * t).cbrt();
        let a = airy_ai(x.abs() / c);
        return Ok(EvalResult::new(1.5 / c * a.value, 1.5 / c * a.abs_err, Method::ClosedForm));
    }
    if p.nu.is(4, 3) {
        // w = s^6 turns ∫ e^{-w} w^{-1/6} Ai(-c' w^{1/3}) dw into a smooth integral.
        let pref = (0.75 / t).powf(2.0 / 3.0) / (lam * PI.sqrt());
        let c = x.abs() / lam * (2.0 / t).powf(2.0 / 3.0) / 3f64.cbrt();
        let s_max = 45f64.powf(1.0 / 6.0);
        let f = |s: f64| {
            let s2 = s * s;
            6.0 * s2 * s2 * (-s2 * s2 * s2).exp() * airy_ai(-c * s2).value
        };
        let phase = 2.0 / 3.0 * (c * s_max * s_max).powf(1.5);
        let cfg = QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_subdivisions: 2000 };
        let r = integrate_ray(f, s_max, phase, &cfg)?;
        return Ok(EvalResult::new(pref * r.value, pref * r.abs_err + 1e-13 * pref, Method::ClosedForm));
    }
    Err(Error::UnsupportedOrder(format!("no closed form for nu = {} (available: 1, 2/3, 4/3)", p.nu)))
}

/// True when `u_closed` has a branch for this order.
pub fn has_closed_form(p: &FractionalParams) -> bool {
    p.nu.is(1, 1) || p.nu.is(2, 3) || p.nu.is(4, 3)
}

/// Stable-law representation. For `ν < 1` (and `ν = 1`, `x ≠ 0`):
/// `u = (1/ν) (λ^{2/ν}t/|x|^{2/ν+1}) p_{ν/2}(λ^{2/ν}t/|x|^{2/ν}; ν/2, 1)`.
/// For `ν > 1` (and `ν = 1`, `x = 0`): `u = (1/ν) p_{2/ν}(|x|; 2-2/ν, λ^{2/ν}t)`.
pub fn u_stable(p: &FractionalParams, x: f64) -> Result<EvalResult> {
    u_stable_with(p, x, &QuadratureConfig::default())
}

pub fn u_stable_with(p: &FractionalParams, x: f64, q: &QuadratureConfig) -> Result<EvalResult> {
    let nu = p.nu();
    let ax = x.abs();
    let low = nu < 1.0 || (nu == 1.0 && ax > 0.0);
    if low {
        if ax == 0.0 {
            return Err(Error::Domain(
                "the stable representation for nu < 1 is singular at x = 0; use u_origin".into(),
            ));
        }
        let scale = p.lambda.powf(2.0 / nu) * p.t;
        let y = scale / ax.powf(2.0 / nu);
        let pre = y / (nu * ax);
        if nu == 1.0 {
            let c = 1.0 / (p.lambda * p.t.sqrt());
            let v = levy_half(1.0 / (ax * ax), c)? / (ax * ax * ax);
            return Ok(EvalResult::exact(v, Method::Stable));
        }
        let sp = StableParams::new(0.5 * nu, 0.5 * nu, 1.0)?;
        let r = stable_density_with(&sp, y, q)?;
        return Ok(EvalResult::new(pre * r.value, pre * r.abs_err, Method::Stable));
    }
    let alpha = 2.0 / nu;
    let sp = StableParams::new(alpha, 2.0 - alpha, p.lambda.powf(alpha) * p.t)?;
    let r = stable_density_with(&sp, ax, q)?;
    Ok(EvalResult::new(r.value / nu, r.abs_err / nu, Method::Stable))
}

/// The alternative (scale-transported) expression of each stable branch:
/// `ν < 1`: `(1/(ν|x|^{2/ν+1})) p_{ν/2}(|x|^{-2/ν}; ν/2, 1/(λt^{ν/2}))`;
/// `ν ≥ 1`: `(2/ν)(1/(2λt^{ν/2})) p_{2/ν}(|x|/(λt^{ν/2}); 2-2/ν, 1)`.
pub fn u_stable_alt(p: &FractionalParams, x: f64) -> Result<EvalResult> {
    let nu = p.nu();
    let ax = x.abs();
    let q = QuadratureConfig::default();
    if nu < 1.0 {
        if ax == 0.0 {
            return Err(Error::Domain("singular at x = 0".into()));
        }
        let sp = StableParams::new(0.5 * nu, 0.5 * nu, 1.0 / p.length_scale())?;
        let r = stable_density_with(&sp, ax.powf(-2.0 / nu), &q)?;
        let pre = 1.0 / (nu * ax.powf(2.0 / nu + 1.0));
        return Ok(EvalResult::new(pre * r.value, pre * r.abs_err, Method::Stable));
    }
    let alpha = 2.0 / nu;
    let sp = StableParams::new(alpha, 2.0 - alpha, 1.0)?;
    let l = p.length_scale();
    let r = stable_density_with(&sp, ax / l, &q)?;
    let pre = 1.0 / (nu * l);
    Ok(EvalResult::new(pre * r.value, pre * r.abs_err, Method::Stable))
}

/// `lim_{x→0} u = sin(νπ/2) Γ(ν/2+1) / (πνλt^{ν/2})`.
pub fn u_origin(p: &FractionalParams) -> f64 {
    let nu = p.nu();
    (0.5 * nu * PI).sin() * gamma(0.5 * nu + 1.0) / (PI * nu * p.length_scale())
}

/// Limit law `e^{-2|x|}` of `u_{1/2^n}(x, t)` as `n → ∞`.
pub fn u_limit_bilateral(x: f64) -> f64 {
    (-2.0 * x.abs()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Order;

    fn params(nu: &str, lambda: f64, t: f64) -> FractionalParams {
        FractionalParams::new(nu.parse::<Order>().unwrap(), lambda, t).unwrap()
    }

    const GAUSS_X1: f64 = 0.219_695_644_733_861_1;

    #[test]
    fn gaussian_reduction_by_each_method() {
        let p = params("1", 1.0, 1.0);
        let q = QuadratureConfig::default();
        assert!((u_series(&p, 1.0).unwrap().value - GAUSS_X1).abs() < 1e-12);
        assert!((u_integral(&p, 1.0, &q).unwrap().value - GAUSS_X1).abs() < 1e-10);
        assert!((u_integral_byparts(&p, 1.0, &q).unwrap().value - GAUSS_X1).abs() < 1e-10);
        assert!((u_closed(&p, 1.0).unwrap().value - GAUSS_X1).abs() < 1e-15);
        assert!((u_stable(&p, 1.0).unwrap().value - GAUSS_X1).abs() < 1e-14);
        let origin = 1.0 / (2.0 * PI.sqrt());
        assert!((u_integral(&p, 0.0, &q).unwrap().value - origin).abs() < 1e-11);
        assert!((u_origin(&p) - origin).abs() < 1e-15);
        assert!((u_stable(&p, 0.0).unwrap().value - origin).abs() < 1e-14);
    }

    #[test]
    fn series_at_origin_is_reciprocal_gamma() {
        let p = FractionalParams::real(0.6, 1.0, 1.0).unwrap();
        let want = 0.5 / gamma(0.7);
        assert!((u_series(&p, 0.0).unwrap().value - want).abs() < 1e-15);
        assert!((u_origin(&p) - u_series(&p, 0.0).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn airy_case_at_unit_reduced_argument() {
        let p = params("2/3", 1.0, 1.0 / 3.0);
        let want = 1.5 * 0.135_292_416_312_881_415_52;
        assert!((u_closed(&p, 1.0).unwrap().value - want).abs() < 1e-13);
        assert!((u_series(&p, 1.0).unwrap().value - want).abs() < 1e-12);
        let at0 = 1.5 * 0.355_028_053_887_817_239_26;
        assert!((u_closed(&p, 0.0).unwrap().value - at0).abs() < 1e-13);
    }

    #[test]
    fn four_thirds_closed_form_matches_series_and_origin() {
        let p = params("4/3", 1.0, 1.0);
        let c0 = u_closed(&p, 0.0).unwrap().value;
        assert!((c0 - u_origin(&p)).abs() < 1e-11, "{c0} vs {}", u_origin(&p));
        for &x in &[0.3, 1.0, 2.2] {
            let a = u_closed(&p, x).unwrap().value;
            let b = u_series(&p, x).unwrap().value;
            assert!((a - b).abs() < 1e-9, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn byparts_needs_nonzero_x() {
        let p = FractionalParams::real(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(u_integral_byparts(&p, 0.0, &QuadratureConfig::default()), Err(Error::Domain(_))));
        assert!(matches!(u_stable(&p, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn series_window_is_enforced() {
        let p = FractionalParams::real(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(u_series(&p, 11.0), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn unsupported_closed_form() {
        let p = FractionalParams::real(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(u_closed(&p, 1.0), Err(Error::UnsupportedOrder(_))));
        // A float that happens to equal 2/3 is not a rational tag.
        let p = FractionalParams::real(2.0 / 3.0, 1.0, 1.0).unwrap();
        assert!(u_closed(&p, 1.0).is_err());
    }

    #[test]
    fn rotated_representations_for_high_orders() {
        let q = QuadratureConfig::default();
        for &nu in &[1.2, 1.5, 1.8] {
            let p = FractionalParams::real(nu, 1.0, 1.0).unwrap();
            for &x in &[0.4, 1.0, 3.0, 5.0] {
                let a = u_integral(&p, x, &q).unwrap().value;
                let b = u_integral_byparts(&p, x, &q).unwrap().value;
                let c = u_stable(&p, x).unwrap().value;
                assert!((a - b).abs() < 1e-9, "nu={nu} x={x}: {a} vs {b}");
                assert!((a - c).abs() < 1e-9, "nu={nu} x={x}: {a} vs {c}");
            }
        }
    }

    #[test]
    fn both_stable_expressions_agree() {
        for &nu in &[0.3, 0.5, 0.8, 1.25, 1.5] {
            let p = FractionalParams::real(nu, 0.8, 1.7).unwrap();
            for &x in &[0.3, 1.0, 2.5] {
                let a = u_stable(&p, x).unwrap().value;
                let b = u_stable_alt(&p, x).unwrap().value;
                assert!((a - b).abs() < 1e-10 * (1.0 + a), "nu={nu} x={x}: {a} vs {b}");
            }
        }
    }
}
