use std::f64::consts::PI;

use super::report::IdentityReport;
use super::DEFAULT_TOLERANCE;
use crate::density::{u, FractionalParams, Order};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_panels, ErrorTrap, QuadratureConfig};
use crate::specfun::{mittag_leffler, SeriesControl};

/// `∫ e^{iβx} u_ν(x,t) dx = E_ν(-β²λ²t^ν)`, the left side as a cosine
/// transform of the evaluated density.
pub fn check_fourier(nu: Order, lambda: f64, beta: f64, t: f64) -> Result<IdentityReport> {
    let p = FractionalParams::new(nu, lambda, t)?;
    if !beta.is_finite() {
        return Err(Error::InvalidParams(format!("beta must be finite, got {beta}")));
    }
    let q = QuadratureConfig::default();
    let dens = |x: f64| u(&p, x, &q).map(|r| r.value);
    let l = p.length_scale();
    let peak = dens(0.0)?.max(dens(l)?);
    let mut xmax = 4.0 * l;
    while dens(xmax)? > 1e-16 * peak {
        xmax *= 1.25;
        if xmax > 1e4 * l {
            return Err(Error::QuadratureFailure { value: f64::NAN, abs_err: f64::NAN, subdivisions: 0 });
        }
    }
    let width = if beta == 0.0 { 0.5 * l } else { (PI / beta.abs()).min(0.5 * l) };
    let panels = (xmax / width).ceil() as usize;
    let points: Vec<f64> = (0..=panels).map(|i| xmax * i as f64 / panels as f64).collect();
    let cfg = QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 2000 };
    let trap = ErrorTrap::default();
    let r = integrate_panels(|x| (beta * x).cos() * trap.value(dens(x)), &points, &cfg);
    let lhs = 2.0 * trap.finish(r)?.value;
    let z = -beta * beta * lambda * lambda * t.powf(nu.value());
    let rhs = mittag_leffler(nu.value(), z, &SeriesControl::default())?.value;
    let mut rep = IdentityReport::new("fourier", DEFAULT_TOLERANCE);
    rep.push(&[("nu", nu.value()), ("beta", beta), ("t", t)], lhs, rhs);
    Ok(rep)
}

/// Laplace transform in `t` of the Fourier transform in `x`:
/// `s^{ν-1} / (s^ν + λ²β²)`.
pub fn laplace_fourier(nu: f64, lambda: f64, s: f64, beta: f64) -> f64 {
    s.powf(nu - 1.0) / (s.powf(nu) + lambda * lambda * beta * beta)
}

/// `laplace_fourier` against `∫_0^∞ e^{-st} E_ν(-β²λ²t^ν) dt` by quadrature.
pub fn check_laplace_fourier(nu: f64, lambda: f64, s: f64, beta: f64) -> Result<IdentityReport> {
    if !(s > 0.0) {
        return Err(Error::InvalidParams(format!("s must be positive, got {s}")));
    }
    if !(nu > 0.0 && nu < 2.0) {
        return Err(Error::InvalidParams(format!("nu must lie in (0, 2), got {nu}")));
    }
    let ctl = SeriesControl::default();
    let c = beta * beta * lambda * lambda;
    let cfg = QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 4000 };
    let trap = ErrorTrap::default();
    // t = w^{1/ν} smooths the t^ν behaviour at the origin.
    let k = 1.0 / nu;
    let wmax = (50.0 / s).powf(nu);
    let f = |w: f64| {
        let t = w.powf(k);
        let e = trap.value(mittag_leffler(nu, -c * t.powf(nu), &ctl).map(|r| r.value));
        (-s * t).exp() * e * k * w.powf(k - 1.0)
    };
    let r = integrate(f, 0.0, wmax, &cfg);
    let lhs = trap.finish(r)?.value;
    let mut rep = IdentityReport::new("laplace-fourier", 1e-6);
    rep.push(&[("nu", nu), ("s", s), ("beta", beta)], lhs, laplace_fourier(nu, lambda, s, beta));
    Ok(rep)
}
