use std::f64::consts::PI;

use super::stats::TabulatedCdf;
use crate::density::{u, FractionalParams, Order};
use crate::error::{Error, Result};
use crate::identities::nested_lambda;
use crate::quad::{integrate, integrate_panels, integrate_to_infinity, ErrorTrap, QuadratureConfig};
use crate::specfun::{bessel_k_quarter, gamma};

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-11, abs_tol: 1e-14, max_subdivisions: 2000 }
}

/// Density of `max_{s≤t} |B(s)|` at `y > 0`. Image series
/// `4/√(2πt) Σ_{k≥0} (-1)^k (2k+1) e^{-y²(2k+1)²/(2t)}` for `y ≥ √t`, its
/// theta-transformed dual `(πt/y³) Σ (-1)^k (2k+1) e^{-π²(2k+1)²t/(8y²)}` below.
pub fn max_abs_bm_density(y: f64, t: f64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    let mut sum = 0.0;
    if y * y >= t {
        for k in 0..40 {
            let m = (2 * k + 1) as f64;
            let term = m * (-y * y * m * m / (2.0 * t)).exp();
            sum += if k % 2 == 0 { term } else { -term };
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        4.0 * sum / (2.0 * PI * t).sqrt()
    } else {
        for k in 0..40 {
            let m = (2 * k + 1) as f64;
            let term = m * (-PI * PI * m * m * t / (8.0 * y * y)).exp();
            sum += if k % 2 == 0 { term } else { -term };
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        PI * t / (y * y * y) * sum
    }
}

/// Density of `max_{s≤t} I_1(s)` for `I_1(s) = B_1(|B_2(s)|)`:
/// `2∫_0^∞ φ_y(β) g(y) dy` with `g` the law of `max|B_2|` on `[0, t]`.
/// `β = 0` returns the right limit.
pub fn max_density_i1(beta: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!("max density needs beta >= 0, got {beta}")));
    }
    let st = t.sqrt();
    let f = |y: f64| 2.0 * (-beta * beta / (2.0 * y)).exp() / (2.0 * PI * y).sqrt() * max_abs_bm_density(y, t);
    let mut pts = vec![0.0, 0.5 * st, st, 2.0 * st, 4.0 * st, 10.0 * st];
    if beta > 0.0 && beta * beta < 10.0 * st {
        pts.push(beta * beta);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(integrate_panels(f, &pts, &cfg())?.value)
}

/// `max_density_i1` as the alternating sum `4Σ_{k≥0} (-1)^k u_{1/2}(β, t/(2k+1)²)`
/// of iterated-BM densities (`λ² = 2^{-3/2}`). Converges slowly as `β → 0`.
pub fn max_density_i1_series(beta: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("series form needs beta > 0, got {beta}")));
    }
    let nu = Order::rational(1, 2)?;
    let lam = nested_lambda(1);
    let q = QuadratureConfig::default();
    let mut sum = 0.0;
    for k in 0..5000 {
        let m = (2 * k + 1) as f64;
        let p = FractionalParams::new(nu, lam, t / (m * m))?;
        let term = u(&p, beta, &q)?.value;
        sum += if k % 2 == 0 { term } else { -term };
        if term < 1e-14 {
            return Ok(4.0 * sum);
        }
    }
    Err(Error::NonConvergent { terms: 5000, estimate: 4.0 * sum, abs_err: f64::NAN })
}

/// The two-branch sum `2Σ_{|k|≤K} (-1)^k [u_{1/2}(β, t/(1+2k)²) + u_{1/2}(β, t/(1-2k)²)]`
/// taken literally. Terms cancel in pairs, leaving only the boundary term
/// `4(-1)^K u_{1/2}(β, t/(2K+1)²)`.
pub fn max_density_i1_two_branch(beta: f64, t: f64, kmax: u32) -> Result<f64> {
    check_t(t)?;
    let nu = Order::rational(1, 2)?;
    let lam = nested_lambda(1);
    let q = QuadratureConfig::default();
    let dens = |m: i64| -> Result<f64> {
        let m = m as f64;
        Ok(u(&FractionalParams::new(nu, lam, t / (m * m))?, beta, &q)?.value)
    };
    let mut sum = 0.0;
    for k in -(kmax as i64)..=kmax as i64 {
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * (dens(1 + 2 * k)? + dens(1 - 2 * k)?);
    }
    Ok(2.0 * sum)
}

/// Sojourn density of `I_1` on the positive half-line through the `K_{1/4}`
/// series `(2/(π√(πt))) Σ_{k≥0} (-1)^k (2k+1) e^{-a_k} K_{1/4}(a_k)`,
/// `a_k = s²(2k+1)²/(4t)`.
pub fn sojourn_density_i1_series(s: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("sojourn density needs s > 0, got {s}")));
    }
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let m = (2 * k + 1) as f64;
        let a = s * s * m * m / (4.0 * t);
        if a > 60.0 {
            break;
        }
        let term = m * (-a).exp() * bessel_k_quarter(a)?.value;
        sum += if k % 2 == 0 { term } else { -term };
        k += 1;
        if k > 20_000 {
            return Err(Error::NonConvergent { terms: k, estimate: sum, abs_err: f64::NAN });
        }
    }
    Ok(2.0 / (PI * (PI * t).sqrt()) * sum)
}

/// Sojourn density as the arcsine mixture over the law of `max|B_2|`:
/// `∫_s^∞ g(z) / (π√(s(z-s))) dz = (2/(π√s)) ∫_0^∞ g(s + v²) dv`.
pub fn sojourn_density_i1_integral(s: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(s > 0.0) {
        return Err(Error::Domain(format!("sojourn density needs s > 0, got {s}")));
    }
    let st = t.sqrt();
    let vmax = (10.0 * st).sqrt().max(1.0) * 2.0;
    let pts = [0.0, 0.25 * vmax, 0.5 * vmax, vmax];
    let r = integrate_panels(|v| max_abs_bm_density(s + v * v, t), &pts, &cfg())?;
    Ok(2.0 / (PI * s.sqrt()) * r.value)
}

/// Sojourn density of `I_1`: the `K_{1/4}` series where it needs at most a
/// few hundred terms, the arcsine-mixture integral closer to `s = 0`.
pub fn sojourn_density_i1(s: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if s >= 0.05 * t.sqrt() {
        sojourn_density_i1_series(s, t)
    } else {
        sojourn_density_i1_integral(s, t)
    }
}

/// `E I_n^{2k}(t) = 2^{k/2^n} / 2^{2k} · (2k)! / Γ(k/2^n + 1) · t^{k/2^n}`.
pub fn even_moment(n: u32, k: u32, t: f64) -> Result<f64> {
    check_t(t)?;
    if k == 0 {
        return Err(Error::InvalidParams("moment order k must be at least 1".into()));
    }
    let e = k as f64 / 2f64.powi(n as i32);
    Ok(2f64.powf(e) / 4f64.powi(k as i32) * gamma(2.0 * k as f64 + 1.0) / gamma(e + 1.0) * t.powf(e))
}

/// `∫_0^∞ f` for a law on the half-line whose density is singular like
/// `s^{-1/2}` (or better) at the origin; `s = v²` smooths it.
pub fn half_line_mass<F: Fn(f64) -> Result<f64>>(f: F, scale: f64) -> Result<f64> {
    let trap = ErrorTrap::default();
    let g = |v: f64| 2.0 * v * trap.value(f(v * v));
    let head = integrate(g, 0.0, 3.0 * scale.sqrt(), &cfg());
    let head = trap.finish(head)?;
    let trap = ErrorTrap::default();
    let g = |v: f64| 2.0 * v * trap.value(f(v * v));
    let tail = integrate_to_infinity(g, 3.0 * scale.sqrt(), &cfg());
    let tail = trap.finish(tail)?;
    Ok(head.value + tail.value)
}

/// Tabulated CDF of `u_ν(·, t)` on 4096 points, extended until the density
/// falls below `1e-14` of its peak.
pub fn density_cdf(p: &FractionalParams) -> Result<TabulatedCdf> {
    let q = QuadratureConfig::default();
    let f = |x: f64| u(p, x, &q).map(|r| r.value);
    let l = p.length_scale();
    let peak = f(0.0)?.max(f(l)?);
    let mut xmax = 4.0 * l;
    while f(xmax)? > 1e-14 * peak && xmax < 1e4 * l {
        xmax *= 1.25;
    }
    TabulatedCdf::from_density(f, xmax, 4096, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_abs_branches_agree() {
        // Evaluate both image forms at the switch point by hand.
        let t: f64 = 1.3;
        for y in [0.9 * t.sqrt(), t.sqrt(), 1.1 * t.sqrt()] {
            let mut a = 0.0;
            let mut b = 0.0;
            for k in 0..30 {
                let m = (2 * k + 1) as f64;
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                a += s * m * (-y * y * m * m / (2.0 * t)).exp();
                b += s * m * (-PI * PI * m * m * t / (8.0 * y * y)).exp();
            }
            let a = 4.0 * a / (2.0 * PI * t).sqrt();
            let b = PI * t / (y * y * y) * b;
            assert!((a - b).abs() < 1e-13, "y={y}: {a} {b}");
        }
    }

    #[test]
    fn max_abs_normalizes() {
        let r = integrate_to_infinity(|y| max_abs_bm_density(y, 2.0), 0.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moments() {
        assert!((even_moment(0, 1, 3.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((even_moment(1, 1, 1.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-14);
        // Gaussian fourth moment 3t².
        assert!((even_moment(0, 2, 2.0).unwrap() - 12.0).abs() < 1e-12);
        for (n, k) in [(1, 1), (2, 3), (3, 2)] {
            let a = even_moment(n, k, 1.0).unwrap();
            let b = even_moment(n, k, 2.0).unwrap();
            let want = 2f64.powf(k as f64 / 2f64.powi(n as i32));
            assert!((b / a - want).abs() < 1e-14);
        }
    }

    #[test]
    fn two_branch_sum_cancels() {
        let s = max_density_i1_two_branch(0.8, 1.0, 6).unwrap();
        let p = FractionalParams::new(Order::rational(1, 2).unwrap(), nested_lambda(1), 1.0 / 169.0).unwrap();
        let boundary = 4.0 * u(&p, 0.8, &QuadratureConfig::default()).unwrap().value;
        assert!((s - boundary).abs() < 1e-12, "{s} vs {boundary}");
    }
}
