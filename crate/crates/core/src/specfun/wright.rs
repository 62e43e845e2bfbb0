use std::f64::consts::PI;

use super::gamma::{ln_gamma, ln_reciprocal_gamma, reciprocal_gamma};
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};

/// Upper bound for `ln|1/Γ(y)|` that ignores the oscillating `sin(πy)`
/// factor, so pole zeros never fake convergence.
fn ln_rgamma_envelope(y: f64) -> f64 {
    if y >= 0.5 {
        ln_reciprocal_gamma(y).0
    } else {
        ln_gamma(1.0 - y).0 - PI.ln()
    }
}

/// Wright function `W_{α,β}(x) = Σ_k x^k / (k! Γ(αk+β))` for `α > -1`.
///
/// The reported error is the envelope of the first neglected term plus a
/// rounding estimate proportional to `Σ|terms|`, which exposes
/// cancellation at large `|x|` when `α < 0`.
pub fn wright(alpha: f64, beta: f64, x: f64, ctl: &SeriesControl) -> Result<EvalResult> {
    if !(alpha > -1.0) || !alpha.is_finite() || !beta.is_finite() || !x.is_finite() {
        return Err(Error::Domain(format!(
            "wright requires alpha > -1 and finite arguments (alpha={alpha}, beta={beta}, x={x})"
        )));
    }
    ctl.validate()?;
    if x == 0.0 {
        return Ok(EvalResult::exact(reciprocal_gamma(beta), Method::Series));
    }

    let ln_ax = x.abs().ln();
    let neg = x < 0.0;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    // x^k / k! kept by recurrence while it stays in range.
    let mut pf = 1.0f64;
    let mut prev_env = f64::INFINITY;
    let mut small_run = 0;

    for k in 0..ctl.max_terms {
        let kf = k as f64;
        if k > 0 {
            pf *= x / kf;
        }
        let y = alpha * kf + beta;
        let ln_pf = kf * ln_ax - ln_gamma(kf + 1.0).0;
        let rg = reciprocal_gamma(y);
        let term = if pf.is_finite() && pf.abs() > 1e-280 && rg.is_finite() {
            pf * rg
        } else {
            let (lr, s) = ln_reciprocal_gamma(y);
            let sign = if neg && k % 2 == 1 { -s } else { s };
            sign * (ln_pf + lr).exp()
        };

        // Neumaier summation.
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();

        let env = (ln_pf + ln_rgamma_envelope(y)).exp();
        let total = (sum + comp).abs();
        if k + 1 >= ctl.min_terms && env <= prev_env && env <= ctl.rel_tol * total.max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 2 {
                let value = sum + comp;
                let abs_err = env + 8.0 * f64::EPSILON * abs_sum;
                return Ok(EvalResult::new(value, abs_err, Method::Series));
            }
        } else {
            small_run = 0;
        }
        prev_env = env;
        if !abs_sum.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergent {
        terms: ctl.max_terms,
        estimate: sum + comp,
        abs_err: prev_env + 8.0 * f64::EPSILON * abs_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_case() {
        let ctl = SeriesControl::default();
        for i in 0..=20 {
            let x = -5.0 + 0.5 * i as f64;
            let w = wright(0.0, 1.0, x, &ctl).unwrap();
            assert!(((w.value - x.exp()) / x.exp()).abs() < 1e-12, "x={x}");
        }
        let w = wright(0.0, 1.0, 1.5, &ctl).unwrap();
        assert!((w.value - 4.481_689_070_338_065).abs() < 1e-12);
    }

    #[test]
    fn gaussian_case() {
        let ctl = SeriesControl::default();
        let w = wright(-0.5, 0.5, -1.0, &ctl).unwrap();
        let expected = (-0.25f64).exp() / PI.sqrt();
        assert!((w.value - expected).abs() < 1e-14);
        let w0 = wright(-0.5, 0.5, 0.0, &ctl).unwrap();
        assert!((w0.value - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_alpha_below_minus_one() {
        assert!(matches!(wright(-1.0, 1.0, 1.0, &SeriesControl::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn cancellation_is_reported_not_hidden() {
        // Near α = -1 the alternating series is hopeless at moderate |x|.
        let r = wright(-0.9, 0.1, -5.0, &SeriesControl::default());
        match r {
            Ok(v) => assert!(v.abs_err > 1e-6),
            Err(Error::NonConvergent { .. }) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
