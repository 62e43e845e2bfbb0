use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_6;
const SQRT_2PI: f64 = 2.506_628_274_631_000_502_415_765_284_811;
const STIRLING_SHIFT: f64 = 10.0;
const GAMMA_OVERFLOW: f64 = 171.6;

/// `sin(πz)` with exact zeros at the integers.
pub fn sin_pi(z: f64) -> f64 {
    if !z.is_finite() {
        return f64::NAN;
    }
    let r = z - 2.0 * (z / 2.0).round();
    if r == r.trunc() {
        return 0.0;
    }
    let a = r.abs();
    let s = if a > 0.5 { (PI * (1.0 - a)).sin() } else { (PI * a).sin() };
    s.copysign(r)
}

fn is_pole(z: f64) -> bool {
    z <= 0.0 && z == z.trunc()
}

fn stirling_correction(z: f64) -> f64 {
    let z2 = 1.0 / (z * z);
    (1.0 / 12.0
        + z2 * (-1.0 / 360.0
            + z2 * (1.0 / 1260.0
                + z2 * (-1.0 / 1680.0 + z2 * (1.0 / 1188.0 + z2 * (-691.0 / 360_360.0 + z2 / 156.0))))))
        / z
}

/// Γ(z) for z > 0 via upward recurrence into the Stirling regime.
fn gamma_positive(z: f64) -> f64 {
    if z >= GAMMA_OVERFLOW {
        return f64::INFINITY;
    }
    let mut x = z;
    let mut denom = 1.0;
    while x < STIRLING_SHIFT {
        denom *= x;
        x += 1.0;
    }
    // Split the power so x^(x-1/2) does not overflow before e^{-x} is applied.
    let half = x.powf(0.5 * (x - 0.5));
    let g = SQRT_2PI * half * (half * (-x).exp()) * stirling_correction(x).exp();
    g / denom
}

/// Γ(z) for real z; infinite at the poles.
pub fn gamma(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if is_pole(z) {
        return f64::INFINITY;
    }
    if z > 0.0 {
        gamma_positive(z)
    } else {
        PI / (sin_pi(z) * gamma_positive(1.0 - z))
    }
}

/// `(ln|Γ(z)|, sign Γ(z))`. At poles returns `(+∞, 1)`.
pub fn ln_gamma(z: f64) -> (f64, f64) {
    if is_pole(z) {
        return (f64::INFINITY, 1.0);
    }
    if z > 0.0 {
        if z < STIRLING_SHIFT {
            return (gamma_positive(z).ln(), 1.0);
        }
        return ((z - 0.5) * z.ln() - z + LN_SQRT_2PI + stirling_correction(z), 1.0);
    }
    let s = sin_pi(z);
    let (lg, _) = ln_gamma(1.0 - z);
    (PI.ln() - s.abs().ln() - lg, s.signum())
}

/// 1/Γ(z): exactly zero at non-positive integers, never overflows for
/// moderate arguments.
pub fn reciprocal_gamma(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if is_pole(z) {
        return 0.0;
    }
    if z >= 0.5 {
        if z >= GAMMA_OVERFLOW {
            return (-ln_gamma(z).0).exp();
        }
        return 1.0 / gamma_positive(z);
    }
    let w = 1.0 - z;
    if w < GAMMA_OVERFLOW {
        sin_pi(z) * gamma_positive(w) / PI
    } else {
        let s = sin_pi(z);
        s.signum() * (ln_gamma(w).0 + s.abs().ln() - PI.ln()).exp()
    }
}

/// `(ln|1/Γ(z)|, sign)`; at poles `(-∞, 0)`.
pub fn ln_reciprocal_gamma(z: f64) -> (f64, f64) {
    if is_pole(z) {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (lg, s) = ln_gamma(z);
    (-lg, s)
}
