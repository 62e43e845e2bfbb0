use std::f64::consts::PI;

use super::bessel::bessel_k_scaled;
use crate::eval::{EvalResult, Method};

const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = -0.258_819_403_792_806_798_40;

const MACLAURIN_RADIUS: f64 = 1.5;
const ASYMPTOTIC_START: f64 = -10.0;
const TAYLOR_STEP: f64 = 0.5;

/// Power series about the origin from the recursion `a_{k+3} = a_k/((k+3)(k+2))`.
fn maclaurin(w: f64) -> (f64, f64) {
    let mut a = [AI0, AIP0, 0.0];
    let mut val = 0.0;
    let mut der = 0.0;
    let mut wk = 1.0;
    let mut wk1 = 0.0;
    let mut recent = [f64::INFINITY; 3];
    for k in 0..300usize {
        let ak = a[k % 3];
        val += ak * wk;
        der += k as f64 * ak * wk1;
        a[k % 3] = ak / (((k + 3) * (k + 2)) as f64);
        recent[k % 3] = (ak * wk).abs() + (k as f64 * ak * wk1).abs();
        wk1 = wk;
        wk *= w;
        if k > 6 && recent.iter().all(|&r| r < 1e-18) {
            break;
        }
    }
    (val, der)
}

/// Advance `(y, y')` of `y'' = w y` from `w0` by `h` with a Taylor series.
fn taylor_step(w0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; 64];
    c[0] = y;
    c[1] = dy;
    c[2] = 0.5 * w0 * y;
    for k in 1..62 {
        c[k + 2] = (w0 * c[k] + c[k - 1]) / (((k + 2) * (k + 1)) as f64);
    }
    let mut val = 0.0;
    let mut der = 0.0;
    for k in (0..64).rev() {
        val = val * h + c[k];
    }
    for k in (1..64).rev() {
        der = der * h + k as f64 * c[k];
    }
    (val, der)
}

/// Modulus–phase asymptotic expansion for large negative argument.
fn oscillatory_asymptotic(w: f64) -> (f64, f64) {
    let z = -w;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let mut u = 1.0f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut pv = 1.0;
    let mut qv = 0.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zk *= zeta;
        let mag = u / zk;
        if mag > last || mag < 1e-18 {
            break;
        }
        last = mag;
        // (-1)^{floor(k/2)} with even k feeding P and odd k feeding Q.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * u / zk;
            pv += sign * v / zk;
        } else {
            q += sign * u / zk;
            qv += sign * v / zk;
        }
    }
    let (s, c) = (zeta - PI / 4.0).sin_cos();
    let amp = 1.0 / (PI.sqrt() * z.powf(0.25));
    let val = amp * (c * p + s * q);
    let damp = z.powf(0.25) / PI.sqrt();
    let der_neg = damp * (s * pv - c * qv);
    // d/dw Ai(w) = -d/dz Ai(-z)
    (val, der_neg)
}

fn decaying(w: f64) -> (f64, f64) {
    if w > 105.0 {
        return (0.0, 0.0);
    }
    let zeta = 2.0 / 3.0 * w * w.sqrt();
    let e = (-zeta).exp();
    let val = (w / 3.0).sqrt() / PI * bessel_k_scaled(1.0 / 3.0, zeta) * e;
    let der = -w / (PI * 3f64.sqrt()) * bessel_k_scaled(2.0 / 3.0, zeta) * e;
    (val, der)
}

fn stepped(w: f64) -> (f64, f64) {
    let (mut y, mut dy) = maclaurin(-MACLAURIN_RADIUS);
    let mut w0 = -MACLAURIN_RADIUS;
    while w0 > w {
        let h = (w - w0).max(-TAYLOR_STEP);
        (y, dy) = taylor_step(w0, y, dy, h);
        w0 += h;
    }
    (y, dy)
}

/// `(Ai(w), Ai'(w))`.
pub fn airy_ai_with_derivative(w: f64) -> (f64, f64) {
    if w.is_nan() {
        (f64::NAN, f64::NAN)
    } else if w.abs() <= MACLAURIN_RADIUS {
        maclaurin(w)
    } else if w > 0.0 {
        decaying(w)
    } else if w < ASYMPTOTIC_START {
        oscillatory_asymptotic(w)
    } else {
        stepped(w)
    }
}

/// Airy function of the first kind.
pub fn airy_ai(w: f64) -> EvalResult {
    let (v, _) = airy_ai_with_derivative(w);
    let err = if w < -MACLAURIN_RADIUS { 1e-14 * (1.0 + w.abs()) } else { 4.0 * f64::EPSILON * v.abs() + 1e-300 };
    EvalResult::new(v, err, Method::Series)
}
