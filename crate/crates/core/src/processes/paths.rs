use super::rng::{parallel_samples, RngStream};
use crate::error::{Error, Result};

/// Steps per Brownian path in the path-functional simulations.
pub const PATH_STEPS: usize = 1 << 14;

/// Running maximum of `|B|` on `[0, t]` for a random walk with `steps`
/// Gaussian increments.
fn max_abs_walk(t: f64, steps: usize, rng: &mut RngStream) -> f64 {
    let sd = (t / steps as f64).sqrt();
    let mut b = 0.0f64;
    let mut m = 0.0f64;
    for _ in 0..steps {
        b += sd * rng.normal();
        m = m.max(b.abs());
    }
    m
}

fn max_walk(t: f64, steps: usize, rng: &mut RngStream) -> f64 {
    let sd = (t / steps as f64).sqrt();
    let mut b = 0.0f64;
    let mut m = 0.0f64;
    for _ in 0..steps {
        b += sd * rng.normal();
        m = m.max(b);
    }
    m
}

/// One discretized draw of `max_{s≤t} I_1(s)`: simulate `B_2` on `[0, t]`,
/// take `M = max|B_2|`, then return the maximum of `B_1` on `[0, M]`.
/// Biased low by `O(√(1/steps))`.
pub fn simulate_max_i1(t: f64, steps: usize, rng: &mut RngStream) -> Result<f64> {
    if !(t > 0.0) || steps == 0 {
        return Err(Error::InvalidParams(format!("need t > 0 and steps > 0 (t={t}, steps={steps})")));
    }
    let m = max_abs_walk(t, steps, rng);
    Ok(max_walk(m, steps, rng))
}

/// One discretized draw of the sojourn time of `B_1` on `(0, ∞)` over
/// `[0, max_{s≤t}|B_2(s)|]`.
pub fn simulate_sojourn_i1(t: f64, steps: usize, rng: &mut RngStream) -> Result<f64> {
    if !(t > 0.0) || steps == 0 {
        return Err(Error::InvalidParams(format!("need t > 0 and steps > 0 (t={t}, steps={steps})")));
    }
    let m = max_abs_walk(t, steps, rng);
    let dt = m / steps as f64;
    let sd = dt.sqrt();
    let mut b = 0.0f64;
    let mut positive = 0usize;
    for _ in 0..steps {
        b += sd * rng.normal();
        if b > 0.0 {
            positive += 1;
        }
    }
    Ok(positive as f64 * dt)
}

/// `paths` independent maxima, generated in parallel from `seed`.
pub fn sample_max_i1(paths: usize, t: f64, steps: usize, seed: u64) -> Result<Vec<f64>> {
    parallel_samples(paths, seed, |rng| simulate_max_i1(t, steps, rng))
}
