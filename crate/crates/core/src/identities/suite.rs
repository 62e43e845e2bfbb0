use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::airy_mckean::check_airy_mckean;
use super::report::IdentityReport;
use super::subordination::{
    check_brownian_space, check_gaussian_time, check_multiplication, check_multiplication_mc, check_nested_gaussian,
    check_stable_time, check_triplication,
};
use super::transforms::{check_fourier, check_laplace_fourier};
use crate::density::Order;
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

pub const IDENTITY_NAMES: [&str; 9] = [
    "gaussian-time",
    "brownian-space",
    "nested-gaussian",
    "triplication",
    "multiplication",
    "stable-time",
    "airy-mckean",
    "fourier",
    "laplace-fourier",
];

/// Knobs for a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Reduced point sets and Monte Carlo sizes.
    pub fast: bool,
    /// Restrict checks that take an order to this one.
    pub nu: Option<Order>,
    pub lambda: f64,
    /// Override the acceptance tolerance of deterministic checks.
    pub tolerance: Option<f64>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { fast: false, nu: None, lambda: 1.0, tolerance: None, seed: 7 }
    }
}

/// `x ∈ {0, 0.5, 1, 2}`, `t ∈ {0.5, 1, 2}`.
pub fn default_points() -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(12);
    for t in [0.5, 1.0, 2.0] {
        for x in [0.0, 0.5, 1.0, 2.0] {
            out.push((x, t));
        }
    }
    out
}

fn points(opts: &SuiteOptions) -> Vec<(f64, f64)> {
    if opts.fast {
        vec![(0.0, 1.0), (1.0, 1.0)]
    } else {
        default_points()
    }
}

fn orders(opts: &SuiteOptions, defaults: &[(u64, u64)]) -> Result<Vec<Order>> {
    match opts.nu {
        Some(nu) => Ok(vec![nu]),
        None => defaults.iter().map(|&(p, q)| Order::rational(p, q)).collect(),
    }
}

/// Run `check` over every order and point, folding the results into one
/// report per order.
fn sweep<F>(name: &str, nus: &[Order], pts: &[(f64, f64)], check: F) -> Result<Vec<IdentityReport>>
where
    F: Fn(Order, f64, f64) -> Result<IdentityReport> + Sync,
{
    nus.iter()
        .map(|&nu| {
            let parts: Vec<Result<IdentityReport>> = pts.par_iter().map(|&(x, t)| check(nu, x, t)).collect();
            let mut rep = IdentityReport::new(format!("{name} nu={nu}"), super::DEFAULT_TOLERANCE);
            for p in parts {
                rep.merge(p?);
            }
            Ok(rep)
        })
        .collect()
}

/// Run one named identity (or `all`) with its standard parameter sets.
pub fn run_identity(name: &str, opts: &SuiteOptions) -> Result<Vec<IdentityReport>> {
    let pts = points(opts);
    let lam = opts.lambda;
    let mut out = match name {
        "all" => return run_suite(&IDENTITY_NAMES, opts),
        "gaussian-time" => {
            let nus = orders(opts, &[(1, 3), (1, 2), (9, 10)])?;
            sweep(name, &nus, &pts, |nu, x, t| check_gaussian_time(nu, lam, x, t))?
        }
        "brownian-space" => {
            let nus = orders(opts, &[(2, 5), (1, 2)])?;
            sweep(name, &nus, &pts, |nu, x, t| check_brownian_space(nu, lam, x, t))?
        }
        "nested-gaussian" => {
            let depth: Vec<u32> = if opts.fast { vec![1, 2] } else { vec![1, 2, 3, 4] };
            let mut reps = Vec::new();
            for n in depth {
                let parts: Vec<Result<IdentityReport>> =
                    [0.0, 0.5, 1.0].par_iter().map(|&x| check_nested_gaussian(n, x, 1.0)).collect();
                let mut rep = IdentityReport::new(format!("{name} n={n}"), super::DEFAULT_TOLERANCE);
                for p in parts {
                    rep.merge(p?);
                }
                reps.push(rep);
            }
            reps
        }
        "triplication" => {
            let nus = orders(opts, &[(1, 3), (2, 9)])?;
            sweep(name, &nus, &pts, |nu, x, t| check_triplication(nu, lam, x, t))?
        }
        "multiplication" => {
            let mut reps = Vec::new();
            for m in [2u32, 3] {
                let nus = orders(opts, &[(1, m as u64)])?;
                reps.extend(sweep(&format!("{name} m={m}"), &nus, &pts, |nu, x, t| {
                    check_multiplication(m, nu, lam, x, t)
                })?);
            }
            let draws = if opts.fast { 20_000 } else { 1_000_000 };
            let nu = Order::rational(1, 4)?;
            reps.push(check_multiplication_mc(nu, lam, 0.0, 1.0, draws, opts.seed)?);
            return Ok(reps);
        }
        "stable-time" => {
            let nus: Vec<f64> = match opts.nu {
                Some(nu) => vec![nu.value()],
                None => vec![0.6, 0.75],
            };
            let mut reps = Vec::new();
            for nu in nus {
                let o = Order::real(nu)?;
                reps.extend(sweep(name, &[o], &pts, |_, x, t| check_stable_time(nu, lam, x, t))?);
            }
            reps
        }
        "airy-mckean" => {
            let q = QuadratureConfig::default();
            let ys: &[f64] = if opts.fast { &[0.0, 1.0] } else { &[0.0, 0.5, 1.0, 2.0, 3.0] };
            let mut rep = IdentityReport::new(name, super::DEFAULT_TOLERANCE);
            for &y in ys {
                rep.merge(check_airy_mckean(y, &q)?);
            }
            vec![rep]
        }
        "fourier" => {
            let nus = orders(opts, &[(1, 2), (1, 1), (3, 2)])?;
            let betas: &[f64] = if opts.fast { &[1.0] } else { &[0.5, 1.0, 2.0] };
            let mut reps = Vec::new();
            for nu in nus {
                let mut rep = IdentityReport::new(format!("{name} nu={nu}"), super::DEFAULT_TOLERANCE);
                for &b in betas {
                    rep.merge(check_fourier(nu, lam, b, 1.0)?);
                }
                reps.push(rep);
            }
            reps
        }
        "laplace-fourier" => {
            let nu = opts.nu.map(|o| o.value()).unwrap_or(0.6);
            let mut rep = IdentityReport::new(name, 1e-6);
            for s in [0.5, 1.0, 2.0] {
                for b in [0.5, 1.0, 1.5] {
                    rep.merge(check_laplace_fourier(nu, lam, s, b)?);
                }
            }
            vec![rep]
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown identity '{other}'; expected one of {} or 'all'",
                IDENTITY_NAMES.join(", ")
            )))
        }
    };
    if let Some(tol) = opts.tolerance {
        out = out.into_iter().map(|r| r.with_tolerance(tol)).collect();
    }
    Ok(out)
}

/// Run several identities in parallel; report order follows `names`.
pub fn run_suite(names: &[&str], opts: &SuiteOptions) -> Result<Vec<IdentityReport>> {
    let parts: Vec<Result<Vec<IdentityReport>>> = names.par_iter().map(|n| run_identity(n, opts)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}
