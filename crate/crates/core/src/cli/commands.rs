use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::args::*;
use super::{CliError, Outcome};
use crate::density::{u, u_by, u_mode, FractionalParams, Order};
use crate::error::{Error, Result};
use crate::eval::{EvalResult, Method};
use crate::identities::{nested_lambda, run_identity, IdentityReport, SuiteOptions};
use crate::processes::{
    airy_table, density_cdf, even_moment, half_line_mass, max_density_i1, mc_compare, parallel_chunks,
    sample_airy_marginal, sample_composed, sample_g_vector, sample_iterated_terminal, sample_multivariate_common_time,
    sojourn_density_i1, ComposedKind, McSummary, TabulatedCdf, COMPOSED_LAMBDA,
};
use crate::quad::{integrate, ErrorTrap, QuadratureConfig};
use crate::specfun::gamma;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(out: &mut String, command_line: &str, seed: Option<u64>) {
    let _ = writeln!(out, "# fracdiff {VERSION}");
    let _ = writeln!(out, "# command: {command_line}");
    if let Some(s) = seed {
        let _ = writeln!(out, "# seed: {s}");
    }
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn method_of(m: MethodArg) -> Option<Method> {
    match m {
        MethodArg::Auto => None,
        MethodArg::Series => Some(Method::Series),
        MethodArg::Integral => Some(Method::Integral),
        MethodArg::IntegralByParts => Some(Method::IntegralByParts),
        MethodArg::ClosedForm => Some(Method::ClosedForm),
        MethodArg::Stable => Some(Method::Stable),
    }
}

pub fn density(a: &DensityArgs, command_line: &str) -> std::result::Result<Outcome, CliError> {
    let p = FractionalParams::new(a.nu, a.lambda, a.t)?;
    let q = QuadratureConfig::default();
    let method = method_of(a.method);
    let xs = a.grid.points();
    let rows: Vec<Result<EvalResult>> = xs
        .par_iter()
        .map(|&x| match method {
            None => u(&p, x, &q),
            Some(m) => u_by(m, &p, x, &q),
        })
        .collect();
    let rows: Vec<EvalResult> = rows.into_iter().collect::<Result<_>>()?;
    let mode = u_mode(&p, &q)?;

    let text = match a.format {
        Format::Json => {
            let points: Vec<_> = xs
                .iter()
                .zip(&rows)
                .map(|(x, r)| json!({"x": x, "value": r.value, "abs_err": r.abs_err, "method": r.method.as_str()}))
                .collect();
            json_text(&json!({
                "version": VERSION,
                "command": command_line,
                "nu": a.nu.to_string(),
                "lambda": a.lambda,
                "t": a.t,
                "mode": mode,
                "points": points,
            }))
        }
        Format::Csv | Format::Text => {
            let mut out = String::new();
            header(&mut out, command_line, None);
            let _ = writeln!(out, "# nu={} lambda={} t={}", a.nu, num(a.lambda), num(a.t));
            let _ = writeln!(out, "# mode={}", num(mode));
            out.push_str("x,value,abs_err,method\n");
            for (x, r) in xs.iter().zip(&rows) {
                let _ = writeln!(out, "{},{},{},{}", num(*x), num(r.value), num(r.abs_err), r.method);
            }
            out
        }
    };
    Ok(Outcome { text, pass: true })
}

pub fn verify(a: &VerifyArgs) -> std::result::Result<Outcome, CliError> {
    let opts = SuiteOptions { fast: a.fast, nu: a.nu, lambda: a.lambda, tolerance: a.tolerance, seed: a.seed };
    let reports: Vec<IdentityReport> = run_identity(&a.identity, &opts)?;
    let pass = reports.iter().all(|r| r.pass);
    let passed = reports.iter().filter(|r| r.pass).count();
    let text = match a.format {
        Format::Json => json_text(&json!({"pass": pass, "reports": reports})),
        Format::Csv => {
            let mut out = String::from("identity,pass,max_abs_discrepancy,tolerance,points\n");
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.name,
                    r.pass,
                    num(r.max_abs_discrepancy),
                    num(r.tolerance),
                    r.points.len()
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                let _ = write!(out, "{r}");
            }
            let _ = writeln!(out, "{passed}/{} reports passed", reports.len());
            out
        }
    };
    Ok(Outcome { text, pass })
}

/// Samples of one simulation: the scalar compared with the analytic law,
/// and the full rows written to the dump file.
struct Draws {
    scalar: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

fn draw_rows<F>(total: usize, seed: u64, draw: F) -> Result<Draws>
where
    F: Fn(&mut crate::processes::RngStream) -> Result<Vec<f64>> + Sync,
{
    let parts = parallel_chunks(total, seed, |rng, n| (0..n).map(|_| draw(rng)).collect::<Result<Vec<_>>>());
    let mut rows = Vec::with_capacity(total);
    for p in parts {
        rows.extend(p?);
    }
    Ok(Draws { scalar: rows.iter().map(|r| r[0]).collect(), rows })
}

/// `E X² = 2λ² t^ν / Γ(1+ν)` for `X ~ u_ν(·, t)`.
fn law_second_moment(p: &FractionalParams) -> f64 {
    2.0 * p.lambda * p.lambda * p.t.powf(p.nu()) / gamma(1.0 + p.nu())
}

pub fn simulate(a: &SimulateArgs, command_line: &str) -> std::result::Result<Outcome, CliError> {
    if a.samples < 100 {
        return Err(Error::InvalidParams(format!("need at least 100 samples, got {}", a.samples)).into());
    }
    let (t, seed) = (a.t, a.seed);
    let (draws, target, law, cdf): (Draws, f64, String, Box<dyn Fn(f64) -> f64 + Sync>) = match a.process {
        ProcessKind::Iterated => {
            if a.n > 20 {
                return Err(Error::InvalidParams(format!("iteration depth must be at most 20, got {}", a.n)).into());
            }
            let p = FractionalParams::new(Order::rational(1, 1 << a.n)?, nested_lambda(a.n), t)?;
            let d = draw_rows(a.samples, seed, |rng| Ok(vec![sample_iterated_terminal(a.n, t, rng)?]))?;
            let table = density_cdf(&p)?;
            let law = format!("u(nu={}, lambda={})", p.nu, num(p.lambda));
            (d, law_second_moment(&p), law, Box::new(move |x| table.cdf(x)))
        }
        ProcessKind::GVector => {
            let d = draw_rows(a.samples, seed, |rng| Ok(sample_g_vector(a.n, t, rng)?.components))?;
            let nf = a.n as f64;
            let c = (nf.powi(a.n as i32) * t).powf(1.0 / (nf - 1.0));
            let norm = nf / (gamma(1.0 / nf) * c.powf(1.0 / nf));
            let table = TabulatedCdf::from_density(
                |w| Ok(norm * (-w.powf(nf) / c).exp()),
                (46.0 * c).powf(1.0 / nf),
                4096,
                false,
            )?;
            let target = c.powf(2.0 / nf) * gamma(3.0 / nf) / gamma(1.0 / nf);
            (d, target, "first component of the kernel vector".into(), Box::new(move |x| table.cdf(x)))
        }
        ProcessKind::Composed => {
            let nu = match a.kind {
                ComposedKind::BrownianOuter => Order::rational(1, 3)?,
                ComposedKind::AiryOuter => Order::rational(2, 9)?,
            };
            let p = FractionalParams::new(nu, COMPOSED_LAMBDA, t)?;
            let d = draw_rows(a.samples, seed, |rng| Ok(vec![sample_composed(a.kind, a.n.max(3), t, rng)?]))?;
            let table = density_cdf(&p)?;
            let law = format!("u(nu={}, lambda={})", p.nu, num(p.lambda));
            (d, law_second_moment(&p), law, Box::new(move |x| table.cdf(x)))
        }
        ProcessKind::Airy => {
            let p = FractionalParams::new(Order::rational(2, 3)?, a.lambda, t)?;
            let d = draw_rows(a.samples, seed, |rng| Ok(vec![sample_airy_marginal(a.lambda, t, rng)?]))?;
            let scale = a.lambda * (3.0 * t).cbrt();
            let table = airy_table();
            let cdf = move |x: f64| 0.5 + 0.5 * x.signum() * table.cdf(x.abs() / scale);
            let law = format!("u(nu=2/3, lambda={})", num(a.lambda));
            (d, law_second_moment(&p), law, Box::new(cdf))
        }
        ProcessKind::Multivariate => {
            let p = FractionalParams::new(Order::rational(1, 2)?, a.lambda, t)?;
            let d = draw_rows(a.samples, seed, |rng| sample_multivariate_common_time(a.k, a.lambda, t, rng))?;
            let table = density_cdf(&p)?;
            let law = format!("first component against u(nu=1/2, lambda={})", num(a.lambda));
            (d, law_second_moment(&p), law, Box::new(move |x| table.cdf(x)))
        }
    };
    let summary: McSummary = mc_compare(&draws.scalar, cdf)?.with_seed(seed);

    if let Some(path) = &a.dump {
        let mut out = String::new();
        header(&mut out, command_line, Some(seed));
        for r in &draws.rows {
            let line: Vec<String> = r.iter().map(|v| num(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        std::fs::write(path, out)?;
    }

    let process = format!("{:?}", a.process).to_lowercase();
    let text = json_text(&json!({
        "version": VERSION,
        "command": command_line,
        "process": process,
        "params": {"n": a.n, "t": t, "lambda": a.lambda, "k": a.k, "kind": a.kind.to_string(), "samples": a.samples},
        "law": law,
        "summary": summary,
        "target_second_moment": target,
        "second_moment_z": summary.second_moment_z(target),
        "ks_pass_1pct": summary.ks_pass_1pct(),
        "ks_pass_5pct": summary.ks_pass_5pct(),
    }));
    Ok(Outcome { text, pass: true })
}

fn panel_cfg() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 200 }
}

/// Running integral of `f` over the grid, starting from 0. The first panel
/// uses `s = v²` to absorb an inverse square-root singularity at the origin.
fn cumulative<F: Fn(f64) -> Result<f64> + Sync>(f: &F, xs: &[f64]) -> Result<Vec<f64>> {
    let cfg = panel_cfg();
    let panel = |i: usize| -> Result<f64> {
        let trap = ErrorTrap::default();
        let r = if i == 0 {
            integrate(|v| 2.0 * v * trap.value(f(v * v)), 0.0, xs[0].sqrt(), &cfg)
        } else {
            integrate(|s| trap.value(f(s)), xs[i - 1], xs[i], &cfg)
        };
        Ok(trap.finish(r)?.value)
    };
    let pieces: Vec<Result<f64>> = (0..xs.len()).into_par_iter().map(panel).collect();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(xs.len());
    for p in pieces {
        acc += p?;
        out.push(acc);
    }
    Ok(out)
}

pub fn functionals(a: &FunctionalArgs, command_line: &str) -> std::result::Result<Outcome, CliError> {
    let t = a.t;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("t must be positive, got {t}")).into());
    }
    let mut out = String::new();
    match a.which {
        Functional::Moments => {
            let (k0, k1) = a.k;
            let rows: Vec<(u32, f64)> = (k0..=k1).map(|k| Ok((k, even_moment(a.n, k, t)?))).collect::<Result<_>>()?;
            if a.format == Format::Json {
                let rows: Vec<_> = rows.iter().map(|(k, m)| json!({"n": a.n, "k": k, "t": t, "moment": m})).collect();
                return Ok(Outcome {
                    text: json_text(&json!({"version": VERSION, "command": command_line, "moments": rows})),
                    pass: true,
                });
            }
            header(&mut out, command_line, None);
            out.push_str("n,k,t,moment\n");
            for (k, m) in rows {
                let _ = writeln!(out, "{},{},{},{}", a.n, k, num(t), num(m));
            }
        }
        Functional::Max | Functional::Sojourn => {
            if a.grid.min < 0.0 {
                return Err(Error::InvalidParams(format!("grid must lie in [0, inf), got min {}", a.grid.min)).into());
            }
            let f = |s: f64| match a.which {
                Functional::Max => max_density_i1(s, t),
                _ => sojourn_density_i1(s, t),
            };
            let xs = a.grid.points();
            let dens: Vec<f64> = xs.par_iter().map(|&s| f(s)).collect::<Vec<_>>().into_iter().collect::<Result<_>>()?;
            let cdf = cumulative(&f, &xs)?;
            let total = half_line_mass(f, t)?;
            let name = if a.which == Functional::Max { "max" } else { "sojourn" };
            if a.format == Format::Json {
                let rows: Vec<_> = xs
                    .iter()
                    .zip(dens.iter().zip(&cdf))
                    .map(|(x, (d, c))| json!({"x": x, "density": d, "cdf": c}))
                    .collect();
                return Ok(Outcome {
                    text: json_text(&json!({
                        "version": VERSION, "command": command_line, "functional": name,
                        "t": t, "normalization": total, "points": rows,
                    })),
                    pass: true,
                });
            }
            header(&mut out, command_line, None);
            let _ = writeln!(out, "# functional={name} t={}", num(t));
            let _ = writeln!(out, "# normalization={}", num(total));
            out.push_str("x,density,cdf\n");
            for (x, (d, c)) in xs.iter().zip(dens.iter().zip(&cdf)) {
                let _ = writeln!(out, "{},{},{}", num(*x), num(*d), num(*c));
            }
        }
    }
    Ok(Outcome { text: out, pass: true })
}
