use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::stats::TabulatedCdf;
use crate::error::{Error, Result};
use crate::specfun::airy_ai_with_derivative;

/// Random time `(w_1, …, w_{n-1})` of the `n`-fold multiplication kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GVector {
    pub components: Vec<f64>,
}

impl GVector {
    pub fn product(&self) -> f64 {
        self.components.iter().product()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Terminal value of `I_n(t) = B_1(|B_2(…|B_{n+1}(t)|…)|)`: `n` nested
/// `|N(0, z)|` draws starting from `z = t`, then one `N(0, z)`.
pub fn sample_iterated_terminal(n: u32, t: f64, rng: &mut RngStream) -> Result<f64> {
    positive("t", t)?;
    let mut z = t;
    for _ in 0..n {
        z = (z.sqrt() * rng.normal()).abs();
    }
    Ok(z.sqrt() * rng.normal())
}

/// Exact draw from `p(w) ∝ e^{-Σ w_j^n / c} w_2 w_3² ⋯ w_{n-1}^{n-2}`,
/// `c = (n^n t)^{1/(n-1)}`: independent `w_j = V_j^{1/n}`,
/// `V_j ~ Gamma(j/n, c)`.
pub fn sample_g_vector(n: u32, t: f64, rng: &mut RngStream) -> Result<GVector> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("g-vector needs n >= 2, got {n}")));
    }
    positive("t", t)?;
    let nf = n as f64;
    let c = (nf.powi(n as i32) * t).powf(1.0 / (nf - 1.0));
    let mut components = Vec::with_capacity(n as usize - 1);
    for j in 1..n {
        let v = rng.gamma(j as f64 / nf, c)?;
        components.push(v.powf(1.0 / nf));
    }
    Ok(GVector { components })
}

/// Outer process of a composition at the random time `G_1 G_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposedKind {
    BrownianOuter,
    AiryOuter,
}

impl FromStr for ComposedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brownian-outer" | "brownian" => Ok(Self::BrownianOuter),
            "airy-outer" | "airy" => Ok(Self::AiryOuter),
            _ => Err(Error::InvalidParams(format!("unknown composition '{s}'; expected brownian-outer or airy-outer"))),
        }
    }
}

impl fmt::Display for ComposedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BrownianOuter => "brownian-outer",
            Self::AiryOuter => "airy-outer",
        })
    }
}

/// Diffusivity shared by the outer process and the target law of
/// `sample_composed`: `λ² = 1/2`, so `B(τ)` has variance `τ`.
pub const COMPOSED_LAMBDA: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `B(G_1 G_2)` (law `u_{1/3}`) or `A(G_1 G_2)` (law `u_{2/9}`), both at
/// `λ = 1/√2`, with `(G_1, G_2)` the `n = 3` multiplication pair.
pub fn sample_composed(kind: ComposedKind, n: u32, t: f64, rng: &mut RngStream) -> Result<f64> {
    if n != 3 {
        return Err(Error::InvalidParams(format!("compositions are defined for n = 3, got {n}")));
    }
    let tau = sample_g_vector(3, t, rng)?.product();
    match kind {
        ComposedKind::BrownianOuter => Ok(tau.sqrt() * rng.normal()),
        ComposedKind::AiryOuter => sample_airy_marginal(COMPOSED_LAMBDA, tau, rng),
    }
}

/// Upper end of the reduced Airy table; `3∫_12^∞ Ai < 1e-10`.
pub const AIRY_TABLE_MAX: f64 = 12.0;
pub const AIRY_TABLE_POINTS: usize = 4096;

/// CDF of `|X| / (λ∛(3t))` for `X ~ u_{2/3}(·, t)`: density `3 Ai(ξ)`, `ξ ≥ 0`.
pub fn airy_table() -> &'static TabulatedCdf {
    static TABLE: OnceLock<TabulatedCdf> = OnceLock::new();
    TABLE.get_or_init(|| {
        TabulatedCdf::from_density(
            |xi| Ok(3.0 * airy_ai_with_derivative(xi).0),
            AIRY_TABLE_MAX,
            AIRY_TABLE_POINTS,
            false,
        )
        .expect("Airy table builds")
    })
}

/// Draw from `u_{2/3}(·, t) = (3/(2c)) Ai(|x|/c)`, `c = λ∛(3t)`, by inverting
/// the reduced table and attaching a random sign.
pub fn sample_airy_marginal(lambda: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    positive("lambda", lambda)?;
    positive("t", t)?;
    let table = airy_table();
    let xi = table.inverse_half(rng.uniform());
    Ok(rng.sign() * xi * lambda * (3.0 * t).cbrt())
}

/// `k` iterated Brownian motions `B_i(|B(t)|)` sharing the inner time: each
/// component is `√W N_i` with `W = |N(0, 8λ⁴t)|`, marginally `u_{1/2}`.
pub fn sample_multivariate_common_time(k: usize, lambda: f64, t: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParams("need at least one component".into()));
    }
    positive("lambda", lambda)?;
    positive("t", t)?;
    let w = (8.0 * lambda.powi(4) * t).sqrt() * rng.normal().abs();
    Ok((0..k).map(|_| w.sqrt() * rng.normal()).collect())
}
