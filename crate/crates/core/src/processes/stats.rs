use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, ErrorTrap, QuadratureConfig};

/// Moments and one-sample Kolmogorov–Smirnov statistic of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub n_samples: usize,
    pub mean: f64,
    pub second_moment: f64,
    /// Standard error of the mean, `sd/√n`.
    pub std_error: f64,
    /// Standard error of the second-moment estimate.
    pub second_moment_std_error: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub ks_critical_1pct: f64,
    pub ks_critical_5pct: f64,
    pub seed: u64,
}

impl McSummary {
    pub fn ks_pass_1pct(&self) -> bool {
        self.ks_statistic < self.ks_critical_1pct
    }

    pub fn ks_pass_5pct(&self) -> bool {
        self.ks_statistic < self.ks_critical_5pct
    }

    /// `|mean - want|` in units of the standard error.
    pub fn mean_z(&self, want: f64) -> f64 {
        (self.mean - want).abs() / self.std_error
    }

    pub fn second_moment_z(&self, want: f64) -> f64 {
        (self.second_moment - want).abs() / self.second_moment_std_error
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Asymptotic Kolmogorov critical values `c_α/√n`.
pub fn ks_critical(n: usize, level: f64) -> f64 {
    // c = sqrt(-ln(α/2)/2), the leading term of the Kolmogorov tail.
    let c = if level == 0.01 {
        1.6276
    } else if level == 0.05 {
        1.3581
    } else {
        (-(0.5 * level).ln() / 2.0).sqrt()
    };
    c / (n as f64).sqrt()
}

/// `Pr(K > λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// `sup_x |F_n(x) - F(x)|` for the empirical CDF of `samples`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Moment and KS summary of `samples` against `cdf`.
pub fn mc_compare<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<McSummary> {
    let n = samples.len();
    if n < 100 {
        return Err(Error::InvalidParams(format!("need at least 100 samples, got {n}")));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput("non-finite sample".into()));
    }
    if samples.iter().all(|&x| x == samples[0]) {
        return Err(Error::DegenerateInput("all samples are identical".into()));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let m2 = samples.iter().map(|x| x * x).sum::<f64>() / nf;
    let var2 = samples.iter().map(|x| (x * x - m2) * (x * x - m2)).sum::<f64>() / (nf - 1.0);
    let d = ks_statistic(samples, cdf);
    let sn = nf.sqrt();
    Ok(McSummary {
        n_samples: n,
        mean,
        second_moment: m2,
        std_error: (var / nf).sqrt(),
        second_moment_std_error: (var2 / nf).sqrt(),
        ks_statistic: d,
        ks_p_value: kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d),
        ks_critical_1pct: ks_critical(n, 0.01),
        ks_critical_5pct: ks_critical(n, 0.05),
        seed: 0,
    })
}

/// Sample correlation coefficient.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// CDF tabulated from a density on `[0, xmax]` and interpolated by monotone
/// cubic Hermite splines. With `symmetric` the density is even and the table
/// holds `∫_0^x f`, giving `F(x) = 1/2 ± H(|x|)`; otherwise the law lives on
/// `[0, ∞)` and `F = H`.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    hs: Vec<f64>,
    slopes: Vec<f64>,
    symmetric: bool,
}

impl TabulatedCdf {
    pub fn from_density<F: Fn(f64) -> Result<f64>>(
        density: F,
        xmax: f64,
        points: usize,
        symmetric: bool,
    ) -> Result<Self> {
        if points < 2 || !(xmax > 0.0) {
            return Err(Error::InvalidParams(format!("bad table layout: xmax={xmax}, points={points}")));
        }
        let xs: Vec<f64> = (0..points).map(|i| xmax * i as f64 / (points - 1) as f64).collect();
        let mut fs = Vec::with_capacity(points);
        for &x in &xs {
            fs.push(density(x)?.max(0.0));
        }
        let cfg = QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 200 };
        let mut hs = vec![0.0; points];
        for i in 1..points {
            let trap = ErrorTrap::default();
            let r = integrate(|x| trap.value(density(x)).max(0.0), xs[i - 1], xs[i], &cfg);
            hs[i] = hs[i - 1] + trap.finish(r)?.value;
        }
        let slopes = limit_slopes(&xs, &hs, &fs);
        Ok(Self { xs, hs, slopes, symmetric })
    }

    /// Mass captured by the table (`H(xmax)`, or `1/2 + H(xmax)` when symmetric).
    pub fn total(&self) -> f64 {
        self.offset() + *self.hs.last().unwrap()
    }

    fn offset(&self) -> f64 {
        if self.symmetric {
            0.5
        } else {
            0.0
        }
    }

    /// `∫_0^x f` for `x ≥ 0`.
    fn half(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x >= self.xs[last] {
            return self.hs[last];
        }
        let h = self.xs[1] - self.xs[0];
        let i = ((x / h) as usize).min(last - 1);
        let s = (x - self.xs[i]) / h;
        hermite(self.hs[i], self.hs[i + 1], self.slopes[i] * h, self.slopes[i + 1] * h, s)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.symmetric {
            let h = self.half(x.abs());
            if x < 0.0 {
                0.5 - h
            } else {
                0.5 + h
            }
        } else if x <= 0.0 {
            0.0
        } else {
            self.half(x)
        }
    }

    /// Inverse of the half-line part: the `x ≥ 0` with `∫_0^x f = h`.
    pub fn inverse_half(&self, h: f64) -> f64 {
        let last = self.xs.len() - 1;
        if h <= 0.0 {
            return 0.0;
        }
        if h >= self.hs[last] {
            return self.xs[last];
        }
        let i = self.hs.partition_point(|&v| v <= h).clamp(1, last) - 1;
        let dx = self.xs[i + 1] - self.xs[i];
        let (a, b) = (self.hs[i], self.hs[i + 1]);
        let (da, db) = (self.slopes[i] * dx, self.slopes[i + 1] * dx);
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hermite(a, b, da, db, mid) < h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.xs[i] + 0.5 * (lo + hi) * dx
    }

    /// Inverse CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        if self.symmetric {
            if p < 0.5 {
                -self.inverse_half(0.5 - p)
            } else {
                self.inverse_half(p - 0.5)
            }
        } else {
            self.inverse_half(p)
        }
    }
}

fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1
}

/// Fritsch–Carlson limiting of the exact slopes so each cell is monotone.
fn limit_slopes(xs: &[f64], hs: &[f64], fs: &[f64]) -> Vec<f64> {
    let mut m = fs.to_vec();
    for i in 0..xs.len() - 1 {
        let delta = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i]);
        if delta <= 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / delta;
        let b = m[i + 1] / delta;
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[i] = tau * a * delta;
            m[i + 1] = tau * b * delta;
        }
    }
    m
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Complementary error function: Maclaurin series of erf below 2, the
/// Laplace continued fraction (evaluated backward) above.
fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        for k in 1..200 {
            term *= -x2 / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return 1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum;
    }
    let mut t = x;
    for k in (1..=120).rev() {
        t = x + 0.5 * k as f64 / t;
    }
    (-x * x).exp() / (t * std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        assert!((normal_cdf(-2.5) - 0.006_209_665_325_776_132).abs() < 1e-15);
        assert!((normal_cdf(4.0) - 0.999_968_328_758_166_9).abs() < 1e-15);
    }

    #[test]
    fn ks_of_perfect_grid() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&xs, |x| x);
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_tail() {
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn degenerate_samples() {
        let xs = vec![1.0; 200];
        assert!(matches!(mc_compare(&xs, |x| x), Err(Error::DegenerateInput(_))));
        assert!(matches!(mc_compare(&xs[..10], |x| x), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn table_reproduces_normal_cdf() {
        let phi = |x: f64| Ok((-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt());
        let t = TabulatedCdf::from_density(phi, 9.0, 1025, true).unwrap();
        for &x in &[-3.0, -0.7, 0.0, 0.3, 1.9, 5.0] {
            assert!((t.cdf(x) - normal_cdf(x)).abs() < 1e-10, "x={x}");
        }
        for &p in &[0.01, 0.3, 0.5, 0.77, 0.999] {
            assert!((t.cdf(t.quantile(p)) - p).abs() < 1e-12, "p={p}");
        }
    }
}
