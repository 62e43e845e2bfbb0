//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite ranges,
//! plus a panel-summation integrator with Wynn-epsilon acceleration for
//! slowly decaying oscillatory tails.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for every adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self { rel_tol, abs_tol, max_subdivisions };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_tol = |v: f64| v > 0.0 && v < 1.0;
        if !ok_tol(self.rel_tol) || !ok_tol(self.abs_tol) {
            return Err(Error::InvalidParams(format!(
                "quadrature tolerances must lie in (0,1): rel_tol={}, abs_tol={}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::InvalidParams(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Same budget with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).clamp(1e-15, 0.5),
            abs_tol: (self.abs_tol * factor).clamp(1e-300, 0.5),
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Captures the first error raised inside an integrand closure, which must
/// return a plain `f64`. The integrand returns NaN after a failure so the
/// quadrature stops, and `finish` reports the original error.
#[derive(Default)]
pub(crate) struct ErrorTrap(std::cell::RefCell<Option<Error>>);

impl ErrorTrap {
    pub(crate) fn value(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub(crate) fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

/// Value of a definite integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

impl Integral {
    fn zero() -> Self {
        Self { value: 0.0, abs_err: 0.0, evaluations: 0 }
    }

    fn accumulate(&mut self, other: Integral) {
        self.value += other.value;
        self.abs_err += other.abs_err;
        self.evaluations += other.evaluations;
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_976_734_584,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss 10-point weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Rule {
    value: f64,
    abs_err: f64,
    res_abs: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Rule {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let abs_err = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Rule { value, abs_err, res_abs }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    rule: Rule,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.rule.abs_err == other.rule.abs_err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.abs_err.partial_cmp(&other.rule.abs_err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive 21-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Non-finite integrand values are treated as zero contributions only if
/// the caller filters them; a NaN anywhere poisons the estimate and the
/// routine reports a quadrature failure.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    if a == b {
        return Ok(Integral::zero());
    }
    let first = gk21(&f, a, b);
    let mut evaluations = 21;
    if !first.value.is_finite() || !first.abs_err.is_finite() {
        return Err(Error::QuadratureFailure { value: first.value, abs_err: first.abs_err, subdivisions: 0 });
    }
    if first.abs_err <= cfg.target(first.value) {
        return Ok(Integral { value: first.value, abs_err: first.abs_err, evaluations });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    heap.push(Segment { a, b, rule: first });
    let mut total = first.value;
    let mut total_err = first.abs_err;
    let mut subdivisions = 0;

    while subdivisions < cfg.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if width <= 1e3 * f64::EPSILON * scale || mid == worst.a || mid == worst.b {
            frozen.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;

        total += left.value + right.value - worst.rule.value;
        total_err += left.abs_err + right.abs_err - worst.rule.abs_err;
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { value: total, abs_err: f64::INFINITY, subdivisions });
        }
        heap.push(Segment { a: worst.a, b: mid, rule: left });
        heap.push(Segment { a: mid, b: worst.b, rule: right });

        // Periodic exact resummation keeps the running totals honest.
        if subdivisions % 64 == 0 {
            let (v, e) = resum(&heap, &frozen);
            total = v;
            total_err = e;
        }
        if total_err <= cfg.target(total) {
            let (v, e) = resum(&heap, &frozen);
            if e <= cfg.target(v) {
                return Ok(Integral { value: v, abs_err: e, evaluations });
            }
            total = v;
            total_err = e;
        }
    }

    let (value, abs_err) = resum(&heap, &frozen);
    if abs_err <= cfg.target(value) {
        return Ok(Integral { value, abs_err, evaluations });
    }
    // Rounding floor: nothing left that could be refined further.
    let res_abs: f64 = heap.iter().chain(frozen.iter()).map(|s| s.rule.res_abs).sum();
    if abs_err <= 100.0 * f64::EPSILON * res_abs {
        return Ok(Integral { value, abs_err, evaluations });
    }
    Err(Error::QuadratureFailure { value, abs_err, subdivisions })
}

fn resum(heap: &BinaryHeap<Segment>, frozen: &[Segment]) -> (f64, f64) {
    let mut v = 0.0;
    let mut e = 0.0;
    for s in heap.iter().chain(frozen.iter()) {
        v += s.rule.value;
        e += s.rule.abs_err;
    }
    (v, e)
}

/// Integrate over consecutive panels `[p0,p1], [p1,p2], ...`; the overall
/// tolerance is shared across panels.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Integral> {
    let mut out = Integral::zero();
    if points.len() < 2 {
        return Ok(out);
    }
    let n = (points.len() - 1) as f64;
    let panel_cfg = QuadratureConfig { abs_tol: (cfg.abs_tol / n).max(1e-300), ..*cfg };
    for w in points.windows(2) {
        out.accumulate(integrate(&f, w[0], w[1], &panel_cfg)?);
    }
    Ok(out)
}

/// Integral over `[a, ∞)` by the map `x = a + (1-u)/u`, `u ∈ (0, 1]`.
/// Suited to integrands with monotone (at least algebraic) decay.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    let g = |u: f64| {
        let x = a + (1.0 - u) / u;
        let v = f(x) / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, cfg)
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the extrapolated limit and a crude error estimate taken from the
/// spread of the last few diagonal estimates.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n < 3 {
        let last = partial[n - 1];
        let err = if n == 2 { (partial[1] - partial[0]).abs() } else { f64::INFINITY };
        return (last, err);
    }
    let estimate = |seq: &[f64]| -> f64 {
        let m = seq.len();
        let mut prev = vec![0.0; m + 1];
        let mut cur: Vec<f64> = seq.to_vec();
        let mut best = seq[m - 1];
        let mut k = 0;
        while cur.len() > 1 {
            let mut next = Vec::with_capacity(cur.len() - 1);
            let mut broken = false;
            for i in 0..cur.len() - 1 {
                let d = cur[i + 1] - cur[i];
                if d == 0.0 || !d.is_finite() {
                    broken = true;
                    break;
                }
                next.push(prev[i + 1] + 1.0 / d);
            }
            if broken {
                break;
            }
            k += 1;
            prev = cur;
            cur = next;
            if k % 2 == 0 {
                if let Some(&v) = cur.last() {
                    if v.is_finite() {
                        best = v;
                    }
                }
            }
        }
        best
    };
    let e0 = estimate(partial);
    let e1 = estimate(&partial[..n - 1]);
    let e2 = estimate(&partial[..n - 2]);
    let err = (e0 - e1).abs() + (e0 - e2).abs();
    (e0, err)
}

/// Sum of panel integrals `∫_{b_j}^{b_{j+1}} f` for a breakpoint sequence
/// `b_0 < b_1 < ...`, accelerated with Wynn epsilon. Intended for
/// oscillatory integrands whose panels alternate in sign.
pub fn integrate_oscillatory<F, B>(f: F, breakpoint: B, cfg: &QuadratureConfig, max_panels: usize) -> Result<Integral>
where
    F: Fn(f64) -> f64,
    B: Fn(usize) -> f64,
{
    let panel_cfg = QuadratureConfig { abs_tol: (cfg.abs_tol * 1e-2).max(1e-300), ..*cfg };
    let mut partial = Vec::with_capacity(max_panels);
    let mut running = 0.0;
    let mut evaluations = 0;
    let mut quad_err = 0.0;
    let mut best = (0.0, f64::INFINITY);
    let mut stable_hits = 0;
    for j in 0..max_panels {
        let a = breakpoint(j);
        let b = breakpoint(j + 1);
        let piece = integrate(&f, a, b, &panel_cfg)?;
        evaluations += piece.evaluations;
        quad_err += piece.abs_err;
        running += piece.value;
        partial.push(running);
        if partial.len() >= 6 {
            let (est, err) = wynn_epsilon(&partial);
            if err < best.1 {
                best = (est, err);
            }
            if err <= cfg.target(est) {
                stable_hits += 1;
                if stable_hits >= 2 {
                    return Ok(Integral { value: est, abs_err: err + quad_err, evaluations });
                }
            } else {
                stable_hits = 0;
            }
        }
    }
    if best.1 <= 10.0 * cfg.target(best.0) {
        return Ok(Integral { value: best.0, abs_err: best.1 + quad_err, evaluations });
    }
    Err(Error::QuadratureFailure { value: best.0, abs_err: best.1, subdivisions: max_panels })
}
