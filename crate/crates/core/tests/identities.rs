use std::time::Instant;

use fracdiff::identities::{
    check_airy_mckean, check_brownian_space, check_fourier, check_gaussian_time, check_laplace_fourier,
    check_multiplication, check_multiplication_mc, check_nested_gaussian, check_stable_time, check_triplication,
    default_points, mckean_normalization, nested_sup_distance, run_identity, SuiteOptions,
};
use fracdiff::{Order, QuadratureConfig};

fn o(s: &str) -> Order {
    s.parse().unwrap()
}

fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("{label}: {:.2?}", start.elapsed());
    out
}

#[test]
fn gaussian_time_examples() {
    let r = check_gaussian_time(o("1/3"), 1.0, 0.5, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-8, "{r}");
    let r = check_gaussian_time(o("0.9"), 1.0, 1.0, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-8, "{r}");
}

#[test]
fn gaussian_time_default_points() {
    for nu in ["1/3", "1/2", "9/10"] {
        timed(nu, || {
            for (x, t) in default_points() {
                let r = check_gaussian_time(o(nu), 1.0, x, t).unwrap();
                assert!(r.pass, "{r}");
            }
        });
    }
}

#[test]
fn brownian_space_examples() {
    let r = check_brownian_space(o("1/2"), 1.0, 0.7, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-7 && r.note.is_none(), "{r}");
    let r = check_brownian_space(o("0.4"), 1.0, 1.0, 2.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-7, "{r}");
    // λ ≠ 1 separates the 4wλ and 4wλ² readings of the kernel.
    let r = check_brownian_space(o("0.4"), 1.7, 0.5, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-7 && r.note.is_none(), "{r}");
}

#[test]
fn nested_examples() {
    let r = timed("nested n=1", || check_nested_gaussian(1, 0.0, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-8, "{r}");
    let r = timed("nested n=2", || check_nested_gaussian(2, 1.0, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
    let r = timed("nested n=3", || check_nested_gaussian(3, 0.5, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
    let r = timed("nested n=5", || check_nested_gaussian(5, 0.5, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
}

#[test]
fn nested_distance_decreases() {
    let d: Vec<f64> = (1..=6).map(|n| nested_sup_distance(n).unwrap()).collect();
    eprintln!("{d:?}");
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[4] < 0.05);
}

#[test]
fn triplication_examples() {
    let r = timed("trip 1/3", || check_triplication(o("1/3"), 1.0, 0.0, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-6, "{r}");
    let r = timed("trip 2/9", || check_triplication(o("2/9"), 1.0, 0.5, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
}

#[test]
fn multiplication_reproduces_lower_identities() {
    for (x, t) in [(0.0, 1.0), (0.5, 1.0), (2.0, 0.5)] {
        let a = check_multiplication(2, o("1/2"), 1.0, x, t).unwrap();
        let b = check_gaussian_time(o("1/2"), 1.0, x, t).unwrap();
        assert!((a.max_abs_discrepancy - b.max_abs_discrepancy).abs() < 1e-9, "{a}{b}");
        let a = check_multiplication(3, o("1/3"), 1.0, x, t).unwrap();
        let b = check_triplication(o("1/3"), 1.0, x, t).unwrap();
        assert!((a.points[0].rhs - b.points[0].rhs).abs() < 1e-6, "{a}{b}");
    }
}

#[test]
fn multiplication_four_by_monte_carlo() {
    let r = timed("mc m=4", || check_multiplication_mc(o("1/4"), 1.0, 0.0, 1.0, 1_000_000, 11).unwrap());
    eprintln!("{r}");
    assert!(r.pass, "{r}");
}

#[test]
fn stable_time_examples() {
    let r = timed("stable 0.75", || check_stable_time(0.75, 1.0, 1.0, 1.0).unwrap());
    assert!(r.max_abs_discrepancy < 1e-6, "{r}");
    let r = check_stable_time(0.6, 1.0, 0.0, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-6, "{r}");
    let r = check_stable_time(0.999, 1.0, 0.5, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
}

#[test]
fn airy_mckean_examples() {
    let q = QuadratureConfig::default();
    assert!((mckean_normalization(&q).unwrap() - 1.0).abs() < 1e-10);
    for (y, tol) in [(0.0, 1e-10), (1.0, 1e-6), (3.0, 1e-5), (6.0, 1e-5)] {
        let r = check_airy_mckean(y, &q).unwrap();
        assert!(r.max_abs_discrepancy < tol, "{r}");
    }
}

#[test]
fn transform_examples() {
    let r = check_fourier(o("0.7"), 1.0, 2.0, 0.5).unwrap();
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
    // Iterated-BM chain: E_{1/2^n}(-β² t^{1/2^n} / 2^{2-1/2^n}).
    let n = 2;
    let nu = 0.25f64;
    let lam = 2f64.powf(0.5 * (nu - 2.0));
    let r = check_fourier(Order::rational(1, 1 << n).unwrap(), lam, 1.0, 1.0).unwrap();
    assert!(r.max_abs_discrepancy < 1e-5, "{r}");
    let r = check_laplace_fourier(0.6, 1.0, 2.0, 1.5).unwrap();
    assert!(r.max_abs_discrepancy < 1e-6, "{r}");
}

#[test]
fn named_identity_runner() {
    let opts = SuiteOptions { fast: true, ..SuiteOptions::default() };
    let reps = run_identity("airy-mckean", &opts).unwrap();
    assert!(reps.iter().all(|r| r.pass));
    assert!(run_identity("no-such-identity", &opts).is_err());
}
