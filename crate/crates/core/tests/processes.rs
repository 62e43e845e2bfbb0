use std::f64::consts::PI;

use fracdiff::density::{u, FractionalParams, Order};
use fracdiff::identities::nested_lambda;
use fracdiff::processes::*;
use fracdiff::quad::{integrate, integrate_to_infinity};
use fracdiff::specfun::gamma;
use fracdiff::QuadratureConfig;

const N: usize = 100_000;

fn nested_params(n: u32, t: f64) -> FractionalParams {
    FractionalParams::new(Order::rational(1, 1 << n).unwrap(), nested_lambda(n), t).unwrap()
}

fn draws(seed: u64, f: impl Fn(&mut RngStream) -> f64 + Sync) -> Vec<f64> {
    parallel_samples(N, seed, |r| Ok(f(r))).unwrap()
}

#[test]
fn iterated_terminal_moments() {
    for n in 0..=3u32 {
        for t in [0.5, 1.0] {
            let xs = draws(100 + n as u64, |r| sample_iterated_terminal(n, t, r).unwrap());
            let s = mc_compare(&xs, |_| 0.5).unwrap();
            let want = even_moment(n, 1, t).unwrap();
            assert!(s.second_moment_z(want) < 4.0, "n={n} t={t}: {s:?} vs {want}");
        }
    }
    let xs = draws(1, |r| sample_iterated_terminal(1, 1.0, r).unwrap());
    let s = mc_compare(&xs, |_| 0.5).unwrap();
    assert!(s.second_moment_z((2.0 / PI).sqrt()) < 3.0);
}

#[test]
fn iterated_terminal_laws() {
    for n in 0..=2u32 {
        let cdf = density_cdf(&nested_params(n, 1.0)).unwrap();
        let xs = draws(200 + n as u64, |r| sample_iterated_terminal(n, 1.0, r).unwrap());
        let s = mc_compare(&xs, |x| cdf.cdf(x)).unwrap();
        assert!(s.ks_pass_1pct(), "n={n}: {s:?}");
    }
    let xs = draws(5, |r| sample_iterated_terminal(0, 1.0, r).unwrap());
    let s = mc_compare(&xs, normal_cdf).unwrap();
    assert!(s.ks_pass_1pct(), "{s:?}");
}

#[test]
fn mc_compare_has_power() {
    let xs = draws(6, |r| r.normal() + 0.2);
    let s = mc_compare(&xs, normal_cdf).unwrap();
    assert!(!s.ks_pass_1pct(), "{s:?}");
}

#[test]
fn fourth_moment_of_i2() {
    let xs = parallel_samples(1_000_000, 8, |r| sample_iterated_terminal(2, 1.0, r)).unwrap();
    let x4: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
    let s = mc_compare(&x4, |_| 0.5).unwrap();
    let want = even_moment(2, 2, 1.0).unwrap();
    assert!(s.mean_z(want) < 3.0, "{} vs {want} ({})", s.mean, s.std_error);
}

#[test]
fn g_vector_marginals_and_independence() {
    // n = 2: w has density e^{-w²/(4t)}/√(πt), CDF erf(w/(2√t)).
    let t = 1.5;
    let xs = draws(20, |r| sample_g_vector(2, t, r).unwrap().components[0]);
    let s = mc_compare(&xs, |w| 2.0 * normal_cdf(w / (2.0 * t).sqrt()) - 1.0).unwrap();
    assert!(s.ks_pass_1pct(), "{s:?}");

    let mut w1 = Vec::with_capacity(N);
    let mut w2 = Vec::with_capacity(N);
    let mut rng = RngStream::new(22, 0);
    for _ in 0..N {
        let g = sample_g_vector(3, 1.0, &mut rng).unwrap();
        w1.push(g.components[0]);
        w2.push(g.components[1]);
    }
    let rho = correlation(&w1, &w2);
    assert!(rho.abs() < 3.0 / (N as f64).sqrt(), "rho={rho}");

    // E[w_1 w_2] against 2D quadrature of the kernel.
    let c = (27.0f64).sqrt();
    let q = QuadratureConfig::default();
    let m = |j: i32| integrate_to_infinity(|w: f64| w.powi(j) * (-w * w * w / c).exp(), 0.0, &q).unwrap().value;
    let mass = 3.0 / (2.0 * PI) * m(0) * m(1);
    assert!((mass - 1.0).abs() < 1e-6);
    let want = 3.0 / (2.0 * PI) * m(1) * m(2);
    let prod: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a * b).collect();
    let s = mc_compare(&prod, |_| 0.5).unwrap();
    assert!(s.mean_z(want) < 3.0, "{} vs {want}", s.mean);
}

#[test]
fn brownian_composition() {
    let p = FractionalParams::new(Order::rational(1, 3).unwrap(), COMPOSED_LAMBDA, 1.0).unwrap();
    let cdf = density_cdf(&p).unwrap();
    let xs = draws(30, |r| sample_composed(ComposedKind::BrownianOuter, 3, 1.0, r).unwrap());
    let s = mc_compare(&xs, |x| cdf.cdf(x)).unwrap();
    assert!(s.ks_pass_1pct(), "{s:?}");

    let xs = draws(31, |r| sample_composed(ComposedKind::BrownianOuter, 3, 1e-4, r).unwrap());
    let s = mc_compare(&xs, |_| 0.5).unwrap();
    // E X² = t^{1/3}/Γ(4/3) → 0 with t.
    let want = 1e-4f64.cbrt() / gamma(4.0 / 3.0);
    assert!(s.second_moment_z(want) < 4.0 && s.second_moment < 0.06, "{s:?}");
}

#[test]
fn airy_composition_second_moment() {
    let p = FractionalParams::new(Order::rational(2, 9).unwrap(), COMPOSED_LAMBDA, 1.0).unwrap();
    let q = QuadratureConfig::default();
    let want = 2.0 * integrate_to_infinity(|x| x * x * u(&p, x, &q).unwrap().value, 0.0, &q).unwrap().value;
    // E X² = 2λ²t^ν/Γ(1+ν) from the Fourier transform.
    assert!((want - 1.0 / gamma(1.0 + 2.0 / 9.0)).abs() < 1e-6, "{want}");
    let xs = draws(32, |r| sample_composed(ComposedKind::AiryOuter, 3, 1.0, r).unwrap());
    let s = mc_compare(&xs, |_| 0.5).unwrap();
    assert!(s.second_moment_z(want) < 3.0, "{s:?} vs {want}");
}

#[test]
fn airy_marginal() {
    let (lam, t): (f64, f64) = (1.3, 0.7);
    let c = lam * (3.0 * t).cbrt();
    let xs = draws(40, |r| sample_airy_marginal(lam, t, r).unwrap());
    let s = mc_compare(&xs, |x| {
        let h = airy_table().cdf((x / c).abs());
        if x < 0.0 {
            0.5 - 0.5 * h
        } else {
            0.5 + 0.5 * h
        }
    })
    .unwrap();
    assert!(s.mean_z(0.0) < 3.0);
    assert!(s.ks_pass_1pct(), "{s:?}");
    let inside: Vec<f64> = xs.iter().map(|x| if x.abs() <= c { 1.0 } else { 0.0 }).collect();
    let p = mc_compare(&inside, |_| 0.5).unwrap();
    let q = QuadratureConfig::default();
    let want = 3.0 * integrate(|y| fracdiff::specfun::airy_ai(y).value, 0.0, 1.0, &q).unwrap().value;
    assert!(p.mean_z(want) < 3.0, "{} vs {want}", p.mean);
}

#[test]
fn common_time_vectors() {
    let lam = 0.8;
    let mut rng = RngStream::new(50, 0);
    let mut a = Vec::with_capacity(N);
    let mut b = Vec::with_capacity(N);
    for _ in 0..N {
        let v = sample_multivariate_common_time(2, lam, 1.0, &mut rng).unwrap();
        a.push(v[0]);
        b.push(v[1]);
    }
    let a2: Vec<f64> = a.iter().map(|x| x * x).collect();
    let b2: Vec<f64> = b.iter().map(|x| x * x).collect();
    assert!(correlation(&a2, &b2) > 5.0 / (N as f64).sqrt());
    let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    assert!(mc_compare(&ab, |_| 0.5).unwrap().mean_z(0.0) < 3.0);

    let p = FractionalParams::new(Order::rational(1, 2).unwrap(), lam, 1.0).unwrap();
    let cdf = density_cdf(&p).unwrap();
    let xs = draws(51, |r| sample_multivariate_common_time(1, lam, 1.0, r).unwrap()[0]);
    assert!(mc_compare(&xs, |x| cdf.cdf(x)).unwrap().ks_pass_1pct());
}

#[test]
fn max_law() {
    // High-precision values of 2∫φ_y(β)g(y)dy.
    for (beta, want) in [(0.5, 0.667_186_341_732_363_357), (1.0, 0.465_816_985_075_490_953)] {
        assert!((max_density_i1(beta, 1.0).unwrap() - want).abs() < 1e-11);
        assert!((max_density_i1_series(beta, 1.0).unwrap() - want).abs() < 1e-9);
    }
    let total = half_line_mass(|b| max_density_i1(b, 1.0), 1.0).unwrap();
    assert!((total - 1.0).abs() < 1e-6, "{total}");
    let at0 = max_density_i1(0.0, 1.0).unwrap();
    let near = max_density_i1(1e-6, 1.0).unwrap();
    assert!(at0 > 0.0 && at0.is_finite() && (at0 - near).abs() < 1e-4);
    // The literal two-branch sum tends to zero, not to the density.
    let lit = max_density_i1_two_branch(0.5, 1.0, 200).unwrap();
    assert!(lit.abs() < 1e-7, "{lit}");
}

#[test]
fn sojourn_law() {
    for (s, want) in
        [(0.2, 0.756_316_149_010_600_625), (1.0, 0.448_258_736_187_802_473), (3.0, 0.003_219_053_390_343_099_71)]
    {
        let a = sojourn_density_i1_series(s, 1.0).unwrap();
        let b = sojourn_density_i1_integral(s, 1.0).unwrap();
        assert!((a - want).abs() < 1e-10, "s={s}: {a}");
        assert!((a - b).abs() < 1e-9, "s={s}: {a} {b}");
    }
    let total = half_line_mass(|s| sojourn_density_i1(s, 1.0), 1.0).unwrap();
    assert!((total - 1.0).abs() < 1e-6, "{total}");
    // Past the mode near s = 0.6 the density decreases to zero.
    let mut prev = f64::INFINITY;
    for i in 7..60 {
        let v = sojourn_density_i1(0.1 * i as f64, 1.0).unwrap();
        assert!(v >= 0.0 && v <= prev);
        prev = v;
    }
}

#[test]
fn max_law_by_path_simulation() {
    let xs = sample_max_i1(10_000, 1.0, PATH_STEPS, 60).unwrap();
    let table = TabulatedCdf::from_density(|b| max_density_i1(b, 1.0), 12.0, 2048, false).unwrap();
    assert!((table.total() - 1.0).abs() < 1e-6);
    let s = mc_compare(&xs, |x| table.cdf(x)).unwrap();
    eprintln!("{s:?}");
    assert!(s.ks_pass_5pct(), "{s:?}");
}

#[test]
fn seeded_streams_are_deterministic() {
    let a = draws(77, |r| sample_composed(ComposedKind::AiryOuter, 3, 1.0, r).unwrap());
    let b = draws(77, |r| sample_composed(ComposedKind::AiryOuter, 3, 1.0, r).unwrap());
    assert_eq!(a, b);
}
