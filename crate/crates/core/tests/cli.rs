use std::process::{Command, Output};

fn fracdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdiff")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').filter_map(|c| c.parse().ok()).collect())
        .collect()
}

#[test]
fn density_csv_layout() {
    let o = fracdiff(&["density", "--nu", "2/3", "--grid=-3:3:13"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# fracdiff "));
    assert!(text.contains("\nx,value,abs_err,method\n"));
    assert!(text.lines().any(|l| l.starts_with("# mode=")));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 13);
    for (r, l) in rows.iter().zip(text.lines().filter(|l| l.ends_with("closed-form"))) {
        assert_eq!(r.len(), 3, "{l}");
        assert!(r[1] >= 0.0);
    }
    // Symmetric grid, symmetric values.
    assert_eq!(rows[0][1], rows[12][1]);
    // 17 significant digits.
    let first = text.lines().find(|l| !l.starts_with('#') && !l.starts_with('x')).unwrap();
    assert_eq!(first.split(',').next().unwrap(), "-3.0000000000000000e0");
}

#[test]
fn density_mode_for_orders_above_one() {
    let o = fracdiff(&["density", "--nu", "1.5", "--grid", "0:2:3"]);
    let text = stdout(&o);
    let mode: f64 = text.lines().find_map(|l| l.strip_prefix("# mode=")).unwrap().parse().unwrap();
    assert!(mode > 0.1 && mode < 2.0, "{mode}");
}

#[test]
fn exit_codes() {
    assert_eq!(fracdiff(&["density", "--nu", "2"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["density", "--nu", "abc"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["density"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["density", "--nu", "1/2", "--grid", "1:0:5"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["simulate", "--process", "airy", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["simulate", "--process", "airy", "--kind", "nope"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["verify", "--identity", "nope"]).status.code(), Some(2));
    assert_eq!(fracdiff(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_reports_failure_with_exit_one() {
    let ok = fracdiff(&["verify", "--identity", "gaussian-time", "--fast", "--format", "json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(!v["reports"].as_array().unwrap().is_empty());

    let bad = fracdiff(&["verify", "--identity", "gaussian-time", "--fast", "--nu", "0.3", "--tolerance", "1e-300"]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn simulate_json_summary_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("samples.csv");
    let o = fracdiff(&[
        "simulate",
        "--process",
        "multivariate",
        "--k",
        "3",
        "--samples",
        "5000",
        "--seed",
        "11",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["n_samples"], 5000);
    assert_eq!(v["summary"]["seed"], 11);
    assert!(v["second_moment_z"].as_f64().unwrap() < 5.0);
    let rows = std::fs::read_to_string(&dump).unwrap();
    let rows: Vec<&str> = rows.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5000);
    assert!(rows.iter().all(|r| r.split(',').count() == 3));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for threads in ["1", "4"] {
        // Same paths each time: they appear in the recorded command line.
        let path = dir.path().join("out.json");
        let dump = dir.path().join("dump.csv");
        let status = Command::new(env!("CARGO_BIN_EXE_fracdiff"))
            .env("FRACDIFF_THREADS", threads)
            .args(["simulate", "--process", "composed", "--kind", "airy-outer", "--samples", "10000"])
            .args(["--seed", "5", "--output", path.to_str().unwrap(), "--dump", dump.to_str().unwrap()])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outs.push((std::fs::read(&path).unwrap(), std::fs::read(&dump).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracdiff"))
        .env("FRACDIFF_THREADS", "zero")
        .args(["functionals", "--which", "moments"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn functional_tables_normalize() {
    for which in ["max", "sojourn"] {
        let o = fracdiff(&["functionals", "--which", which, "--grid", "0.01:8:50"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let total: f64 = text.lines().find_map(|l| l.strip_prefix("# normalization=")).unwrap().parse().unwrap();
        assert!((total - 1.0).abs() < 1e-6, "{which}: {total}");
        let rows = data_rows(&text);
        let last = rows.last().unwrap();
        assert!((last[2] - 1.0).abs() < 1e-5, "{which}: {last:?}");
        assert!(rows.windows(2).all(|w| w[1][2] >= w[0][2]));
    }
}

#[test]
fn moments_table() {
    let o = fracdiff(&["functionals", "--which", "moments", "--n", "1", "--k", "1..4", "--t", "2"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 4);
    // E B_1(|B_2(t)|)² = E|B_2(t)| = √(2t/π).
    let want = (4.0 / std::f64::consts::PI).sqrt();
    assert!((rows[0][3] - want).abs() < 1e-14 * want);
}
