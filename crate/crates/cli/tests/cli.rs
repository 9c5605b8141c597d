//! End-to-end tests of the `jenfi` binary: exit codes, CSV/JSON contracts,
//! and the figure-sweep surface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn jenfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jenfi"))
        .args(args)
        .env_remove("JENFI_CONFIG")
        .output()
        .expect("failed to spawn jenfi")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn tmp_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jenfi_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// CSV rows as (measure, value, error, status); "inf" parses to infinity.
fn parse_measure_csv(text: &str) -> Vec<(String, f64, f64, String)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("measure,value,error_estimate,status"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 4, "bad row {l}");
            let num = |s: &str| {
                if s == "inf" {
                    f64::INFINITY
                } else {
                    s.parse::<f64>().unwrap()
                }
            };
            (f[0].to_string(), num(f[1]), num(f[2]), f[3].to_string())
        })
        .collect()
}

#[test]
fn self_divergence_is_zero_with_exit_zero() {
    let out = jenfi(&[
        "divergence",
        "sinusoidal:n=3",
        "sinusoidal:n=3",
        "--measures",
        "jsd,jfd",
    ]);
    assert!(out.status.success());
    let rows = parse_measure_csv(&stdout(&out));
    assert_eq!(rows.len(), 2);
    for (m, v, _, status) in rows {
        assert!(v.abs() < 1e-10, "{m} = {v}");
        assert_eq!(status, "finite");
    }
}

#[test]
fn fisher_divergence_g_reports_inf_sentinel() {
    let out = jenfi(&[
        "divergence",
        "sinusoidal:n=1",
        "sinusoidal:n=2",
        "--measures",
        "g",
    ]);
    assert!(out.status.success(), "divergent is a result, not a failure");
    let rows = parse_measure_csv(&stdout(&out));
    assert_eq!(rows[0].0, "g");
    assert!(rows[0].1.is_infinite());
    assert_eq!(rows[0].3, "divergent");
}

#[test]
fn rejected_beta_range_exits_2() {
    let out = jenfi(&[
        "divergence",
        "gamma:beta=0.5",
        "gaussian:mean=0,sigma=1",
        "--measures",
        "jfd",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("beta"), "stderr: {err}");
}

#[test]
fn invalid_specs_exit_2() {
    for spec in ["nonsense:n=1", "sinusoidal:n=0", "sinusoidal", "gamma:beta=x"] {
        let out = jenfi(&["info", spec]);
        assert_eq!(out.status.code(), Some(2), "spec {spec}");
    }
}

#[test]
fn info_reports_analytic_values() {
    // F[sinusoidal n=2] = 16 pi^2
    let out = jenfi(&["info", "sinusoidal:n=2", "--measures", "fisher"]);
    assert!(out.status.success());
    let rows = parse_measure_csv(&stdout(&out));
    let expected = 16.0 * std::f64::consts::PI * std::f64::consts::PI;
    assert!((rows[0].1 - expected).abs() / expected < 1e-6);

    // F[hermite n=5] = 22
    let out = jenfi(&["info", "hermite:n=5", "--measures", "fisher"]);
    let rows = parse_measure_csv(&stdout(&out));
    assert!((rows[0].1 - 22.0).abs() < 1e-6);
}

#[test]
fn grid_uniform_has_zero_fisher() {
    let dir = tmp_dir();
    let path = dir.join("uniform.csv");
    let mut body = String::new();
    for i in 0..=100 {
        body.push_str(&format!("{},1\n", i as f64 / 100.0));
    }
    std::fs::write(&path, body).unwrap();
    let out = jenfi(&[
        "info",
        &format!("grid:path={},renormalize=true", path.display()),
        "--measures",
        "fisher",
    ]);
    assert!(out.status.success());
    let rows = parse_measure_csv(&stdout(&out));
    assert!(rows[0].1.abs() < 1e-10, "F[uniform] = {}", rows[0].1);
}

#[test]
fn fig1_emits_fifty_records() {
    let out = jenfi(&["sweep", "fig1", "--abs-tol", "1e-8", "--rel-tol", "1e-7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,jsd,jfd,jsd_err,jfd_err"));
    assert_eq!(lines.count(), 50);
}

#[test]
fn fig3_overrides_bound_the_grid() {
    let out = jenfi(&[
        "sweep", "fig3", "--set", "beta_max=10", "--set", "steps=6",
        "--abs-tol", "1e-8", "--rel-tol", "1e-7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let betas: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(betas.len(), 6);
    assert!(betas.iter().all(|b| *b > 1.0 && *b <= 10.0 + 1e-12));
}

#[test]
fn sweeps_are_deterministic_across_runs() {
    let args = [
        "sweep", "fig2", "--set", "n_max=12", "--abs-tol", "1e-8", "--rel-tol", "1e-7",
    ];
    let first = stdout(&jenfi(&args));
    let second = stdout(&jenfi(&args));
    assert_eq!(first, second);
}

#[test]
fn fig7_carries_all_six_series_labels() {
    let out = jenfi(&[
        "sweep", "fig7", "--set", "n_max=2", "--set", "jfd_cap=1e9",
        "--abs-tol", "1e-8", "--rel-tol", "1e-7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("series,n,m,jsd,jfd,jsd_err,jfd_err"));
    // the series field is quoted because the labels contain commas
    let series: std::collections::BTreeSet<String> = lines
        .map(|l| {
            assert!(l.starts_with('"'), "series not quoted in {l}");
            l[1..].split('"').next().unwrap().to_string()
        })
        .collect();
    let expected: std::collections::BTreeSet<String> =
        ["(n,n+1)", "(n,n+10)", "(n,2n)", "(n,2n+10)", "(n,3n)", "(n,4n)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    assert_eq!(series, expected);
}

#[test]
fn json_round_trips_at_full_precision() {
    let out = jenfi(&[
        "divergence",
        "sinusoidal:n=1",
        "sinusoidal:n=2",
        "--measures",
        "jsd,g",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["metadata"]["density1"], "sinusoidal:n=1");
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["measure"], "jsd");
    let v = records[0]["value"].as_f64().unwrap();
    assert!((v - 0.13523202762821213).abs() < 1e-7);
    // divergent values serialize as null + status, JSON has no infinity
    assert!(records[1]["value"].is_null());
    assert_eq!(records[1]["status"], "divergent");
}

#[test]
fn debruijn_identical_specs_reports_zero_gap() {
    let out = jenfi(&["debruijn", "gaussian:mean=0,sigma=1", "gaussian:mean=0,sigma=1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lhs_slope,rhs,relative_gap"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[0].abs() < 1e-8 && row[1].abs() < 1e-10);
    assert_eq!(row[2], 0.0);
}

#[test]
fn debruijn_gaussian_pair_meets_gate() {
    let out = jenfi(&[
        "debruijn",
        "gaussian:mean=0,sigma=1",
        "gaussian:mean=1,sigma=1",
        "--epsilons",
        "1e-2,5e-3,2.5e-3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[2] < 0.05, "relative gap {}", row[2]);
}

#[test]
fn debruijn_needs_three_epsilons() {
    let out = jenfi(&[
        "debruijn",
        "gaussian:mean=0,sigma=1",
        "gaussian:mean=1,sigma=1",
        "--epsilons",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tmp_dir();
    let path = dir.join("result.csv");
    let out = jenfi(&[
        "info",
        "gaussian:mean=0,sigma=1",
        "--measures",
        "entropy",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let rows = parse_measure_csv(&std::fs::read_to_string(&path).unwrap());
    assert!((rows[0].1 - 1.4189385332046727).abs() < 1e-8);
}

#[test]
fn config_file_is_honored_and_flags_win() {
    let dir = tmp_dir();
    let cfg = dir.join("quad.cfg");
    std::fs::write(&cfg, "abs_tol = 1e-6\nrel_tol = 1e-5\n").unwrap();
    let out = jenfi(&[
        "info",
        "sinusoidal:n=1",
        "--measures",
        "fisher",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "who_knows = 3\n").unwrap();
    let out = jenfi(&[
        "info",
        "sinusoidal:n=1",
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_flag_is_validated() {
    let out = jenfi(&["info", "sinusoidal:n=1", "--precision", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = jenfi(&["info", "sinusoidal:n=1", "--precision", "4"]);
    assert!(out.status.success());
}
