// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spinstar_cli::{simulate, with_parameter, ScenarioConfig, Table};

fn spinstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinstar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_table(path: &Path) -> Table {
    Table::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

#[test]
fn fig2_simulation_carries_both_systems() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinstar(&["simulate", "--preset", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = read_table(&dir.path().join("fig2.csv"));
    assert_eq!(table.rows.len(), 2001);
    assert!(table.comments.iter().any(|c| c.contains("Delta = 2e0")));

    let p = table.column("P").unwrap();
    let p_over_m = table.column("P_over_M").unwrap();
    let p2 = table.column("P_n").unwrap();
    let e = table.column("script_E_B").unwrap();
    let e2 = table.column("E_n").unwrap();
    for k in 0..p.len() {
        assert!((p[k] - (-4.0 + 5.0 * p2[k])).abs() <= 1e-9);
        assert!((e[k] - 45.0 * e2[k]).abs() <= 1e-9);
        assert!((p_over_m[k] - p[k] / 10.0).abs() <= 1e-15);
    }
    assert!(max_abs(&table.column("residual_P").unwrap()) <= 1e-9);
    assert!(max_abs(&table.column("residual_E").unwrap()) <= 1e-9);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = spinstar(&["simulate", "--preset", "fig2", "--samples", "301"]);
    let b = spinstar(&["simulate", "--preset", "fig2", "--samples", "301"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let parsed = Table::parse(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(parsed.emit().as_bytes(), &a.stdout[..]);

    let v1 = spinstar(&["verify", "--suite", "equivalence", "--seed", "3"]);
    let v2 = spinstar(&["verify", "--suite", "equivalence", "--seed", "3"]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn lh1_reduces_to_two_sites() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinstar(&["reduce", "--preset", "lh1", "--n", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lh1_reduce_n2.json")).unwrap()).unwrap();
    assert_eq!(report["m"], 32);
    assert_eq!(report["classification"], "exact");
    assert!(report["max_residual_p"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["residual_p"].as_array().unwrap().len(), 2001);

    // Delta is the dipole sum seen from one site, J / r^3 over the other 31
    let radius = 5.101148618689164_f64;
    let site = |k: usize| {
        let a = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
        (radius * a.cos(), radius * a.sin())
    };
    let (x0, y0) = site(0);
    let expected: f64 = (1..32)
        .map(|k| {
            let (x, y) = site(k);
            1.0 / ((x - x0).hypot(y - y0)).powi(3)
        })
        .sum();
    let delta = report["delta"].as_f64().unwrap();
    assert!((delta - expected).abs() <= 1e-12, "{delta} vs {expected}");
    let omega = report["omega"].as_f64().unwrap();
    assert!((omega - (4.0 * 32.0 + delta * delta).sqrt()).abs() <= 1e-12);
}

#[test]
fn lh1_simulation_reports_delta() {
    let out = spinstar(&["simulate", "--preset", "lh1", "--samples", "101"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = Table::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(table.comments.iter().any(|c| c.starts_with("M = 32, Delta = ")));
    let p = table.column("P").unwrap();
    // the centre hands its excitation to the ring and back
    assert!(p.iter().copied().fold(f64::INFINITY, f64::min) < 0.99);
    assert_eq!(table.rows.len(), 101);
}

#[test]
fn oracle_and_concurrence_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ring.toml");
    fs::write(
        &cfg,
        "[system]\nM = 4\ngamma = 0.8\n[system.topology]\nkind = \"dipole_ring\"\nJ = 0.5\nradius = 1.0\n\
         [initial]\nkind = \"uniform_bath\"\n[run]\nhorizon = 10.0\nsamples = 201\noutputs = [\"oracle\", \"concurrences\"]\n",
    )
    .unwrap();
    let out = spinstar(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = read_table(&dir.path().join("ring.csv"));
    assert!(max_abs(&table.column("oracle_residual").unwrap()) <= 1e-9);
    // E_B is the sum of the pairwise bath concurrences
    let e_b = table.column("E_B").unwrap();
    let pairs: Vec<Vec<f64>> = ["C_1_2", "C_1_3", "C_1_4", "C_2_3", "C_2_4", "C_3_4"]
        .iter()
        .map(|c| table.column(c).unwrap())
        .collect();
    for k in 0..e_b.len() {
        let sum: f64 = pairs.iter().map(|col| col[k]).sum();
        assert!((sum - e_b[k]).abs() <= 1e-12);
    }
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "[system]\nM = 3\ngamma = 1.0\n[system.topology]\nkind = \"uniform_pairwise\"\nJ = 1.0\n[run]\nhorizon = 0.0\n",
    )
    .unwrap();
    let out = spinstar(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("horizon"));

    let out = spinstar(&["reduce", "--preset", "fig2", "--n", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("minimum"));

    let out = spinstar(&["simulate", "--preset", "nope"]);
    assert_eq!(code(&out), 1);

    let out = spinstar(&["simulate"]);
    assert_eq!(code(&out), 1);

    let out = spinstar(&["sweep", "--preset", "fig2", "--param", "J", "--values", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--out"));
}

#[test]
fn asymmetric_couplings_surface_the_symmetry_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chain.toml");
    fs::write(
        &cfg,
        "[system]\nM = 3\ngamma = 1.0\n[system.topology]\nkind = \"explicit\"\n\
         matrix = [[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]\n",
    )
    .unwrap();
    let out = spinstar(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("symmetry"), "{err}");

    // a loose enough tolerance accepts it
    let out = spinstar(&["simulate", "--config", cfg.to_str().unwrap(), "--tolerance", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn verify_suites_and_exit_codes() {
    let out = spinstar(&["verify", "--suite", "bounds", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["suites"][0]["failures"], 0);

    let out = spinstar(&["verify", "--suite", "oracle", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["suites"][0]["max_residual"].as_f64().unwrap() <= 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let out = spinstar(&["verify", "--seed", "11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(summary["suites"].as_array().unwrap().len(), 4);

    let out = spinstar(&["verify", "--suite", "bounds", "--tolerance=-1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sweep_writes_one_table_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinstar(&[
        "sweep",
        "--preset",
        "fig2",
        "--samples",
        "101",
        "--param",
        "J",
        "--values",
        "0.5,1,-2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = read_table(&dir.path().join("sweep_J.csv"));
    assert_eq!(summary.column("value").unwrap(), vec![0.5, 1.0, -2.0]);
    // nearest-neighbour ring: Delta = 2J
    assert_eq!(summary.column("Delta").unwrap(), vec![1.0, 2.0, -4.0]);

    let mut base = ScenarioConfig::preset("fig2").unwrap();
    base.run.samples = 101;
    for (k, value) in [0.5, 1.0, -2.0].iter().enumerate() {
        let written = fs::read_to_string(dir.path().join(format!("sweep_J_{k:03}.csv"))).unwrap();
        let expected = simulate(&with_parameter(&base, "J", *value).unwrap()).unwrap();
        assert_eq!(written, expected.emit());
    }
}
