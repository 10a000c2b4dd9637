//! End-to-end tests of the binary: output formats, the exit-code contract,
//! configuration plumbing, and artifact generation.

use std::process::{Command, Output};

fn staba2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_staba2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn braid_reduce_respects_braid_relation() {
    let a = staba2(&["braid", "reduce", "S T S"]);
    let b = staba2(&["braid", "reduce", "T S T"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("k="));
}

#[test]
fn braid_reduce_json_has_canonical_triple() {
    let out = staba2(&["--json", "braid", "reduce", "S T S^-1 [2]"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["k_matrix"].is_array());
    assert_eq!(v["shift_res"], 2);
}

#[test]
fn braid_reduce_rejects_garbage_with_usage_exit() {
    let out = staba2(&["braid", "reduce", "S Q T"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_ball_sph_quotient_is_a_pentagon() {
    let out = staba2(&["graph", "ball", "--radius", "3", "--quotient", "sph"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("graph"));
    let vertices = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("--"))
        .count();
    assert_eq!(vertices, 5);
    // As a simple graph the quotient is a 5-cycle: five distinct vertex pairs.
    let mut edges: Vec<(String, String)> = dot
        .lines()
        .filter(|l| l.contains("--"))
        .map(|l| {
            let t = l.trim();
            let mut it = t.split_whitespace();
            let a = it.next().unwrap().to_string();
            let b = it.nth(1).unwrap().to_string();
            (a, b)
        })
        .collect();
    edges.sort();
    edges.dedup();
    assert_eq!(edges.len(), 5);
}

#[test]
fn stab_chamber_reports_the_wall_configuration() {
    let out = staba2(&[
        "--json", "stab", "chamber", "--zs", "-0.25+1i", "--zt", "0.5",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // The standard heart ties with its right tilt at T on this charge.
    assert_eq!(v["heart"]["k_matrix"], serde_json::json!([[1, 0], [0, 1]]));
    let walls: Vec<String> = v["wall_flags"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_str().unwrap().to_string())
        .collect();
    assert!(walls.iter().any(|w| w.contains("Sigma")));
}

#[test]
fn stab_domain_locates_interior_points() {
    let out = staba2(&["stab", "domain", "--zs", "1i", "--zt", "1+1i"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Interior"));
}

#[test]
fn periods_eval_at_half_has_ratio_i() {
    let out = staba2(&["--json", "periods", "eval", "--u", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let r = v["lambda"]["ratio"].as_array().unwrap();
    assert!(r[0].as_f64().unwrap().abs() < 1e-8);
    assert!((r[1].as_f64().unwrap().abs() - 1.0).abs() < 1e-8);
}

#[test]
fn periods_monodromy_around_zero_is_a_transvection() {
    let out = staba2(&["--json", "periods", "monodromy", "--around", "zero"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trace"], 2);
    assert_eq!(v["det"], 1);
    assert_ne!(v["matrix"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn periods_monodromy_accepts_explicit_loops() {
    let named = staba2(&["--json", "periods", "monodromy", "--around", "zero"]);
    let explicit = staba2(&[
        "--json",
        "periods",
        "monodromy",
        "--loop",
        "[[0.5,0.5],[-0.5,0.5],[-0.5,-0.5],[0.5,-0.5]]",
    ]);
    assert!(explicit.status.success());
    assert_eq!(stdout(&named), stdout(&explicit));
}

#[test]
fn periods_pf_check_passes_at_default_tolerance_and_fails_when_tight() {
    let ok = staba2(&["periods", "pf-check", "--u", "0.5+0.9i"]);
    assert_eq!(ok.status.code(), Some(0));
    let tight = staba2(&["periods", "pf-check", "--u", "0.5+0.9i", "--tol", "1e-15"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn periods_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = staba2(&[
        "periods",
        "sweep",
        "--nx",
        "4",
        "--ny",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("periods_sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "u_re,u_im,j_re,j_im,p_alpha_re,p_alpha_im,p_beta_re,p_beta_im,ratio_re,ratio_im"
    );
    assert_eq!(lines.count(), 8);
}

#[test]
fn stab_sweep_writes_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = staba2(&[
        "stab",
        "sweep",
        "--nx",
        "6",
        "--ny",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("stab_sweep.csv")).unwrap();
    assert!(csv.starts_with("zs_re,zs_im,zt_re,zt_im,k00,"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn config_file_and_env_overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    std::fs::write(&cfg, "quadrature_nodes = 64\n# comment\n").unwrap();
    let ok = staba2(&[
        "--config",
        cfg.to_str().unwrap(),
        "periods",
        "eval",
        "--u",
        "0.5",
    ]);
    assert!(ok.status.success());
    // A value below the validated minimum is rejected as a usage error,
    // proving both the file and the environment path are read.
    let bad_file = dir.path().join("bad.txt");
    std::fs::write(&bad_file, "quadrature_nodes = 8\n").unwrap();
    let bad = staba2(&[
        "--config",
        bad_file.to_str().unwrap(),
        "periods",
        "eval",
        "--u",
        "0.5",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let env_bad = Command::new(env!("CARGO_BIN_EXE_staba2"))
        .args(["periods", "eval", "--u", "0.5"])
        .env("STABA2_QUADRATURE_NODES", "8")
        .output()
        .unwrap();
    assert_eq!(env_bad.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let out = staba2(&["--config", cfg.to_str().unwrap(), "braid", "reduce", "S"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_with_usage_code() {
    let out = staba2(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_domain_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = staba2(&["plot", "domain", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("domain.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn plot_period_grid_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = staba2(&["plot", "period-grid", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("period_grid.svg")).unwrap();
    assert!(svg.contains("<path"));
}

#[test]
fn verify_all_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = staba2(&["verify", "all", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches(": PASS").count(), 9);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
}

#[test]
fn outputs_are_deterministic() {
    let a = staba2(&["--json", "periods", "eval", "--u", "0.3+0.8i"]);
    let b = staba2(&["--json", "periods", "eval", "--u", "0.3+0.8i"]);
    assert_eq!(stdout(&a), stdout(&b));
}
