use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    dir: TempDir,
}

impl Run {
    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn report(&self, command: &str) -> Value {
        let text = std::fs::read_to_string(self.out().join(format!("{command}_report.json"))).unwrap();
        serde_json::from_str(&text).unwrap()
    }

    fn csv(&self, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
        let mut r = csv::Reader::from_path(self.out().join(name)).unwrap();
        let header = r.headers().unwrap().iter().map(str::to_owned).collect();
        let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect();
        (header, rows)
    }
}

fn ffhk(args: &[&str], config: Option<&str>) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ffhk"));
    cmd.args(args).arg("--out").arg(dir.path().join("out"));
    if let Some(text) = config {
        let path = dir.path().join("config.json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        dir,
    }
}

fn checks(report: &Value) -> &Vec<Value> {
    report["checks"].as_array().unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    checks(report).iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn failed(report: &Value) -> Vec<String> {
    checks(report).iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap().to_owned()).collect()
}

/// At finite offset the jump residual is biased linearly in the offset, and the bias exceeds
/// the tolerance on small |c|; every other check passes on defaults.
fn assert_only_jump_checks_fail(report: &Value) {
    let names = failed(report);
    assert!(names.contains(&"gmn.cps_jump".to_owned()));
    assert!(names.iter().all(|n| n == "gmn.cps_jump" || n == "gmn.factor_jump"), "{names:?}");
}

fn strip_times(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time_s");
            map.values_mut().for_each(strip_times);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_times),
        _ => {}
    }
}

#[test]
fn default_check_model_passes() {
    let run = ffhk(&["check-model"], None);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let rep = run.report("check-model");
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["command"], "check-model");
    assert!(rep["tool_version"].is_string());
    assert_eq!(rep["config"]["R"], 1.0);
    for c in checks(&rep) {
        for key in ["name", "grid_size", "value", "tolerance", "passed", "wall_time_s"] {
            assert!(c.get(key).is_some(), "{key} missing");
        }
    }
    assert!(run.stdout.contains("[PASS] model.symplectic_identity"));
}

#[test]
fn crafted_invariant_fails_only_positivity() {
    let run = ffhk(&["check-model"], Some(r#"{"S_coefficients": [[-3.0, 0.0]]}"#));
    assert_eq!(run.code, 1);
    let rep = run.report("check-model");
    assert_eq!(failed(&rep), ["model.lattice_positivity"]);
    assert!(check(&rep, "model.lattice_positivity")["value"].as_f64().unwrap() < 0.0);
    assert!(check(&rep, "model.symplectic_identity")["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn empty_coefficients_mean_zero_invariant() {
    let values = |cfg: Option<&str>| {
        let run = ffhk(&["check-model"], cfg);
        let rep = run.report("check-model");
        checks(&rep).iter().map(|c| c["value"].clone()).collect::<Vec<_>>()
    };
    let base = values(None);
    assert_eq!(values(Some(r#"{"S_coefficients": []}"#)), base);
    assert_eq!(values(Some(r#"{"S_coefficients": [[0.0, 0.0], [0.0, 0.0]]}"#)), base);
}

#[test]
fn config_errors_exit_with_two() {
    let cases = [
        (r#"{"R": 1.0, "Rr": 2.0}"#, "Rr"),
        (r#"{"grid": {"n_c": 4, "fibre_samples": 2}}"#, "fibre_samples"),
        (r#"{"R": -1.0}"#, "R"),
        (r#"{"epsilon": 1.5}"#, "epsilon"),
        (r#"{"grid": {"c_modulus_range": [0.0, 0.3]}}"#, "c_modulus_range"),
        (r#"{"grid": {"c_modulus_range": [0.1, 0.6]}}"#, "c_modulus_range"),
        (r#"{"quadrature": {"target_tol": 0.0}}"#, "target_tol"),
        ("{\n  \"R\": 1.0,\n  \"epsilon\": \n}", "line 4"),
    ];
    for (cfg, needle) in cases {
        let run = ffhk(&["ov"], Some(cfg));
        assert_eq!(run.code, 2, "{cfg}");
        assert!(run.stderr.contains(needle), "{cfg}: {}", run.stderr);
        assert!(!run.out().join("ov_report.json").exists());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_ffhk"))
        .args(["semiflat", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ffhk")).args(["gmn", "--tol-scale", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semiflat_export() {
    let run = ffhk(&["semiflat"], Some(r#"{"grid": {"n_c": 7, "fiber_samples": 2}}"#));
    assert_eq!(run.code, 0, "{}", run.stdout);
    let (header, rows) = run.csv("semiflat.csv");
    assert_eq!(rows.len(), 14);
    for col in ["c1", "c2", "t1", "t2", "minor_1", "minor_4", "eig_1", "eig_4", "positive", "lemma_residual"] {
        assert!(header.iter().any(|h| h == col), "{col}");
    }
    let k = header.iter().position(|h| h == "lemma_residual").unwrap();
    let worst = rows.iter().map(|r| r[k].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn boundary_case_matches_the_lattice_circle() {
    let run =
        ffhk(&["semiflat"], Some(r#"{"S_coefficients": [[-1.0, 0.0]], "grid": {"n_c": 40, "fiber_samples": 2}}"#));
    assert_eq!(run.code, 1);
    let rep = run.report("semiflat");
    assert_eq!(failed(&rep), ["semiflat.metric_positivity"]);
    let (header, rows) = run.csv("semiflat.csv");
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let cell = (0.45 - 0.05) / 39.0;
    let edge = (-1.0f64).exp();
    for r in &rows {
        let m = r[col("c1")].parse::<f64>().unwrap().hypot(r[col("c2")].parse::<f64>().unwrap());
        let positive = r[col("positive")] == "true";
        if (m - edge).abs() > cell {
            assert_eq!(positive, m < edge, "|c| = {m}");
        }
    }
}

#[test]
fn ov_report_and_export() {
    let run = ffhk(&["ov"], None);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let rep = run.report("ov");
    assert!(check(&rep, "ov.poisson_resummation")["value"].as_f64().unwrap() < 1e-8);
    let margin = check(&rep, "ov.axis_margin")["value"].as_f64().unwrap();
    assert!((margin - 2.0 * std::f64::consts::LN_2).abs() < 1e-6, "{margin}");

    let (header, rows) = run.csv("ov.csv");
    let expected = [
        "c1", "c2", "theta_e", "theta_m", "V", "V_sf", "V_inst", "g_11", "g_21", "g_22", "g_31", "g_32", "g_33",
        "g_41", "g_42", "g_43", "g_44",
    ];
    assert_eq!(&header[..17], &expected);
    assert_eq!(rows.len(), 12 * 3 + 2);
    let status = header.iter().position(|h| h == "status").unwrap();
    assert_eq!(rows.last().unwrap()[status], "singular");
    let text = std::fs::read_to_string(run.out().join("ov.csv")).unwrap();
    assert!(!text.to_lowercase().contains("nan"));
}

#[test]
fn ov_numerical_failure_exits_with_three() {
    let run = ffhk(&["ov"], Some(r#"{"truncation": {"max_terms": 3}}"#));
    assert_eq!(run.code, 3, "{}", run.stdout);
    let rep = run.report("ov");
    assert_eq!(rep["numerical_failure"], true);
    assert!(check(&rep, "ov.poisson_resummation")["error"].as_str().unwrap().contains("did not converge"));
}

#[test]
fn gmn_report_counts_nodes() {
    let run = ffhk(&["gmn"], Some(r#"{"grid": {"n_c": 4, "fiber_samples": 2}}"#));
    let rep = run.report("gmn");
    assert!(check(&rep, "gmn.bessel_identities")["value"].as_f64().unwrap() < 1e-8);
    let flagship = check(&rep, "gmn.flagship_metric");
    assert!(flagship["value"].as_f64().unwrap() < 1e-5);
    let nodes = flagship["quadrature_nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 8);
    assert!(nodes.iter().all(|n| n.as_u64().unwrap() > 0));

    let (header, rows) = run.csv("gmn.csv");
    let k = header.iter().position(|h| h == "quadrature_nodes").unwrap();
    let from_csv: Vec<u64> = rows.iter().map(|r| r[k].parse().unwrap()).collect();
    assert_eq!(from_csv, nodes.iter().map(|n| n.as_u64().unwrap()).collect::<Vec<_>>());

    // The finite-offset jump checks carry a bias linear in the offset; nothing else fails.
    assert_eq!(run.code, 1);
    assert_only_jump_checks_fail(&rep);
}

#[test]
fn tol_scale_loosens_every_residual_check() {
    let run = ffhk(&["gmn", "--tol-scale", "100"], Some(r#"{"grid": {"n_c": 3, "fiber_samples": 1}}"#));
    assert_eq!(run.code, 0, "{}", run.stdout);
    let rep = run.report("gmn");
    assert_eq!(rep["tol_scale"], 100.0);
    assert_eq!(check(&rep, "gmn.cps_jump")["tolerance"], 1e-3);
}

#[test]
fn runs_are_deterministic() {
    let cfg = r#"{"seed": 11, "grid": {"n_c": 5, "fiber_samples": 2}}"#;
    let a = ffhk(&["all"], Some(cfg));
    let b = ffhk(&["all"], Some(cfg));
    let (mut ra, mut rb) = (a.report("all"), b.report("all"));
    for r in [&mut ra, &mut rb] {
        strip_times(r);
        r["config"].as_object_mut().unwrap().remove("output_dir");
    }
    assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap());
    for f in ["semiflat.csv", "ov.csv", "gmn.csv"] {
        assert_eq!(a.csv(f), b.csv(f), "{f}");
    }
    let c = ffhk(&["all"], Some(r#"{"seed": 12, "grid": {"n_c": 5, "fiber_samples": 2}}"#));
    assert_ne!(a.csv("gmn.csv"), c.csv("gmn.csv"));
}

#[test]
fn points_flag_overrides_grid() {
    let run = ffhk(&["check-model", "--points", "5"], Some(r#"{"grid": {"n_c": 20, "fiber_samples": 2}}"#));
    let rep = run.report("check-model");
    assert_eq!(rep["config"]["grid"]["n_c"], 5);
    assert_eq!(check(&rep, "model.symplectic_identity")["grid_size"], 10);
    assert_eq!(check(&rep, "model.lattice_positivity")["grid_size"], 5);
}

#[test]
fn all_lists_each_check_once() {
    let run = ffhk(&["all"], Some(r#"{"grid": {"n_c": 4, "fiber_samples": 2}}"#));
    let rep = run.report("all");
    let names: Vec<&str> = checks(&rep).iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut unique = names.clone();
    unique.sort_unstable();
    unique.dedup();
    assert_eq!(unique.len(), names.len());
    for prefix in ["model.", "semiflat.", "ov.", "gmn."] {
        assert!(names.iter().any(|n| n.starts_with(prefix)), "{prefix}");
    }
    assert_eq!(rep["passed"], false);
    assert_eq!(run.code, 1);
    assert_only_jump_checks_fail(&rep);
    assert!(run.stdout.contains("FAIL: "));
}
