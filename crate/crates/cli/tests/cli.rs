use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn qgraf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgraf"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> i32 {
    let status = qgraf()
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
        .status;
    status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_examples() {
    let d = TempDir::new().unwrap();
    let cfg = write(&d, "c.json", r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0, "z": 0, "q": 0.5}]}"#);
    let out = d.path().join("r.json");
    assert_eq!(run("eval", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert_eq!(v["rows"][0]["value"]["re"], 1.0);
    assert_eq!(v["rows"][0]["value"]["im"], 0.0);
    assert_eq!(v["rows"][0]["inputs"]["q"]["re"], 0.5);
    assert_eq!(v["metadata"]["version"], env!("CARGO_PKG_VERSION"));

    let cfg = write(&d, "g.json", r#"{"name": "q_gamma", "grid": [{"z": 2, "q": 0.5}]}"#);
    assert_eq!(run("eval", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert!((v["rows"][0]["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(v["rows"][0]["value"]["im"], 0.0);
}

#[test]
fn eval_remaining_functions() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    let cfg = write(
        &d,
        "c.json",
        r#"{"name": "phi_rs", "grid": [{"upper": ["0.5", 0.25], "lower": [0.125], "q": 0.5, "z": 0.3}]}"#,
    );
    assert_eq!(run("eval", &cfg, &out, &[]), 0);
    let cfg = write(&d, "w.json", r#"{"name": "wall_polynomial", "grid": [{"p": 0, "x": "0.2+0.1i", "b": 0.3, "q": 0.5}]}"#);
    assert_eq!(run("eval", &cfg, &out, &[]), 0);
    assert_eq!(json(&out)["rows"][0]["value"]["re"], 1.0);
    let cfg = write(&d, "b.json", r#"{"name": "classical_bessel_j", "grid": [{"nu": 0, "z": 0}]}"#);
    assert_eq!(run("eval", &cfg, &out, &[]), 0);
    assert_eq!(json(&out)["rows"][0]["value"]["re"], 1.0);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    for (i, text) in [
        "{not json",
        r#"{"name": "hahn_exton_j"}"#,
        r#"{"name": "no_such_function", "grid": [{"q": 0.5}]}"#,
        r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0, "z": "1+", "q": 0.5}]}"#,
        r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0, "z": 0, "q": 1.5}]}"#,
        r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0, "q": 0.5}]}"#,
        r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0, "z": 0, "q": 0.5, "extra": 1}]}"#,
        r#"{"command": "scan", "name": "hahn_exton_j", "grid": [{"alpha": 0, "z": 0, "q": 0.5}]}"#,
        r#"{"name": "hahn_exton_j", "tolerance": {"rel_tol": -1}, "grid": [{"alpha": 0, "z": 0, "q": 0.5}]}"#,
    ]
    .iter()
    .enumerate()
    {
        let cfg = write(&d, &format!("bad{}.json", i), text);
        assert_eq!(run("eval", &cfg, &out, &[]), 2, "{}", text);
        assert!(!out.exists(), "{}", text);
    }
    let missing = d.path().join("missing.json");
    assert_eq!(run("eval", &missing, &out, &[]), 2);
    assert!(!out.exists());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qgraf().output().unwrap().status.code(), Some(2));
    assert_eq!(qgraf().args(["frobnicate"]).output().unwrap().status.code(), Some(2));
    assert_eq!(qgraf().args(["eval"]).output().unwrap().status.code(), Some(2));
    assert_eq!(qgraf().args(["--version"]).output().unwrap().status.code(), Some(0));
}

#[test]
fn orthogonality_grid_passes() {
    let d = TempDir::new().unwrap();
    let mut grid = Vec::new();
    for z in -3..=3 {
        for l in -3..=3 {
            grid.push(format!(r#"{{"x": 0, "z": {}, "l": {}, "q": 0.5}}"#, z, l));
        }
    }
    let text = format!(r#"{{"name": "orthogonality", "threshold": 1e-8, "grid": [{}]}}"#, grid.join(","));
    let cfg = write(&d, "o.json", &text);
    let out = d.path().join("r.json");
    assert_eq!(run("verify", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 49);
    assert_eq!(v["summary"]["passed"], 49);
    assert!(v["summary"]["max_abs_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn out_of_domain_point_is_skipped() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        &d,
        "g.json",
        r#"{"name": "graf_addition", "grid": [
            {"R": 0.5, "x": 0, "y": 0, "nu": 0, "z": 0, "q": 0.5},
            {"R": 3.0, "x": 0, "y": 0, "nu": 0, "z": 0, "q": 0.5},
            {"R": "0.4+0.2i", "x": "0.5+0.1i", "y": 0.2, "nu": 0.3, "z": 1, "q": 0.6}
        ]}"#,
    );
    let out = d.path().join("r.json");
    assert_eq!(run("verify", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert_eq!(v["rows"][1]["status"], "skipped: domain");
    assert_eq!(v["rows"][0]["status"], "pass");
    assert_eq!(v["rows"][2]["status"], "pass");
    assert_eq!(v["summary"]["skipped"], 1);
}

#[test]
fn unreachable_threshold_exits_1() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        &d,
        "p.json",
        r#"{"name": "product_formula", "grid": [{"R": "0.4+0.2i", "x": "0.5+0.1i", "y": 0.2, "nu": 0.3, "m": 1, "q": 0.6}]}"#,
    );
    let out = d.path().join("r.json");
    assert_eq!(run("verify", &cfg, &out, &[]), 0);
    assert_eq!(run("verify", &cfg, &out, &["--threshold", "1e-30"]), 1);
    let v = json(&out);
    assert_eq!(v["rows"][0]["status"], "fail");
    assert_eq!(v["metadata"]["threshold"], 1e-30);
}

const RANDOM: &str = r#"{"name": "graf_addition", "random": {"count": 6, "seed": 11, "margin": 0.8, "domain": {
    "q": {"uniform": [0.2, 0.9]},
    "x": {"re": [-0.9, 2.0], "im": [-1.0, 1.0]},
    "y": {"re": [-1.0, 1.0], "im": [-1.0, 1.0]},
    "nu": {"abs": [0.0, 2.0]},
    "R": {"abs": [0.05, 4.0]},
    "z": {"int": [-4, 4]}
}}}"#;

#[test]
fn reports_are_byte_identical() {
    let d = TempDir::new().unwrap();
    let cfg = write(&d, "r.json", RANDOM);
    for format in ["json", "csv"] {
        let a = d.path().join(format!("a.{}", format));
        let b = d.path().join(format!("b.{}", format));
        let ca = run("verify", &cfg, &a, &["--format", format]);
        let cb = run("verify", &cfg, &b, &["--format", format]);
        assert_eq!(ca, cb);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let a = d.path().join("a.json");
    let c = d.path().join("c.json");
    run("verify", &cfg, &c, &["--seed", "12"]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
    assert_eq!(json(&c)["metadata"]["seed"], 12);
}

#[test]
fn csv_layout() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        &d,
        "c.json",
        r#"{"name": "symmetry", "grid": [{"alpha": "0.5+0.25i", "nu": 1, "q": 0.5}, {"alpha": 2, "nu": 0, "q": 0.3}]}"#,
    );
    let out = d.path().join("r.csv");
    assert_eq!(run("verify", &cfg, &out, &["--format", "csv"]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tool: qgraf"));
    let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("index,status,alpha_re,alpha_im,nu_re,nu_im,q_re,q_im,lhs_re,lhs_im,rhs_re,rhs_im"));
    assert!(lines.iter().any(|l| l.starts_with("0,pass,0.5,0.25,1.0,0.0,0.5,0.0,")));
    let summary = lines.last().unwrap();
    assert!(summary.starts_with("summary,pass,"));
}

#[test]
fn scan_examples() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    let qs: Vec<String> = (3..=8).map(|j| format!("{}", 1.0 - 2f64.powi(-j))).collect();
    let text = format!(r#"{{"name": "bessel_limit", "grid": [{{"nu": 0, "z": 0.5, "q_values": [{}]}}]}}"#, qs.join(","));
    let cfg = write(&d, "b.json", &text);
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let errs: Vec<f64> = rows.iter().map(|r| r["error"].as_f64().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{:?}", errs);
    assert!(rows.iter().all(|r| r["decreasing"] == true));

    let cfg = write(
        &d,
        "r.json",
        r#"{"name": "ratio_limit", "grid": [{"x": 0.7, "alpha": 1, "c": 0.5, "n_values": [4, 8, 16]}]}"#,
    );
    assert_eq!(run("scan", &cfg, &out, &[]), 2);
    assert!(!out.exists() || std::fs::remove_file(&out).is_ok());

    let cfg = write(
        &d,
        "m.json",
        r#"{"name": "moment_limit", "grid": [{"r": 0, "k": 0, "alpha": 1, "c": 0.5, "n_values": [1, 2, 4, 8]}]}"#,
    );
    let out = d.path().join("m_out.json");
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    for r in json(&out)["rows"].as_array().unwrap() {
        assert!((r["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn scan_ratio_and_capping() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    let cfg = write(
        &d,
        "r.json",
        r#"{"name": "ratio_limit", "grid": [{"x": "0.3+0.4i", "alpha": 1, "c": 0.5, "n_values": [4, 8, 16, 32, 64]}]}"#,
    );
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    let cfg = write(
        &d,
        "c.json",
        r#"{"name": "ratio_limit", "grid": [{"x": "0.3+0.4i", "alpha": 1, "c": 0.5, "n_values": [4, 8, 16, 32, 64, 10000]}]}"#,
    );
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert!(v["metadata"]["warnings"][0].as_str().unwrap().contains("cap"));
    // a target below the reachable error is a numeric failure
    assert_eq!(run("scan", &cfg, &out, &["--threshold", "1e-6"]), 1);
}

#[test]
fn scan_geometric_and_graf_limit() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("r.json");
    let cfg = write(
        &d,
        "g.json",
        r#"{"name": "geometric_resum", "grid": [{"nu": 0.3, "alpha": 1, "gamma": 1.5, "c": 0.5, "k": 2}]}"#,
    );
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    let cfg = write(
        &d,
        "l.json",
        r#"{"name": "graf_limit", "grid": [{"nu": 0.3, "alpha": 2, "gamma": 0.5, "eta": 0.2, "R": 1, "c": 0.5, "n_values": [1, 2, 4, 8]}]}"#,
    );
    assert_eq!(run("scan", &cfg, &out, &[]), 0);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["rows"][3]["q_rel_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn max_terms_environment_override() {
    let d = TempDir::new().unwrap();
    let cfg = write(&d, "c.json", r#"{"name": "hahn_exton_j", "grid": [{"alpha": 0.5, "z": 0.7, "q": 0.9}]}"#);
    let out = d.path().join("r.json");
    let code = qgraf()
        .env("QGRAF_MAX_TERMS", "2")
        .args(["eval", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .code();
    assert_eq!(code, Some(1));
    assert_eq!(json(&out)["metadata"]["max_terms"], 2);
    let code = qgraf()
        .env("QGRAF_MAX_TERMS", "lots")
        .args(["eval", "--config"])
        .arg(&cfg)
        .status()
        .unwrap()
        .code();
    assert_eq!(code, Some(2));
}
