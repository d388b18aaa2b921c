use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oscgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscgauss")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn moments_table() {
    let o = oscgauss(&["moments", "--r", "3", "--kmax", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,M_k_re,M_k_im");
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[3], "2,0,0");
    assert!(rows[1].starts_with("0,1.546685884"));
    assert!(rows[1].ends_with(",0"));
    // r = 2: sqrt(pi) e^{i pi/4} = sqrt(pi/2) (1 + i)
    let o = oscgauss(&["moments", "--r", "2", "--kmax", "0"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let half_root_pi = (std::f64::consts::PI / 2.0).sqrt().to_string();
    let parts: Vec<&str> = row.split(',').collect();
    assert_eq!(&parts[1][..12], &half_root_pi[..12]);
    assert_eq!(&parts[2][..12], &half_root_pi[..12]);
}

#[test]
fn opq_nodes_are_mirror_symmetric() {
    let o = oscgauss(&["opq", "--n", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let nodes: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(1).take(2).map(|s| s.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    assert_eq!(nodes.len(), 10);
    for &(x, y) in &nodes {
        assert!(nodes.iter().any(|&(u, v)| (u + x).abs() < 1e-20 && (v - y).abs() < 1e-20));
    }
}

#[test]
fn curve_endpoints_and_measure_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    let p = path.to_str().unwrap();
    assert!(oscgauss(&["curve", "--out", p]).status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let pts = doc[0]["points"].as_array().unwrap();
    let at = |k: usize| -> (f64, f64) {
        let q = &pts[k];
        (q["re"].as_str().unwrap().parse().unwrap(), q["im"].as_str().unwrap().parse().unwrap())
    };
    let (x0, y0) = at(0);
    let (x1, y1) = at(pts.len() - 1);
    let r2 = std::f64::consts::SQRT_2;
    assert!((x0 + r2).abs() < 1e-9 && (y0 - 1.0).abs() < 1e-9);
    assert!((x1 - r2).abs() < 1e-9 && (y1 - 1.0).abs() < 1e-9);

    let o = oscgauss(&["measure", "--curve", p, "--samples", "5"]);
    assert!(o.status.success());
    let m: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mass: f64 = m["mass_contour"].as_str().unwrap().parse().unwrap();
    assert!((mass - 1.0).abs() < 1e-8);
    assert_eq!(m["samples"].as_array().unwrap().len(), 5);
}

#[test]
fn quad_is_deterministic() {
    let args = ["quad", "--a=-1", "--b", "1", "--omega", "200", "--n", "6", "--amplitude", "exp"];
    let a = oscgauss(&args);
    let b = oscgauss(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["value_re"].as_str().unwrap().starts_with("2.5997940160600713"));
    assert_eq!(v["n_stationary"], 6);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "kmax = 2\nr = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = oscgauss(&["--config", c, "moments"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = oscgauss(&["--config", c, "moments", "--kmax", "5"]);
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn fields_grid() {
    let o = oscgauss(&["fields", "--which", "ReQ", "--grid=-1,1,3,-1,1,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
}

#[test]
fn asymp_report() {
    let o = oscgauss(&["asymp", "--n", "10", "--probes", "2,3;0,2.5"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let probes = v["probes"].as_array().unwrap();
    assert_eq!(probes.len(), 2);
    assert_eq!(probes[0]["region"], "outer");
}

#[test]
fn verify_curve_suite() {
    let o = oscgauss(&["verify", "--suite", "curve"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["criteria"][0]["pass"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(oscgauss(&["moments", "--precision", "10"]).status.code(), Some(2));
    assert_eq!(oscgauss(&["measure", "--curve", "/nonexistent/curve.json"]).status.code(), Some(4));
    assert_eq!(oscgauss(&["quad", "--amplitude", "sinc"]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/dir/out.csv");
    assert_eq!(oscgauss(&["moments", "--out", missing.to_str().unwrap()]).status.code(), Some(4));
}
