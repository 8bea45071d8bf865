//! End-to-end runs of the `bcsgl` binary.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn bcsgl(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcsgl"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gap_coeffs_glmin_on_reference_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    for cmd in ["gap", "coeffs", "glmin"] {
        let out = bcsgl(dir.path(), &[cmd]);
        assert!(
            out.status.success(),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert!(
        start.elapsed() < Duration::from_secs(120),
        "{:?}",
        start.elapsed()
    );

    let gap = read_json(&dir.path().join("gap.json"));
    let tc = gap["summary"]["Tc"].as_f64().unwrap();
    assert!((tc - 0.112630618627167).abs() < 1e-9);
    assert_eq!(gap["config"]["potential"], "gaussian(2,1)");

    let coeffs = read_json(&dir.path().join("coeffs.json"));
    let dc = coeffs["Dc"].as_f64().unwrap();
    assert_eq!(
        dc,
        2.0 * coeffs["Lambda0"].as_f64().unwrap() / coeffs["Lambda2"].as_f64().unwrap()
    );

    let glmin = read_json(&dir.path().join("glmin.json"));
    assert_eq!(glmin["coefficients"]["Dc"].as_f64().unwrap(), dc);
    let curve = std::fs::read_to_string(dir.path().join("egl_curve.csv")).unwrap();
    let energies: Vec<(f64, f64)> = curve
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (c[1], c[2])
        })
        .collect();
    assert_eq!(energies.len(), 11);
    for (r, e) in &energies {
        if *r < 1.0 {
            assert_eq!(*e, 0.0);
        } else if *r > 1.05 {
            assert!(*e < -1e-6, "D/Dc = {r}: {e}");
        }
    }
    assert!(energies.windows(2).all(|w| w[1].1 <= w[0].1));

    let psi = std::fs::read_to_string(dir.path().join("psi.dat")).unwrap();
    let rows = psi.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 64 * 64);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        bcsgl(dir.path(), &["gap", "--mu", "nan"]).status.code(),
        Some(1)
    );
    assert_eq!(
        bcsgl(dir.path(), &["glmin", "--d-range", "1,0.5,3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bcsgl(dir.path(), &["gap", "--bracket", "0.5,0.9"])
            .status
            .code(),
        Some(2)
    );
    assert!(dir.path().join("error.json").exists());
    let out = bcsgl(
        dir.path(),
        &["verify", "--json", "--config", "/nonexistent.ini"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_summary_and_alpha_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = bcsgl(
        dir.path(),
        &[
            "gap",
            "--json",
            "--potential",
            "yukawa-cut(3,1,0.5)",
            "--mu",
            "0.5",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["Tc"].as_f64().unwrap() > 0.0);
    assert!(summary["kappa"].as_f64().unwrap() > 0.0);
    let alpha = std::fs::read_to_string(dir.path().join("alpha_star.dat")).unwrap();
    assert!(alpha.contains("# potential = yukawa-cut(3,1,0.5)"));
    assert_eq!(
        alpha.lines().filter(|l| !l.starts_with('#')).count(),
        summary["p_nodes"].as_u64().unwrap() as usize
    );
}
