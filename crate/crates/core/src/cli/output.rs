//! Artifact writers. Floats are printed with Rust's shortest round-trip
//! formatting so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::Result;
use crate::gap::{GapProblem, GapSolution};
use crate::glcoeff::{GLCoefficients, TcShift};
use crate::glmin::{EglPoint, GLResult, MagneticCell};
use crate::model::io::{to_columns, write_atomic};

use super::RunConfig;

pub fn config_json(cfg: &RunConfig) -> Value {
    let range = |r: super::Range| json!({"lo": r.lo, "hi": r.hi, "steps": r.steps});
    json!({
        "potential": cfg.potential.to_string(),
        "mu": cfg.mu,
        "gap": cfg.gap,
        "bracket": cfg.bracket,
        "b_range": range(cfg.b_range),
        "d_range": range(cfg.d_range),
        "cell_n": cfg.cell_n,
        "cell_b": cfg.cell_b,
        "minimizer": cfg.minimizer,
        "groups": cfg.groups,
    })
}

pub fn write_json(path: &Path, doc: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn gap_json(cfg: &RunConfig, problem: &GapProblem, sol: &GapSolution) -> Value {
    json!({
        "config": config_json(cfg),
        "summary": sol.summary(problem),
    })
}

pub fn coeffs_json(cfg: &RunConfig, coeffs: &GLCoefficients) -> Value {
    let mut doc = serde_json::to_value(coeffs).expect("coefficients serialize");
    doc["config"] = config_json(cfg);
    doc
}

/// `α̂*(p)` on the momentum grid of the solve.
pub fn write_alpha(path: &Path, cfg: &RunConfig, sol: &GapSolution) -> Result<()> {
    let header = [
        ("quantity", "alpha_hat(p)".to_string()),
        ("potential", cfg.potential.to_string()),
        ("mu", cfg.mu.to_string()),
        ("Tc", sol.tc.to_string()),
    ];
    write_atomic(path, to_columns(&sol.alpha_hat, &header).as_bytes())
}

pub fn write_tcshift(path: &Path, rows: &[TcShift]) -> Result<()> {
    let mut out = String::from("B,Tc_B,valid\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.b, r.tc_b, r.valid).unwrap();
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_egl_curve(path: &Path, points: &[EglPoint]) -> Result<()> {
    let mut out = String::from("D,D_over_Dc,E_GL,grad_norm,iterations\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.d, p.d_over_dc, p.energy, p.grad_norm, p.iterations
        )
        .unwrap();
    }
    write_atomic(path, out.as_bytes())
}

/// `x y Re Im` per grid point, row-major in `y`.
pub fn write_psi(path: &Path, cell: &MagneticCell, result: &GLResult) -> Result<()> {
    let h = cell.h();
    let mut out = format!(
        "# D = {}\n# B = {}\n# N = {}\n# x y re im\n",
        result.d,
        cell.b(),
        cell.n()
    );
    for j in 0..cell.n() {
        for i in 0..cell.n() {
            let v = result.psi.values[cell.index(i, j)];
            writeln!(
                out,
                "{:.17e} {:.17e} {:.17e} {:.17e}",
                i as f64 * h,
                j as f64 * h,
                v.re,
                v.im
            )
            .unwrap();
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Two-column `key  value` table of a flat JSON object.
pub fn table(summary: &Value) -> String {
    let Some(map) = summary.as_object() else {
        return format!("{summary}\n");
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in map {
        if v.is_object() {
            continue;
        }
        let v = match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        writeln!(out, "{k:<width$}  {v}").unwrap();
    }
    out
}
