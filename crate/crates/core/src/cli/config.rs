//! Flat `key = value` configuration with `[section]` headers.
//!
//! ```text
//! [model]
//! potential = gaussian(2, 1)
//! mu = 1
//!
//! [glmin]
//! cell_n = 64
//! d_range = 0.5, 1.5, 11
//! ```
//!
//! Blank lines and lines starting with `#` or `;` are ignored. Command-line
//! flags override file values.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gap::GapConfig;
use crate::glmin::MinimizerConfig;
use crate::model::Potential;
use crate::verify::Group;

/// Inclusive linear range with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: Potential,
    pub mu: f64,
    pub gap: GapConfig,
    pub bracket: Option<(f64, f64)>,
    pub b_range: Range,
    /// In units of `D_c`.
    pub d_range: Range,
    pub cell_n: usize,
    pub cell_b: f64,
    pub minimizer: MinimizerConfig,
    pub groups: Vec<Group>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            potential: Potential::gaussian(2.0, 1.0).expect("valid gaussian"),
            mu: 1.0,
            gap: GapConfig::default(),
            bracket: None,
            b_range: Range {
                lo: 0.0,
                hi: 0.05,
                steps: 11,
            },
            d_range: Range {
                lo: 0.5,
                hi: 1.5,
                steps: 11,
            },
            cell_n: 64,
            cell_b: 1.0,
            minimizer: MinimizerConfig::default(),
            groups: Group::ALL.to_vec(),
            out: PathBuf::from("out"),
        }
    }
}

fn bad(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub fn parse_f64(name: &'static str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| bad(name, format!("not a number: `{}`", s.trim())))
}

pub fn parse_usize(name: &'static str, s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| bad(name, format!("not a nonnegative integer: `{}`", s.trim())))
}

fn parse_u64(name: &'static str, s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| bad(name, format!("not a nonnegative integer: `{}`", s.trim())))
}

/// `LO,HI`
pub fn parse_bracket(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(bad("bracket", format!("expected LO,HI, got `{s}`")));
    }
    Ok((
        parse_f64("bracket", parts[0])?,
        parse_f64("bracket", parts[1])?,
    ))
}

/// `LO,HI,STEPS`
pub fn parse_range(name: &'static str, s: &str) -> Result<Range> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(bad(name, format!("expected LO,HI,STEPS, got `{s}`")));
    }
    Ok(Range {
        lo: parse_f64(name, parts[0])?,
        hi: parse_f64(name, parts[1])?,
        steps: parse_usize(name, parts[2])?,
    })
}

pub fn parse_groups(s: &str) -> Result<Vec<Group>> {
    if s.trim() == "all" {
        return Ok(Group::ALL.to_vec());
    }
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|g| g.parse::<Group>().map_err(|e| bad("groups", e)))
        .collect()
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad("config", format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected key = value, got `{line}`",
                    lineno + 1
                ))
            })?;
            self.set(&section, key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        match (section, key) {
            ("model", "potential") => self.potential = value.parse()?,
            ("model", "mu") => self.mu = parse_f64("mu", value)?,
            ("gap", "order") => self.gap.order = parse_usize("order", value)?,
            ("gap", "r_panel_factor") => {
                self.gap.r_panel_factor = parse_f64("r_panel_factor", value)?
            }
            ("gap", "p_panel_factor") => {
                self.gap.p_panel_factor = parse_f64("p_panel_factor", value)?
            }
            ("gap", "p_cutoff_factor") => {
                self.gap.p_cutoff_factor = parse_f64("p_cutoff_factor", value)?
            }
            ("gap", "t_lo") => self.gap.t_lo = parse_f64("t_lo", value)?,
            ("gap", "t_hi") => self.gap.t_hi = Some(parse_f64("t_hi", value)?),
            ("gap", "kappa_tol") => self.gap.kappa_tol = parse_f64("kappa_tol", value)?,
            ("gap", "bracket") => self.bracket = Some(parse_bracket(value)?),
            ("tcshift", "b_range") => self.b_range = parse_range("b_range", value)?,
            ("glmin", "d_range") => self.d_range = parse_range("d_range", value)?,
            ("glmin", "cell_n") => self.cell_n = parse_usize("cell_n", value)?,
            ("glmin", "b") => self.cell_b = parse_f64("b", value)?,
            ("glmin", "max_iter") => self.minimizer.max_iter = parse_usize("max_iter", value)?,
            ("glmin", "grad_tol") => self.minimizer.grad_tol = parse_f64("grad_tol", value)?,
            ("glmin", "seed") => self.minimizer.seed = parse_u64("seed", value)?,
            ("verify", "groups") => self.groups = parse_groups(value)?,
            ("output", "dir") => self.out = PathBuf::from(value),
            _ => {
                return Err(bad(
                    "config",
                    format!("unknown key `{key}` in section [{section}]"),
                ))
            }
        }
        Ok(())
    }

    /// Rejects nonsensical values before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(bad(name, format!("must be positive, got {x}")))
            }
        };
        if !self.mu.is_finite() {
            return Err(bad("mu", "must be finite"));
        }
        if self.gap.order < 2 {
            return Err(bad("order", "need at least 2 nodes per panel"));
        }
        positive("r_panel_factor", self.gap.r_panel_factor)?;
        positive("p_panel_factor", self.gap.p_panel_factor)?;
        positive("p_cutoff_factor", self.gap.p_cutoff_factor)?;
        positive("t_lo", self.gap.t_lo)?;
        positive("kappa_tol", self.gap.kappa_tol)?;
        if let Some(t) = self.gap.t_hi {
            positive("t_hi", t)?;
        }
        if let Some((lo, hi)) = self.bracket {
            positive("bracket", lo)?;
            if !(hi > lo && hi.is_finite()) {
                return Err(bad("bracket", format!("need 0 < LO < HI, got {lo},{hi}")));
            }
        }
        for (name, r) in [("b-range", self.b_range), ("d-range", self.d_range)] {
            if r.steps == 0 || !(r.lo >= 0.0) || !(r.hi >= r.lo) || !r.hi.is_finite() {
                return Err(bad(
                    name,
                    format!("need 0 <= LO <= HI and STEPS >= 1, got {r:?}"),
                ));
            }
            if r.steps > 1 && r.hi == r.lo {
                return Err(bad(name, "LO = HI needs STEPS = 1"));
            }
        }
        if self.cell_n < 4 || !self.cell_n.is_multiple_of(2) {
            return Err(bad(
                "cell-n",
                format!("must be even and at least 4, got {}", self.cell_n),
            ));
        }
        positive("b", self.cell_b)?;
        positive("grad_tol", self.minimizer.grad_tol)?;
        if self.minimizer.max_iter == 0 {
            return Err(bad("max_iter", "must be positive"));
        }
        Ok(())
    }
}
