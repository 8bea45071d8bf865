//! Command-line driver.
//!
//! Every command validates its configuration before computing, writes its
//! artifacts atomically into the output directory and prints a short table
//! (or one JSON object with `--json`). Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage or configuration error |
//! | 2 | numerical failure, with `error.json` written to the output directory |
//! | 3 | at least one verification check failed |

pub mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gap::{critical_temperature, GapProblem, GapSolution};
use crate::glcoeff::{gl_coefficients, tc_shift, GLCoefficients};
use crate::glmin::{egl_curve, fit_exponent, MagneticCell};
use crate::verify::{run_identity_suite, VerifyConfig};

pub use config::{Range, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bcsgl",
    version,
    about = "BCS critical temperature, GL coefficients and GL minimization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file with `[section]` headers and `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// `gaussian(v0,a)`, `yukawa-cut(v0,a,rc)` or `file:PATH`.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Temperature bracket for the root search.
    #[arg(long, global = true, value_name = "LO,HI")]
    pub bracket: Option<String>,
    /// `D` sweep in units of `D_c`.
    #[arg(long, global = true, value_name = "LO,HI,STEPS")]
    pub d_range: Option<String>,
    /// Field strengths for the `T_c(B)` table.
    #[arg(long, global = true, value_name = "LO,HI,STEPS")]
    pub b_range: Option<String>,
    /// Grid points per side of the magnetic cell.
    #[arg(long, global = true, value_name = "N")]
    pub cell_n: Option<usize>,
    /// Print the summary as JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the linearized gap equation for `T_c` and `α*`.
    Gap,
    /// Compute `Λ0`, `Λ2`, `Λ3` and `D_c`.
    Coeffs,
    /// Tabulate `T_c(1 − D_c B)` over a range of `B`.
    Tcshift,
    /// Minimize the GL functional on the magnetic cell over a `D` sweep.
    Glmin,
    /// Run the identity and oracle checks.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Gap => "gap",
            Self::Coeffs => "coeffs",
            Self::Tcshift => "tcshift",
            Self::Glmin => "glmin",
            Self::Verify => "verify",
        }
    }
}

/// Merges the file (if any) with flags, which take precedence.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(mu) = cli.mu {
        cfg.mu = mu;
    }
    if let Some(p) = &cli.potential {
        cfg.potential = p.parse()?;
    }
    if let Some(b) = &cli.bracket {
        cfg.bracket = Some(config::parse_bracket(b)?);
    }
    if let Some(r) = &cli.d_range {
        cfg.d_range = config::parse_range("d-range", r)?;
    }
    if let Some(r) = &cli.b_range {
        cfg.b_range = config::parse_range("b-range", r)?;
    }
    if let Some(n) = cli.cell_n {
        cfg.cell_n = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let cfg = match resolve_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "usage error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, &cfg) {
        Ok(outcome) => {
            let _ = if cli.json {
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&outcome.summary).expect("summary serializes")
                )
            } else {
                write!(stdout, "{}", output::table(&outcome.summary))
            };
            if outcome.failed {
                EXIT_VERIFY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let path = cfg.out.join("error.json");
            let report = json!({
                "command": cli.command.name(),
                "error": e.to_string(),
                "config": output::config_json(&cfg),
            });
            match output::write_json(&path, &report) {
                Ok(()) => {
                    let _ = writeln!(stderr, "numerical failure: {e}\nreport: {}", path.display());
                }
                Err(w) => {
                    let _ = writeln!(
                        stderr,
                        "numerical failure: {e}\n(could not write report: {w})"
                    );
                }
            }
            EXIT_NUMERICAL
        }
    }
}

/// Result of a command: the printed summary and whether verification failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: Value,
    pub failed: bool,
}

fn solve_gap(cfg: &RunConfig) -> Result<(GapProblem, GapSolution)> {
    let problem = GapProblem::new(&cfg.potential, cfg.mu, cfg.gap)?;
    let sol = critical_temperature(&problem, cfg.bracket)?;
    Ok((problem, sol))
}

fn solve_coeffs(cfg: &RunConfig) -> Result<(GapProblem, GapSolution, GLCoefficients)> {
    let (problem, sol) = solve_gap(cfg)?;
    let coeffs = gl_coefficients(&sol)?;
    Ok((problem, sol, coeffs))
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let out = &cfg.out;
    let ok = |summary: Value| {
        Ok(Outcome {
            summary,
            failed: false,
        })
    };
    match command {
        Command::Gap => {
            let (problem, sol) = solve_gap(cfg)?;
            let doc = output::gap_json(cfg, &problem, &sol);
            output::write_json(&out.join("gap.json"), &doc)?;
            output::write_alpha(&out.join("alpha_star.dat"), cfg, &sol)?;
            ok(doc["summary"].clone())
        }
        Command::Coeffs => {
            let (problem, sol, coeffs) = solve_coeffs(cfg)?;
            output::write_json(
                &out.join("gap.json"),
                &output::gap_json(cfg, &problem, &sol),
            )?;
            output::write_json(&out.join("coeffs.json"), &output::coeffs_json(cfg, &coeffs))?;
            ok(serde_json::to_value(coeffs)?)
        }
        Command::Tcshift => {
            let (_, _, coeffs) = solve_coeffs(cfg)?;
            let rows = cfg
                .b_range
                .values()
                .into_iter()
                .map(|b| tc_shift(coeffs.tc, coeffs.dc, b))
                .collect::<Result<Vec<_>>>()?;
            output::write_tcshift(&out.join("tcshift.csv"), &rows)?;
            ok(json!({
                "Tc": coeffs.tc,
                "Dc": coeffs.dc,
                "rows": rows.len(),
                "valid_rows": rows.iter().filter(|r| r.valid).count(),
            }))
        }
        Command::Glmin => {
            let (_, _, coeffs) = solve_coeffs(cfg)?;
            let cell = MagneticCell::new(cfg.cell_b, cfg.cell_n)?;
            let d_values: Vec<f64> = cfg.d_range.values().iter().map(|x| x * coeffs.dc).collect();
            let (points, last) = egl_curve(&d_values, &coeffs, &cell, &cfg.minimizer)?;
            let last = last.ok_or(Error::InvalidParameter {
                name: "d-range",
                reason: "empty sweep".into(),
            })?;
            let above: Vec<_> = points.iter().copied().filter(|p| p.d > coeffs.dc).collect();
            let exponent = fit_exponent(&above, coeffs.dc).ok();
            let levels = cell.levels()?;
            let doc = json!({
                "coefficients": coeffs,
                "cell": {"B": cell.b(), "N": cell.n(), "side": cell.side(), "lowest_landau": levels.lowest},
                "minimizer": cfg.minimizer,
                "result": last,
                "exponent": exponent,
                "curve": points,
            });
            output::write_json(&out.join("glmin.json"), &doc)?;
            output::write_psi(&out.join("psi.dat"), &cell, &last)?;
            output::write_egl_curve(&out.join("egl_curve.csv"), &points)?;
            ok(json!({
                "Dc": coeffs.dc,
                "D": last.d,
                "energy": last.energy,
                "grad_norm": last.grad_norm,
                "points": points.len(),
                "exponent": exponent,
            }))
        }
        Command::Verify => {
            let vcfg = VerifyConfig {
                groups: cfg.groups.clone(),
                potential: cfg.potential.clone(),
                mu: cfg.mu,
                gap: cfg.gap,
                minimizer: cfg.minimizer,
                cell_n: cfg.cell_n,
                seed: cfg.minimizer.seed,
                g1_scale: 1.0,
            };
            let report = run_identity_suite(&vcfg);
            crate::model::io::write_atomic(
                &out.join("verify.jsonl"),
                report.to_jsonl().as_bytes(),
            )?;
            let failed: Vec<&str> = report
                .entries
                .iter()
                .filter(|e| !e.passed)
                .map(|e| e.name)
                .collect();
            Ok(Outcome {
                summary: json!({
                    "total": report.summary.total,
                    "passed": report.summary.passed,
                    "failed": report.summary.failed,
                    "worst": report.summary.worst,
                    "max_error_ratio": report.summary.max_error_ratio,
                    "failures": failed,
                }),
                failed: !report.all_passed(),
            })
        }
    }
}
