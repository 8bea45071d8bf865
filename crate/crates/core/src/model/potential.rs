use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::grid::RadialGrid;
use crate::model::io::read_columns;
use crate::model::radial::RadialFunction;

/// Relative size below which the potential counts as zero when choosing a
/// radial cutoff.
const SUPPORT_EPS: f64 = 1e-18;

/// Nonnegative radial pair potential `V(r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `v0 · exp(-(r/a)²)`
    Gaussian { v0: f64, a: f64 },
    /// `v0 · exp(-r/a) / max(r, rc)`
    YukawaCut { v0: f64, a: f64, rc: f64 },
    /// Natural cubic spline through tabulated samples, zero past the last node.
    Tabulated { path: PathBuf, spline: CubicSpline },
}

impl Potential {
    pub fn gaussian(v0: f64, a: f64) -> Result<Self> {
        check_positive("v0", v0)?;
        check_positive("a", a)?;
        Ok(Self::Gaussian { v0, a })
    }

    pub fn yukawa_cut(v0: f64, a: f64, rc: f64) -> Result<Self> {
        check_positive("v0", v0)?;
        check_positive("a", a)?;
        check_positive("rc", rc)?;
        Ok(Self::YukawaCut { v0, a, rc })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let (r, v) = read_columns(&text)?;
        if v.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter {
                name: "potential",
                reason: format!("{} contains negative samples", path.display()),
            });
        }
        Ok(Self::Tabulated {
            path: path.to_path_buf(),
            spline: CubicSpline::natural(r, v)?,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Self::Gaussian { v0, a } => v0 * (-(r / a).powi(2)).exp(),
            Self::YukawaCut { v0, a, rc } => v0 * (-r / a).exp() / r.max(rc),
            Self::Tabulated { ref spline, .. } => spline.eval(r).max(0.0),
        }
    }

    /// Characteristic length: sets the panel width of radial grids and the
    /// momentum cutoff.
    pub fn length_scale(&self) -> f64 {
        match *self {
            Self::Gaussian { a, .. } => a,
            Self::YukawaCut { a, rc, .. } => a.min(rc),
            Self::Tabulated { ref spline, .. } => {
                let x = spline.knots();
                (x[x.len() - 1] - x[0]) / 8.0
            }
        }
    }

    /// Radius beyond which `r² V(r)` is negligible.
    pub fn support_radius(&self) -> f64 {
        let tail = -SUPPORT_EPS.ln();
        match *self {
            Self::Gaussian { a, .. } => a * tail.sqrt() + a,
            Self::YukawaCut { a, rc, .. } => (a * (tail + 4.0 * (1.0 + tail).ln())).max(2.0 * rc),
            Self::Tabulated { ref spline, .. } => *spline.knots().last().unwrap(),
        }
    }

    /// Points where `V` is not smooth; radial grids put a panel boundary there.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            Self::Gaussian { .. } => vec![],
            Self::YukawaCut { rc, .. } => vec![rc],
            Self::Tabulated { ref spline, .. } => spline.knots().to_vec(),
        }
    }

    /// Samples on a Gauss–Legendre grid covering the support with panels no
    /// wider than `panel_width_factor · length_scale`.
    pub fn sample(&self, panel_width_factor: f64, order: usize) -> Result<RadialFunction> {
        let grid = self.radial_grid(panel_width_factor, order)?;
        Ok(RadialFunction::from_fn(grid, |r| self.eval(r)))
    }

    pub fn radial_grid(&self, panel_width_factor: f64, order: usize) -> Result<RadialGrid> {
        let rmax = self.support_radius();
        let mut mandatory = vec![0.0, rmax];
        if let Self::Tabulated { .. } = self {
            // Knots are too dense to use as panel boundaries directly.
            mandatory.push(*self.kinks().first().unwrap());
        } else {
            mandatory.extend(self.kinks().into_iter().filter(|&k| k > 0.0 && k < rmax));
        }
        RadialGrid::with_max_width(&mandatory, panel_width_factor * self.length_scale(), order)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { v0, a } => write!(f, "gaussian({v0},{a})"),
            Self::YukawaCut { v0, a, rc } => write!(f, "yukawa-cut({v0},{a},{rc})"),
            Self::Tabulated { path, .. } => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// Parses `gaussian(v0,a)`, `yukawa-cut(v0,a,rc)` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Self::from_file(path.trim());
        }
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("expected family(args) in `{s}`")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
        let args: Vec<f64> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("`{}` in `{s}`: {e}", a.trim())))
            })
            .collect::<Result<_>>()?;
        match (name.trim(), args.as_slice()) {
            ("gaussian", &[v0, a]) => Self::gaussian(v0, a),
            ("yukawa-cut", &[v0, a, rc]) => Self::yukawa_cut(v0, a, rc),
            (other, _) => Err(Error::Parse(format!(
                "unknown potential `{other}` with {} arguments",
                args.len()
            ))),
        }
    }
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive, got {x}"),
        })
    }
}

/// Natural cubic spline on strictly ascending knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidGrid(
                "spline needs at least two samples".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) || x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(
                "spline knots must be finite and ascending".into(),
            ));
        }
        // Second derivatives from the tridiagonal system with m_0 = m_{n-1} = 0.
        let mut m = vec![0.0; n];
        if n > 2 {
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
                let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
                c[i] = h1 / diag;
                d[i] = (rhs - h0 * d[i - 1]) / diag;
            }
            for i in (1..n - 1).rev() {
                m[i] = d[i] - c[i] * m[i + 1];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Spline value; linear extension below the first knot, zero past the last.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t > self.x[n - 1] {
            return 0.0;
        }
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k => (k - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
