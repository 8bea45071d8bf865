use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::grid::RadialGrid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Panel order for every contour segment.
const CONTOUR_ORDER: usize = 16;
/// Largest panel count per segment before giving up.
const MAX_PANELS: usize = 1 << 12;
/// Change between successive panel doublings accepted as converged.
pub const CONTOUR_TOL: f64 = 1e-8;

/// One of the five pieces of the speaker path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    /// `πi/(2β) + (1+i)t`, `t ∈ [0, R]`, traversed from `t = R` to `t = 0`.
    U1,
    /// `πi/(2β) − (μ+1)t`, `t ∈ [0, 1]`.
    U2,
    /// `−πi t/(2β) − (μ+1)`, `t ∈ [−1, 1]`.
    U3,
    /// `−πi/(2β) − (μ+1)(1−t)`, `t ∈ [0, 1]`.
    U4,
    /// `−πi/(2β) + (1−i)t`, `t ∈ [0, R]`.
    U5,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub t_min: f64,
    pub t_max: f64,
    /// `+1` if traversed with increasing `t`, `−1` otherwise.
    pub orientation: f64,
    half_gap: f64,
    offset: f64,
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        let h = self.half_gap;
        let m = self.offset;
        match self.kind {
            SegmentKind::U1 => I * h + Complex64::new(t, t),
            SegmentKind::U2 => I * h - m * t,
            SegmentKind::U3 => -I * h * t - m,
            SegmentKind::U4 => -I * h - m * (1.0 - t),
            SegmentKind::U5 => -I * h + Complex64::new(t, -t),
        }
    }

    pub fn derivative(&self) -> Complex64 {
        match self.kind {
            SegmentKind::U1 => Complex64::new(1.0, 1.0),
            SegmentKind::U2 => Complex64::new(-self.offset, 0.0),
            SegmentKind::U3 => -I * self.half_gap,
            SegmentKind::U4 => Complex64::new(self.offset, 0.0),
            SegmentKind::U5 => Complex64::new(1.0, -1.0),
        }
    }

    /// Point where the traversal starts.
    pub fn start(&self) -> Complex64 {
        if self.orientation > 0.0 {
            self.point(self.t_min)
        } else {
            self.point(self.t_max)
        }
    }

    pub fn end(&self) -> Complex64 {
        if self.orientation > 0.0 {
            self.point(self.t_max)
        } else {
            self.point(self.t_min)
        }
    }
}

/// Counterclockwise path around `[−μ, ∞)` inside the strip
/// `|Im w| ≤ π/(2β_c)`, open towards `Re w → +∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourPath {
    pub segments: [Segment; 5],
    pub r: f64,
    pub beta_c: f64,
    /// Chemical potential after clamping to `μ ≤ 1`.
    pub mu_c: f64,
}

/// Builds the speaker path; for `μ > 1` the path for `μ = 1` is used.
pub fn speaker_path(r: f64, beta_c: f64, mu: f64) -> ContourPath {
    let mu_c = mu.min(1.0);
    let half_gap = PI / (2.0 * beta_c);
    let offset = mu_c + 1.0;
    let seg = |kind, t_min, t_max, orientation| Segment {
        kind,
        t_min,
        t_max,
        orientation,
        half_gap,
        offset,
    };
    ContourPath {
        segments: [
            seg(SegmentKind::U1, 0.0, r, -1.0),
            seg(SegmentKind::U2, 0.0, 1.0, 1.0),
            seg(SegmentKind::U3, -1.0, 1.0, 1.0),
            seg(SegmentKind::U4, 0.0, 1.0, 1.0),
            seg(SegmentKind::U5, 0.0, r, 1.0),
        ],
        r,
        beta_c,
        mu_c,
    }
}

/// `f(w) = w/tanh(βw/2) − w = 2w/(e^{βw} − 1)`.
fn contour_integrand(w: Complex64, beta: f64) -> Complex64 {
    let bw = beta * w;
    if bw.norm() < 1e-4 {
        return (2.0 / beta) * (1.0 - 0.5 * bw + bw * bw / 12.0);
    }
    if bw.re > 0.0 {
        let e = (-bw).exp();
        2.0 * w * e / (1.0 - e)
    } else {
        2.0 * w / (bw.exp() - 1.0)
    }
}

fn path_integral(path: &ContourPath, x: f64, beta: f64, panels: usize) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in &path.segments {
        if seg.t_max <= seg.t_min {
            continue;
        }
        // Grids live on [0, ∞); shift the parameter interval there.
        let grid = RadialGrid::uniform(0.0, seg.t_max - seg.t_min, panels, CONTOUR_ORDER)?;
        let dw = seg.derivative();
        let mut part = Complex64::new(0.0, 0.0);
        for (&t, &wt) in grid.nodes().iter().zip(grid.weights()) {
            let w = seg.point(seg.t_min + t);
            part += wt * contour_integrand(w, beta) / (w - x);
        }
        acc += seg.orientation * part * dw;
    }
    Ok((acc / (2.0 * PI * I)).re)
}

/// `K_T(x)` from its Cauchy representation `x + (2πi)^{-1} ∮ f(w)/(w − x) dw`
/// along [`speaker_path`]`(r, 1/T, μ)`.
///
/// Panels per segment start at `panels` and double until two successive
/// values differ by less than [`CONTOUR_TOL`].
pub fn kt_contour_eval(x: f64, t: f64, mu: f64, r: f64, panels: usize) -> Result<f64> {
    if !(t > 0.0 && r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "T, R",
            reason: format!("must be positive, got T = {t}, R = {r}"),
        });
    }
    let beta = 1.0 / t;
    let path = speaker_path(r, beta, mu);
    if x <= -(path.mu_c + 1.0) {
        return Err(Error::Contour(format!(
            "x = {x} is not enclosed by the path (left edge at {})",
            -(path.mu_c + 1.0)
        )));
    }
    let mut n = panels.max(1);
    let mut prev = path_integral(&path, x, beta, n)?;
    while n < MAX_PANELS {
        n *= 2;
        let next = path_integral(&path, x, beta, n)?;
        if (next - prev).abs() < CONTOUR_TOL {
            return Ok(x + next);
        }
        prev = next;
    }
    Err(Error::Contour(format!(
        "no convergence at {MAX_PANELS} panels per segment for x = {x}, T = {t}"
    )))
}

/// Bound on the two ray contributions dropped beyond `Re w = R`.
///
/// Infinite unless `R > x`.
pub fn ray_tail_bound(x: f64, t: f64, r: f64) -> f64 {
    if r <= x {
        return f64::INFINITY;
    }
    let beta = 1.0 / t;
    let c = PI / (2.0 * beta);
    // max over s ≥ R of (√2 s + c) / (s − x)
    let ratio = ((SQRT_2 * r + c) / (r - x)).max(SQRT_2);
    let decay = (-beta * r).exp() / (beta * -(-beta * r).exp_m1());
    2.0 / (2.0 * PI) * 2.0 * SQRT_2 * ratio * decay
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::kernels::kt_symbol;
    use approx::assert_relative_eq;

    #[test]
    fn path_endpoints_chain() {
        let p = speaker_path(10.0, 2.0, 0.5);
        let h = PI / 4.0;
        assert_relative_eq!(p.segments[0].end().im, h);
        assert_eq!(p.segments[0].end().re, 0.0);
        assert_eq!(p.segments[2].point(0.0), Complex64::new(-1.5, 0.0));
        for w in p.segments.windows(2) {
            assert!((w[0].end() - w[1].start()).norm() < 1e-15);
        }
        assert_relative_eq!(p.segments[1].end().re, -1.5);
        assert_relative_eq!(p.segments[4].start().im, -h);
    }

    #[test]
    fn large_mu_is_clamped() {
        let p = speaker_path(5.0, 1.0, 3.0);
        assert_eq!(p.mu_c, 1.0);
        assert_eq!(p.segments[2].point(0.0).re, -2.0);
    }

    #[test]
    fn contour_reproduces_kt() {
        for (x, t) in [(0.0, 1.0), (5.0, 1.0), (-0.9, 0.5), (2.0, 0.2)] {
            let v = kt_contour_eval(x, t, 1.0, 50.0, 8).unwrap();
            assert_relative_eq!(v, kt_symbol(x, t), epsilon = 1e-6);
        }
    }

    #[test]
    fn radius_study_within_tail_bound() {
        let (x, t) = (1.0, 1.0);
        let a = kt_contour_eval(x, t, 1.0, 20.0, 8).unwrap();
        let b = kt_contour_eval(x, t, 1.0, 40.0, 8).unwrap();
        assert!((a - b).abs() <= ray_tail_bound(x, t, 20.0) + 2.0 * CONTOUR_TOL);
    }

    #[test]
    fn unenclosed_point_is_an_error() {
        assert!(matches!(
            kt_contour_eval(-2.5, 1.0, 1.0, 20.0, 4),
            Err(Error::Contour(_))
        ));
    }
}
