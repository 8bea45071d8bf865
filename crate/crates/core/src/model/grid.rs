use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::{compensated_sum, CompensatedSum};

/// Composite Gauss–Legendre rule on `[breaks[0], breaks[last]]`.
///
/// Every panel `[breaks[i], breaks[i+1]]` carries `order` nodes. Nodes are
/// strictly ascending and never coincide with a panel boundary, so `r = 0`
/// is never a node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    breaks: Vec<f64>,
    order: usize,
    #[serde(skip)]
    nodes: Vec<f64>,
    #[serde(skip)]
    weights: Vec<f64>,
}

/// Reference nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre_reference(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = NonZeroUsize::new(order)
        .ok_or_else(|| Error::InvalidGrid("quadrature order must be positive".into()))?;
    let rule = GaussLegendre::new(n);
    let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

impl RadialGrid {
    pub fn gauss_legendre(breaks: &[f64], order: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidGrid("need at least one panel".into()));
        }
        if breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrid("non-finite panel boundary".into()));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "panel boundaries must be strictly ascending".into(),
            ));
        }
        if breaks[0] < 0.0 {
            return Err(Error::InvalidGrid("radial grids start at r >= 0".into()));
        }
        let (x, w) = gauss_legendre_reference(order)?;
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let half = 0.5 * (pair[1] - pair[0]);
            let mid = 0.5 * (pair[1] + pair[0]);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(Self {
            breaks: breaks.to_vec(),
            order,
            nodes,
            weights,
        })
    }

    /// `panels` equal panels on `[a, b]`.
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidGrid("panel count must be positive".into()));
        }
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::gauss_legendre(&breaks, order)
    }

    /// Panels no wider than `max_width` between each pair of mandatory breakpoints.
    pub fn with_max_width(mandatory: &[f64], max_width: f64, order: usize) -> Result<Self> {
        if max_width <= 0.0 {
            return Err(Error::InvalidGrid("panel width must be positive".into()));
        }
        let mut points: Vec<f64> = mandatory.to_vec();
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
        let mut breaks = vec![points[0]];
        for pair in points.windows(2) {
            let n = ((pair[1] - pair[0]) / max_width).ceil().max(1.0) as usize;
            for i in 1..=n {
                breaks.push(pair[0] + (pair[1] - pair[0]) * i as f64 / n as f64);
            }
        }
        Self::gauss_legendre(&breaks, order)
    }

    /// Same panels split in half: the refinement step used by convergence studies.
    pub fn refined(&self) -> Self {
        let mut breaks = Vec::with_capacity(2 * self.breaks.len());
        for pair in self.breaks.windows(2) {
            breaks.push(pair[0]);
            breaks.push(0.5 * (pair[0] + pair[1]));
        }
        breaks.push(*self.breaks.last().unwrap());
        Self::gauss_legendre(&breaks, self.order).expect("refinement of a valid grid")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.breaks[0]
    }

    pub fn upper(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn panels(&self) -> usize {
        self.breaks.len() - 1
    }

    /// `∫ f` over the grid interval.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        compensated_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x)),
        )
    }

    /// `Σ w_i v_i` in node order.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        compensated_sum(self.weights.iter().zip(values).map(|(w, v)| w * v))
    }

    /// Contribution of the last panel to `Σ w_i |v_i|`, relative to the total.
    /// This is the tail estimate used to certify truncation of `[0, ∞)`.
    pub fn tail_fraction(&self, values: &[f64]) -> f64 {
        let start = self.nodes.len() - self.order;
        let mut total = CompensatedSum::new();
        let mut tail = CompensatedSum::new();
        for (i, (w, v)) in self.weights.iter().zip(values).enumerate() {
            let t = w * v.abs();
            total.add(t);
            if i >= start {
                tail.add(t);
            }
        }
        let total = total.value();
        if total == 0.0 {
            0.0
        } else {
            tail.value() / total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn r_squared_moment_is_exact() {
        let grid = RadialGrid::uniform(0.0, 7.5, 9, 12).unwrap();
        let m = grid.integrate(|r| r * r);
        assert_relative_eq!(m, 7.5f64.powi(3) / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn nodes_ascend_and_skip_origin() {
        let grid = RadialGrid::with_max_width(&[0.0, 1.0, 4.0], 0.7, 8).unwrap();
        assert!(grid.nodes()[0] > 0.0);
        assert!(grid.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(grid.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn rejects_bad_breaks() {
        assert!(RadialGrid::gauss_legendre(&[0.0, 2.0, 1.0], 4).is_err());
        assert!(RadialGrid::gauss_legendre(&[0.0, f64::NAN], 4).is_err());
        assert!(RadialGrid::gauss_legendre(&[-1.0, 1.0], 4).is_err());
        assert!(RadialGrid::gauss_legendre(&[0.0, 1.0], 0).is_err());
    }

    #[test]
    fn refinement_doubles_panels() {
        let grid = RadialGrid::uniform(0.0, 2.0, 3, 6).unwrap();
        let fine = grid.refined();
        assert_eq!(fine.panels(), 6);
        assert_eq!(fine.len(), 2 * grid.len());
    }
}
