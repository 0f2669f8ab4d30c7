//! Frequency grids and quadrature for the half-line integrals in xi.
//!
//! A grid is a union of panels (each a strictly increasing node list,
//! consecutive panels sharing their seam node). Weights are built per
//! panel from interpolatory rules on groups of 3-5 consecutive
//! intervals, so the composite rule integrates cubics exactly while
//! keeping every weight positive on uniform and gently graded spacings.

use crate::error::{BresseError, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct FrequencyGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Start index of each panel in `nodes` (first entry is 0).
    panel_starts: Vec<usize>,
}

/// Interpolatory weights for `nodes` over `[a, b]`.
///
/// Solves the Vandermonde moment system on the interval shifted and
/// scaled to [-1, 1] for conditioning. Exact for polynomials of degree
/// `nodes.len() - 1`.
fn interpolatory_weights(nodes: &[f64], a: f64, b: f64) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let scaled: Vec<f64> = nodes.iter().map(|&x| (x - mid) / half).collect();
    let vand = DMatrix::from_fn(n, n, |p, j| scaled[j].powi(p as i32));
    // moments of x^p over [-1, 1]
    let moments = DMatrix::from_fn(n, 1, |p, _| {
        if p % 2 == 0 {
            2.0 / (p as f64 + 1.0)
        } else {
            0.0
        }
    });
    let solved = vand
        .lu()
        .solve(&moments)
        .ok_or_else(|| BresseError::InvalidGrid("singular quadrature group".into()))?;
    Ok(solved.iter().map(|w| w * half).collect())
}

/// Split `m` intervals into cubic-exact groups, preferring sizes 3
/// and 4 (whose interpolatory weights stay positive on much harsher
/// grading than size 5, which is only needed for m = 5 itself).
fn group_sizes(m: usize) -> Vec<usize> {
    assert!(m >= 3);
    if m == 5 {
        return vec![5];
    }
    let fours = match m % 3 {
        0 => 0,
        1 => 1,
        _ => 2,
    };
    let mut sizes = vec![3; (m - 4 * fours) / 3];
    sizes.extend(std::iter::repeat_n(4, fours));
    sizes
}

fn panel_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut weights = vec![0.0; n];
    if n < 2 {
        return Ok(weights);
    }
    if n < 4 {
        // Fewer than 3 intervals: a single interpolatory group over
        // the whole span (trapezoid or quadratic).
        let w = interpolatory_weights(nodes, nodes[0], nodes[n - 1])?;
        weights.copy_from_slice(&w);
        return Ok(weights);
    }
    let mut start = 0usize;
    for size in group_sizes(n - 1) {
        let group = &nodes[start..=start + size];
        let w = interpolatory_weights(group, group[0], group[size])?;
        for (k, wk) in w.iter().enumerate() {
            weights[start + k] += wk;
        }
        start += size;
    }
    Ok(weights)
}

impl FrequencyGrid {
    /// Build a single-panel grid from a node list.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        Self::from_panels(vec![nodes])
    }

    /// Build from panels; consecutive panels must share their seam node.
    pub fn from_panels(panels: Vec<Vec<f64>>) -> Result<Self> {
        if panels.is_empty() || panels.iter().any(|p| p.is_empty()) {
            return Err(BresseError::InvalidGrid("empty panel list".into()));
        }
        let mut nodes: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut panel_starts = Vec::new();
        for panel in &panels {
            for pair in panel.windows(2) {
                if !(pair[1] > pair[0]) {
                    return Err(BresseError::InvalidGrid(format!(
                        "nodes not strictly increasing at {} -> {}",
                        pair[0], pair[1]
                    )));
                }
            }
            if panel.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(BresseError::InvalidGrid(
                    "nodes must be finite and nonnegative".into(),
                ));
            }
            let pw = panel_weights(panel)?;
            if let Some(&last) = nodes.last() {
                if panel[0] != last {
                    return Err(BresseError::InvalidGrid(format!(
                        "panel seam mismatch: {} vs {}",
                        last, panel[0]
                    )));
                }
                // shared seam node: accumulate its weight
                *weights.last_mut().unwrap() += pw[0];
                nodes.extend_from_slice(&panel[1..]);
                weights.extend_from_slice(&pw[1..]);
            } else {
                panel_starts.push(0);
                nodes.extend_from_slice(panel);
                weights.extend_from_slice(&pw);
            }
            if nodes.len() > panel.len() {
                panel_starts.push(nodes.len() - panel.len());
            }
        }
        panel_starts.dedup();
        if nodes.len() >= 2 && weights.iter().any(|&w| w <= 0.0) {
            return Err(BresseError::InvalidGrid(
                "quadrature weights must be positive; grade the spacing more gently".into(),
            ));
        }
        Ok(FrequencyGrid {
            nodes,
            weights,
            panel_starts,
        })
    }

    /// Uniformly spaced panel on [lo, hi] with `n` nodes.
    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(BresseError::InvalidGrid("need n >= 2 and hi > lo".into()));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
            .collect();
        Self::new(nodes)
    }

    /// Geometrically spaced panel on [lo, hi] with `n` nodes (lo > 0).
    pub fn geometric(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || lo <= 0.0 {
            return Err(BresseError::InvalidGrid(
                "need n >= 2 and 0 < lo < hi".into(),
            ));
        }
        let ratio = (hi / lo).ln() / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo * (ratio * i as f64).exp()
                }
            })
            .collect();
        Self::new(nodes)
    }

    /// Default laboratory grid: a dense uniform panel on [0, 1]
    /// (step 1e-3) joined to a geometric panel on [1, 100], 2048 nodes
    /// in total. The envelope rate changes regime at |xi| = 1, so both
    /// the uniform low-frequency region and the geometric tail matter.
    pub fn default_grid() -> Self {
        let low: Vec<f64> = (0..=1000).map(|i| i as f64 * 1e-3).collect();
        let ratio = (100.0f64).ln() / 1047.0;
        let high: Vec<f64> = (0..=1047)
            .map(|i| {
                if i == 1047 {
                    100.0
                } else {
                    (ratio * i as f64).exp()
                }
            })
            .collect();
        Self::from_panels(vec![low, high]).expect("default grid is valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn span(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Integrate nodal values over the grid span.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nodes.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.nodes)
            .map(|(w, &x)| w * f(x))
            .sum()
    }

    /// Same panels with every interval split in half (for Richardson
    /// convergence checks).
    pub fn refined(&self) -> Self {
        let mut panels = Vec::new();
        for (i, &start) in self.panel_starts.iter().enumerate() {
            // panels share their seam node, so each slice is inclusive
            // of the next panel's start
            let end = self
                .panel_starts
                .get(i + 1)
                .copied()
                .unwrap_or(self.nodes.len() - 1);
            let src = &self.nodes[start..=end];
            let mut panel = Vec::with_capacity(src.len() * 2);
            for w in src.windows(2) {
                panel.push(w[0]);
                panel.push(0.5 * (w[0] + w[1]));
            }
            panel.push(*src.last().unwrap());
            panels.push(panel);
        }
        Self::from_panels(panels).expect("refinement preserves validity")
    }

    /// Worst relative quadrature error over a basis of cubics on the
    /// grid span (construction sanity measure).
    pub fn max_cubic_error(&self) -> f64 {
        let (a, b) = self.span();
        let mut worst = 0.0f64;
        for p in 0..=3u32 {
            let exact = (b.powi(p as i32 + 1) - a.powi(p as i32 + 1)) / (p as f64 + 1.0);
            let approx = self.integrate(|x| x.powi(p as i32));
            let scale = exact.abs().max(1.0);
            worst = worst.max((approx - exact).abs() / scale);
        }
        worst
    }
}
