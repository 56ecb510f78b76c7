//! Probability distributions over matrix cells.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rect::Rectangle;

const TOTAL_TOL: f64 = 1e-12;

/// A distribution μ over the cells of an `n_rows × n_cols` grid,
/// stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryDistribution {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl EntryDistribution {
    pub fn uniform(n_rows: usize, n_cols: usize) -> Self {
        let n = n_rows * n_cols;
        EntryDistribution { rows: n_rows, cols: n_cols, weights: vec![1.0 / n as f64; n] }
    }

    /// Validates nonnegativity and a total of one within `1e-12`.
    pub fn from_weights(n_rows: usize, n_cols: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n_rows * n_cols {
            return Err(Error::precondition("distribution has the wrong number of cells"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::precondition("distribution weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TOTAL_TOL {
            return Err(Error::precondition(format!("distribution total is {total}, not 1")));
        }
        Ok(EntryDistribution { rows: n_rows, cols: n_cols, weights })
    }

    /// Clamps tiny negatives and rescales; for solver output.
    pub fn normalized(n_rows: usize, n_cols: usize, raw: &[f64]) -> Result<Self> {
        let clamped: Vec<f64> = raw.iter().map(|&w| if w > 0.0 { w } else { 0.0 }).collect();
        let total: f64 = clamped.iter().sum();
        if total <= 0.0 {
            return Err(Error::precondition("distribution has no mass"));
        }
        EntryDistribution::from_weights(n_rows, n_cols, clamped.into_iter().map(|w| w / total).collect())
    }

    /// All mass on a single cell.
    pub fn point(n_rows: usize, n_cols: usize, i: usize, j: usize) -> Self {
        let mut w = vec![0.0; n_rows * n_cols];
        w[i * n_cols + j] = 1.0;
        EntryDistribution { rows: n_rows, cols: n_cols, weights: w }
    }

    /// Uniform over the cells of `r`.
    pub fn uniform_on(n_rows: usize, n_cols: usize, r: &Rectangle) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::precondition("uniform distribution on an empty rectangle"));
        }
        let mut w = vec![0.0; n_rows * n_cols];
        let p = 1.0 / r.area() as f64;
        for (i, j) in r.cells() {
            w[i * n_cols + j] = p;
        }
        EntryDistribution::normalized(n_rows, n_cols, &w)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.cols + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// μ(r).
    pub fn mass(&self, r: &Rectangle) -> f64 {
        r.cells().map(|(i, j)| self.weight(i, j)).sum()
    }
}
