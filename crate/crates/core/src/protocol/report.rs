//! Cost accounting for built protocols.

use serde::{Deserialize, Serialize};

use crate::matrix::SignMatrix;

use super::balance::{balance_bound, BALANCE_K};
use super::build::SplitRecord;
use super::exact::{exact_cc, EXACT_CC_CAP};
use super::tree::ProtocolTree;

/// Constant in front of both terms of `nw_bound`.
pub const NW_K1: f64 = 4.0;
/// Constant in the `√r·log₂(r+1)` target.
pub const SQRT_K2: f64 = 32.0;

/// Largest per-node cost `log₂(|domain|/|R|)` among the splits made at
/// ranks in `(r/2^{i+1}, r/2^i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCost {
    pub phase: usize,
    pub nodes: usize,
    pub c_meas: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub depth: usize,
    pub leaves: usize,
    pub balanced_depth: usize,
    pub balanced_leaves: usize,
    /// `K·⌈log_{3/2} L⌉ + K`.
    pub balance_bound: usize,
    /// `K·⌈log₂ L⌉ + K`.
    pub balance_bound_log2: usize,
    pub phases: Vec<PhaseCost>,
    /// `K₁·(log₂ r)² + K₁·Σ c_meas`.
    pub nw_bound: f64,
    /// `K₂·√r·log₂(r+1)`.
    pub sqrt_target: f64,
    pub within_sqrt_target: bool,
    pub exact_cc: Option<usize>,
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `K₂·√r·log₂(r+1)`.
pub fn sqrt_target(rank: usize) -> f64 {
    let r = rank as f64;
    SQRT_K2 * r.sqrt() * (r + 1.0).log2()
}

/// Fills a [`ComplexityReport`] for `tree` (as built, with its trace) and its
/// balanced form. `exact_cc` is computed when `f` fits the oracle.
pub fn complexity(
    f: &SignMatrix,
    tree: &ProtocolTree,
    trace: &[SplitRecord],
    balanced: &ProtocolTree,
) -> ComplexityReport {
    let rank = f.rank();
    let phases = phase_costs(rank, trace);
    let lr = if rank > 0 { (rank as f64).log2() } else { 0.0 };
    let nw_bound = NW_K1 * lr * lr + NW_K1 * phases.iter().map(|p| p.c_meas).sum::<f64>();
    let leaves = tree.leaves();
    let target = sqrt_target(rank);
    let exact = if f.n_rows() <= EXACT_CC_CAP && f.n_cols() <= EXACT_CC_CAP { exact_cc(f).ok() } else { None };
    ComplexityReport {
        rows: f.n_rows(),
        cols: f.n_cols(),
        rank,
        depth: tree.depth(),
        leaves,
        balanced_depth: balanced.depth(),
        balanced_leaves: balanced.leaves(),
        balance_bound: balance_bound(leaves),
        balance_bound_log2: BALANCE_K * ceil_log2(leaves) + BALANCE_K,
        phases,
        nw_bound,
        sqrt_target: target,
        within_sqrt_target: balanced.depth() as f64 <= target,
        exact_cc: exact,
    }
}

fn phase_costs(rank: usize, trace: &[SplitRecord]) -> Vec<PhaseCost> {
    if rank == 0 {
        return Vec::new();
    }
    (0..=ceil_log2(rank))
        .map(|i| {
            // r/2^{i+1} < s ≤ r/2^i  ⇔  2^i·s ≤ r < 2^{i+1}·s
            let in_phase = |s: usize| (s << i) <= rank && rank < (s << (i + 1));
            let costs: Vec<f64> = trace.iter().filter(|t| in_phase(t.rank)).map(|t| t.cost_bits()).collect();
            PhaseCost { phase: i, nodes: costs.len(), c_meas: costs.iter().cloned().fold(0.0, f64::max) }
        })
        .collect()
}
