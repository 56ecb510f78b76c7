//! The end-to-end route from a sign matrix to a verified protocol:
//! dedupe, discrepancy, amplification and extraction at every node of the
//! recursive construction, balancing, verification and cost accounting.

use serde::{Deserialize, Serialize};

use crate::amplification::AmplifyOptions;
use crate::discrepancy::{disc_game, rank_disc_bound, GameOptions};
use crate::error::Error;
use crate::matrix::SignMatrix;
use crate::protocol::build::{default_eps, FinderRecord};
use crate::protocol::{
    balance, complexity, nw_build, run, verify, ComplexityReport, PipelineFinder, ProtocolTree, SplitRecord,
    VerifyReport,
};

#[derive(Clone, Debug)]
pub struct ProveOptions {
    pub seed: u64,
    /// Fixed `ε` for every sub-problem instead of `1/(2r)`.
    pub eps: Option<f64>,
    pub game: GameOptions,
    pub max_trials: usize,
}

impl Default for ProveOptions {
    fn default() -> Self {
        let a = AmplifyOptions::default();
        ProveOptions { seed: 0, eps: None, game: a.game, max_trials: a.max_trials }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscSummary {
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
    pub iterations: usize,
    /// `1/(8√r)`.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitSummary {
    pub nodes: usize,
    pub rank_split_ok: bool,
    pub child_rank_ok: bool,
    pub max_cost_bits: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProveReport {
    pub rows: usize,
    pub cols: usize,
    pub dedup_rows: usize,
    pub dedup_cols: usize,
    pub rank: usize,
    pub seed: u64,
    pub eps: f64,
    pub disc: Option<DiscSummary>,
    pub finder_calls: Vec<FinderRecord>,
    pub splits: Option<SplitSummary>,
    pub verify: Option<VerifyReport>,
    /// Every cell of the original matrix, run through the deduplicated
    /// protocol via the row and column maps.
    pub original_ok: Option<bool>,
    /// The balanced tree agrees with the built tree on every input.
    pub balance_equivalent: Option<bool>,
    pub complexity: Option<ComplexityReport>,
    pub pass: bool,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
}

pub struct ProveOutcome {
    pub report: ProveReport,
    pub tree: Option<ProtocolTree>,
    pub balanced: Option<ProtocolTree>,
    pub trace: Vec<SplitRecord>,
    /// The error that stopped the run, if any.
    pub error: Option<Error>,
}

impl ProveOutcome {
    /// 0 when the protocol verified, otherwise the failing stage's code.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.exit_code(),
            None if self.report.pass => 0,
            None => Error::Verification(String::new()).exit_code(),
        }
    }
}

/// Runs the whole pipeline on `f`. Stage failures are reported in the
/// outcome rather than returned, so the partial report survives.
pub fn prove(f: &SignMatrix, opts: &ProveOptions) -> ProveOutcome {
    let dd = f.dedupe();
    let g = &dd.matrix;
    let rank = g.rank();
    let mut report = ProveReport {
        rows: f.n_rows(),
        cols: f.n_cols(),
        dedup_rows: g.n_rows(),
        dedup_cols: g.n_cols(),
        rank,
        seed: opts.seed,
        eps: opts.eps.unwrap_or_else(|| default_eps(rank)),
        disc: None,
        finder_calls: Vec::new(),
        splits: None,
        verify: None,
        original_ok: None,
        balance_equivalent: None,
        complexity: None,
        pass: false,
        failed_stage: None,
        error: None,
    };
    let fail = |mut report: ProveReport, stage: &str, e: Error, tree, balanced| {
        report.failed_stage = Some(stage.into());
        report.error = Some(e.to_string());
        ProveOutcome { report, tree, balanced, trace: Vec::new(), error: Some(e) }
    };

    match disc_game(g, opts.game) {
        Ok(c) => {
            report.disc = Some(DiscSummary {
                lower: c.lower,
                upper: c.upper,
                converged: c.converged,
                iterations: c.iterations,
                bound: rank_disc_bound(rank),
            })
        }
        Err(e) => return fail(report, "disc", e, None, None),
    }

    let amp = AmplifyOptions { game: opts.game, max_trials: opts.max_trials, delta_lb: None };
    let finder = PipelineFinder::new(opts.seed, opts.eps, amp);
    let built = nw_build(g, &finder);
    report.finder_calls = finder.records();
    let built = match built {
        Ok(b) => b,
        Err(e) => return fail(report, "nw_build", e, None, None),
    };
    report.splits = Some(SplitSummary {
        nodes: built.trace.len(),
        rank_split_ok: built.trace.iter().all(|s| s.rank_split_ok),
        child_rank_ok: built.trace.iter().all(|s| s.child_rank_ok),
        max_cost_bits: built.trace.iter().map(|s| s.cost_bits()).fold(0.0, f64::max),
    });

    let balanced = balance(&built.tree);
    let v = verify(g, &balanced);
    let mut equivalent = true;
    let mut original_ok = true;
    for x in 0..g.n_rows() {
        for y in 0..g.n_cols() {
            let a = run(&built.tree, x, y).map(|t| t.value).ok();
            let b = run(&balanced, x, y).map(|t| t.value).ok();
            equivalent &= a.is_some() && a == b;
        }
    }
    for x in 0..f.n_rows() {
        for y in 0..f.n_cols() {
            let got = run(&balanced, dd.row_map[x], dd.col_map[y]).map(|t| t.value).ok();
            original_ok &= got == Some(f.get(x, y));
        }
    }
    let pass = v.pass && equivalent && original_ok && verify(g, &built.tree).pass;
    report.verify = Some(v);
    report.balance_equivalent = Some(equivalent);
    report.original_ok = Some(original_ok);
    report.complexity = Some(complexity(g, &built.tree, &built.trace, &balanced));
    report.pass = pass;
    if !pass {
        report.failed_stage = Some("verify".into());
    }
    ProveOutcome { report, tree: Some(built.tree), balanced: Some(balanced), trace: built.trace, error: None }
}
