//! Recursive protocol construction from a monochromatic-rectangle finder.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::amplification::{amplify, AmplifyOptions};
use crate::dist::EntryDistribution;
use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::monochromatic::{brute_force_max_mono, extract_mono};
use crate::rect::{IndexSet, Rectangle};

use super::tree::{ProtocolTree, Speaker};

/// Supplies a monochromatic rectangle inside any sub-rectangle.
pub trait MonoFinder {
    fn name(&self) -> &'static str;

    /// A nonempty monochromatic rectangle contained in `domain`, where
    /// `rank` is the rank of `f` on `domain`.
    fn find(&self, f: &SignMatrix, domain: &Rectangle, rank: usize) -> Result<Rectangle>;
}

/// Maximum-area monochromatic rectangle by exhaustive search.
pub struct BruteForceFinder;

impl MonoFinder for BruteForceFinder {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn find(&self, f: &SignMatrix, domain: &Rectangle, _rank: usize) -> Result<Rectangle> {
        let sub = f.restrict(domain)?;
        let (r, _) = brute_force_max_mono(&sub)?;
        Ok(lift(domain, &r))
    }
}

/// Best rectangle of the form "one line's color class × the lines that
/// agree with it". Cheap and always valid, not optimal.
pub struct GreedyFinder;

impl MonoFinder for GreedyFinder {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn find(&self, f: &SignMatrix, domain: &Rectangle, _rank: usize) -> Result<Rectangle> {
        let mut best: Option<Rectangle> = None;
        let mut consider = |r: Rectangle| {
            if best.as_ref().is_none_or(|b| r.area() > b.area()) {
                best = Some(r);
            }
        };
        for i in domain.rows.iter() {
            for c in [1i8, -1] {
                let cols: IndexSet = domain.cols.iter().filter(|&j| f.get(i, j) == c).collect();
                if cols.is_empty() {
                    continue;
                }
                let rows: IndexSet = domain.rows.iter().filter(|&k| cols.iter().all(|j| f.get(k, j) == c)).collect();
                consider(Rectangle::new(rows, cols));
            }
        }
        for j in domain.cols.iter() {
            for c in [1i8, -1] {
                let rows: IndexSet = domain.rows.iter().filter(|&i| f.get(i, j) == c).collect();
                if rows.is_empty() {
                    continue;
                }
                let cols: IndexSet = domain.cols.iter().filter(|&k| rows.iter().all(|i| f.get(i, k) == c)).collect();
                consider(Rectangle::new(rows, cols));
            }
        }
        best.ok_or_else(|| Error::invariant("empty domain"))
    }
}

/// One call of the amplify → extract pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinderRecord {
    pub domain_rows: usize,
    pub domain_cols: usize,
    pub rank: usize,
    /// Target on the conditional average, `1 − eps`.
    pub eps: f64,
    /// Minority-mass fraction handed to amplification.
    pub eps_mass: f64,
    pub seed: u64,
    pub delta_lb: f64,
    pub t: u32,
    pub p: f64,
    pub q: f64,
    pub amplified_area: usize,
    pub mu_mass: f64,
    pub mass_floor: f64,
    pub size_floor: f64,
    pub trials_used: usize,
    pub mono_area: usize,
    pub rows_half: bool,
    pub cols_half: bool,
}

/// The discrepancy route: amplify under the uniform distribution on the
/// domain with minority mass at most `ε/2` (so the conditional average is at
/// least `1 − ε` with `ε = 1/(2r)`), then extract a monochromatic
/// sub-rectangle.
pub struct PipelineFinder {
    pub seed: u64,
    /// Fixed `ε` instead of `1/(2r)`.
    pub eps: Option<f64>,
    pub options: AmplifyOptions,
    records: Mutex<Vec<FinderRecord>>,
}

impl PipelineFinder {
    pub fn new(seed: u64, eps: Option<f64>, options: AmplifyOptions) -> Self {
        PipelineFinder { seed, eps, options, records: Mutex::new(Vec::new()) }
    }

    pub fn records(&self) -> Vec<FinderRecord> {
        self.records.lock().unwrap().clone()
    }
}

/// Target `ε` for a sub-rectangle of rank `r`.
pub fn default_eps(rank: usize) -> f64 {
    1.0 / (2.0 * rank.max(1) as f64)
}

impl MonoFinder for PipelineFinder {
    fn name(&self) -> &'static str {
        "pipeline"
    }

    fn find(&self, f: &SignMatrix, domain: &Rectangle, rank: usize) -> Result<Rectangle> {
        let sub = f.restrict(domain)?;
        if sub.constant_value().is_some() {
            return Ok(domain.clone());
        }
        let eps = self.eps.unwrap_or_else(|| default_eps(rank));
        let eps_mass = eps / 2.0;
        let seed = domain_seed(self.seed, domain);
        let mu = EntryDistribution::uniform(sub.n_rows(), sub.n_cols());
        let amp = amplify(&sub, &mu, eps_mass, seed, &self.options)?;
        let ext = extract_mono(&sub, &amp.rect, Some(rank.max(1)))?;
        self.records.lock().unwrap().push(FinderRecord {
            domain_rows: domain.rows.len(),
            domain_cols: domain.cols.len(),
            rank,
            eps,
            eps_mass,
            seed,
            delta_lb: amp.delta_lb,
            t: amp.t,
            p: amp.p,
            q: amp.q,
            amplified_area: amp.rect.area(),
            mu_mass: amp.mu_mass,
            mass_floor: amp.mass_floor,
            size_floor: amp.size_floor,
            trials_used: amp.trials_used,
            mono_area: ext.output_rect.area(),
            rows_half: ext.rows_half,
            cols_half: ext.cols_half,
        });
        Ok(lift(domain, &ext.output_rect))
    }
}

/// Seed for a sub-problem, independent of the order sub-problems are visited.
fn domain_seed(seed: u64, domain: &Rectangle) -> u64 {
    let mut h = mix(seed);
    for x in domain.rows.iter().chain([usize::MAX]).chain(domain.cols.iter()) {
        h = mix(h ^ x as u64);
    }
    h
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps a rectangle of `restrict(f, domain)` back to `f`'s indices.
fn lift(domain: &Rectangle, r: &Rectangle) -> Rectangle {
    Rectangle::new(
        r.rows.iter().map(|i| domain.rows.as_slice()[i]).collect(),
        r.cols.iter().map(|j| domain.cols.as_slice()[j]).collect(),
    )
}

/// Bookkeeping for one internal node of an [`nw_build`] tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitRecord {
    pub depth: usize,
    pub domain: Rectangle,
    /// The finder's monochromatic rectangle.
    pub rect: Rectangle,
    pub domain_rows: usize,
    pub domain_cols: usize,
    pub rank: usize,
    pub rect_rows: usize,
    pub rect_cols: usize,
    /// Rank of `A × (cols ∖ B)`.
    pub rank_s: usize,
    /// Rank of `(rows ∖ A) × B`.
    pub rank_p: usize,
    pub speaker: Speaker,
    /// Rank of the child that contains the monochromatic rectangle.
    pub child_rank: usize,
    /// `rank_s + rank_p ≤ rank + 1`.
    pub rank_split_ok: bool,
    /// `child_rank ≤ rank/2 + 2`.
    pub child_rank_ok: bool,
}

impl SplitRecord {
    /// `log₂(|domain| / |R|)`.
    pub fn cost_bits(&self) -> f64 {
        ((self.domain_rows * self.domain_cols) as f64 / (self.rect_rows * self.rect_cols) as f64).log2()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NwBuild {
    pub tree: ProtocolTree,
    pub trace: Vec<SplitRecord>,
}

/// Builds a protocol for `f` (expected to be deduplicated).
///
/// At a non-monochromatic domain of rank `r`, with monochromatic
/// `R = A × B` from the finder, `S = A × (cols ∖ B)` and
/// `P = (rows ∖ A) × B` satisfy `rank(S) + rank(P) ≤ r + 1`; the row player
/// splits off `A` when `rank(S) ≤ r/2 + 1`, otherwise the column player
/// splits off `B`. When both qualify the smaller rank wins, then the row
/// player.
pub fn nw_build(f: &SignMatrix, finder: &dyn MonoFinder) -> Result<NwBuild> {
    let mut trace = Vec::new();
    let tree = build_node(f, f.full_rect(), finder, 0, &mut trace)?;
    Ok(NwBuild { tree, trace })
}

fn build_node(
    f: &SignMatrix,
    domain: Rectangle,
    finder: &dyn MonoFinder,
    depth: usize,
    trace: &mut Vec<SplitRecord>,
) -> Result<ProtocolTree> {
    if let Some(v) = f.constant_on(&domain) {
        return Ok(ProtocolTree::leaf(domain, v));
    }
    let r = f.rank_on(&domain);
    let rect = finder.find(f, &domain, r)?;
    if rect.is_empty() || !rect.is_subset(&domain) || f.constant_on(&rect).is_none() {
        return Err(Error::invariant(format!(
            "finder {} returned {rect}, not a monochromatic rectangle inside {domain}",
            finder.name()
        )));
    }
    let rest_rows = domain.rows.difference(&rect.rows);
    let rest_cols = domain.cols.difference(&rect.cols);
    let s = Rectangle::new(rect.rows.clone(), rest_cols.clone());
    let p = Rectangle::new(rest_rows.clone(), rect.cols.clone());
    let (rank_s, rank_p) = (f.rank_on(&s), f.rank_on(&p));
    let rank_split_ok = rank_s + rank_p <= r + 1;
    if !rank_split_ok {
        return Err(Error::invariant(format!(
            "rank(S) + rank(P) = {} + {} exceeds r + 1 = {} at {domain}",
            rank_s,
            rank_p,
            r + 1
        )));
    }

    // rank ≤ r/2 + 1  ⇔  2·rank ≤ r + 2
    let row_ok = !rest_rows.is_empty() && 2 * rank_s <= r + 2;
    let col_ok = !rest_cols.is_empty() && 2 * rank_p <= r + 2;
    let speaker = match (row_ok, col_ok) {
        (true, true) if rank_p < rank_s => Speaker::Col,
        (true, _) => Speaker::Row,
        (false, true) => Speaker::Col,
        (false, false) => {
            return Err(Error::invariant(format!("no admissible split at {domain} (r = {r})")));
        }
    };
    let (first, second) = match speaker {
        Speaker::Row => {
            (Rectangle::new(rect.rows.clone(), domain.cols.clone()), Rectangle::new(rest_rows, domain.cols.clone()))
        }
        Speaker::Col => {
            (Rectangle::new(domain.rows.clone(), rect.cols.clone()), Rectangle::new(domain.rows.clone(), rest_cols))
        }
    };
    let child_rank = f.rank_on(&first);
    trace.push(SplitRecord {
        depth,
        domain: domain.clone(),
        rect: rect.clone(),
        domain_rows: domain.rows.len(),
        domain_cols: domain.cols.len(),
        rank: r,
        rect_rows: rect.rows.len(),
        rect_cols: rect.cols.len(),
        rank_s,
        rank_p,
        speaker,
        child_rank,
        rank_split_ok,
        child_rank_ok: 2 * child_rank <= r + 4,
    });
    let left = build_node(f, first, finder, depth + 1, trace)?;
    let right = build_node(f, second, finder, depth + 1, trace)?;
    Ok(ProtocolTree::internal(domain, speaker, left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{inner_product, random_low_rank, LowRankMode};
    use crate::protocol::{exact_cc, verify};

    #[test]
    fn constant_matrix_is_a_leaf() {
        let f = SignMatrix::from_rows(vec![vec![-1; 3]; 4]).unwrap();
        let b = nw_build(&f, &BruteForceFinder).unwrap();
        assert_eq!(b.tree.depth(), 0);
        assert_eq!(b.tree.leaves(), 1);
        assert!(b.trace.is_empty());
    }

    #[test]
    fn inner_product_one() {
        let f = inner_product(1).unwrap();
        for finder in [&BruteForceFinder as &dyn MonoFinder, &GreedyFinder] {
            let b = nw_build(&f, finder).unwrap();
            assert!(verify(&f, &b.tree).pass);
            assert!(b.tree.leaves() <= 3);
            assert!(b.tree.depth() >= exact_cc(&f).unwrap());
        }
    }

    #[test]
    fn rank_split_invariant_on_random_matrices() {
        for seed in 0..10 {
            let f = random_low_rank(9, 8, 4, seed, LowRankMode::BoolProduct).unwrap().dedupe().matrix;
            for finder in [&BruteForceFinder as &dyn MonoFinder, &GreedyFinder] {
                let b = nw_build(&f, finder).unwrap();
                assert!(verify(&f, &b.tree).pass);
                assert!(b.trace.iter().all(|s| s.rank_split_ok && s.child_rank_ok));
                assert!(b.trace.iter().all(|s| s.child_rank <= 1 + s.rank_s.max(s.rank_p)));
            }
        }
    }

    #[test]
    fn pipeline_finder_builds_verified_trees() {
        let f = inner_product(2).unwrap();
        let finder = PipelineFinder::new(3, None, AmplifyOptions::default());
        let b = nw_build(&f, &finder).unwrap();
        assert!(verify(&f, &b.tree).pass);
        let recs = finder.records();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.rows_half && r.cols_half && r.mono_area * 8 >= r.amplified_area));
    }

    #[test]
    fn domain_seed_depends_on_both_sides() {
        let a = Rectangle::new(IndexSet::new(vec![0, 1]), IndexSet::new(vec![2]));
        let b = Rectangle::new(IndexSet::new(vec![0]), IndexSet::new(vec![1, 2]));
        assert_ne!(domain_seed(1, &a), domain_seed(1, &b));
        assert_eq!(domain_seed(1, &a), domain_seed(1, &a.clone()));
    }
}
