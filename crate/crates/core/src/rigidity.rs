//! Zero rectangles in sparse low-rank matrices and rigidity decompositions.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rect::{IndexSet, Rectangle};

/// Node budget for [`SearchMode::Exact`].
pub const EXACT_NODE_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    MaxMinSide,
    MaxArea,
}

impl Target {
    /// Comparison key: the target first, the other measure second.
    fn key(self, a: usize, b: usize) -> (usize, usize) {
        match self {
            Target::MaxMinSide => (a.min(b), a * b),
            Target::MaxArea => (a * b, a.min(b)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroRectReport {
    pub rect: Rectangle,
    pub min_side: usize,
    pub area: usize,
    /// Fraction of nonzero entries.
    pub sparsity: f64,
    pub rank: usize,
    /// `min(|A|, |B|) / (n·exp(−√(εr)))` with `n` the row count.
    pub bound_ratio: f64,
    pub mode: SearchMode,
    pub target: Target,
    /// Whether the rectangle is proven optimal.
    pub certified: bool,
    pub nodes: u64,
}

/// `nonzeros / (n·m)`.
pub fn sparsity(m: &IntMatrix) -> f64 {
    m.nonzeros() as f64 / (m.n_rows() * m.n_cols()) as f64
}

/// `min_side / (n·exp(−√(εr)))`.
pub fn bound_ratio(min_side: usize, n: usize, eps: f64, rank: usize) -> f64 {
    min_side as f64 / (n as f64 * (-(eps * rank as f64).sqrt()).exp())
}

/// Largest all-zero rectangle of `m` under `target`, with the exact rank.
pub fn zero_rectangle(m: &IntMatrix, mode: SearchMode, target: Target) -> Result<ZeroRectReport> {
    zero_rectangle_with(m, mode, target, None, EXACT_NODE_CAP)
}

/// [`zero_rectangle`] with an optional rank override and an explicit node
/// budget for exact mode.
pub fn zero_rectangle_with(
    m: &IntMatrix,
    mode: SearchMode,
    target: Target,
    rank: Option<usize>,
    node_cap: u64,
) -> Result<ZeroRectReport> {
    let (rect, nodes) = match mode {
        SearchMode::Exact => exact_search(m, target, node_cap)?,
        SearchMode::Heuristic => (heuristic_search(m, target), 0),
    };
    if !m.is_zero_on(&rect) {
        return Err(Error::invariant(format!("zero rectangle {rect} has a nonzero entry")));
    }
    let eps = sparsity(m);
    let rank = rank.unwrap_or_else(|| m.rank());
    let min_side = rect.rows.len().min(rect.cols.len());
    Ok(ZeroRectReport {
        min_side,
        area: rect.area(),
        rect,
        sparsity: eps,
        rank,
        bound_ratio: bound_ratio(min_side, m.n_rows(), eps, rank),
        mode,
        target,
        certified: mode == SearchMode::Exact,
        nodes,
    })
}

/// Zero pattern as bitsets: for each row the zero columns, for each column
/// the zero rows.
struct Pattern {
    row_zeros: Vec<FixedBitSet>,
    col_zeros: Vec<FixedBitSet>,
    n: usize,
    m: usize,
}

impl Pattern {
    fn new(mat: &IntMatrix, transposed: bool) -> Self {
        let (n, m) = if transposed { (mat.n_cols(), mat.n_rows()) } else { (mat.n_rows(), mat.n_cols()) };
        let get = |i: usize, j: usize| if transposed { mat.get(j, i) } else { mat.get(i, j) };
        let mut row_zeros = vec![FixedBitSet::with_capacity(m); n];
        let mut col_zeros = vec![FixedBitSet::with_capacity(n); m];
        for i in 0..n {
            for j in 0..m {
                if get(i, j) == 0 {
                    row_zeros[i].insert(j);
                    col_zeros[j].insert(i);
                }
            }
        }
        Pattern { row_zeros, col_zeros, n, m }
    }

    /// Rows that vanish on every column of `cols`.
    fn rows_of(&self, cols: &FixedBitSet) -> FixedBitSet {
        let mut a = FixedBitSet::with_capacity(self.n);
        a.insert_range(..);
        for c in cols.ones() {
            a.intersect_with(&self.col_zeros[c]);
        }
        a
    }

    fn rect(&self, rows: &FixedBitSet, cols: &FixedBitSet, transposed: bool) -> Rectangle {
        let r: IndexSet = rows.ones().collect();
        let c: IndexSet = cols.ones().collect();
        if r.is_empty() || c.is_empty() {
            return Rectangle::empty();
        }
        if transposed {
            Rectangle::new(c, r)
        } else {
            Rectangle::new(r, c)
        }
    }
}

struct Exact<'a> {
    p: &'a Pattern,
    target: Target,
    best: (usize, usize),
    best_rows: FixedBitSet,
    best_cols: FixedBitSet,
    nodes: u64,
    cap: u64,
}

impl Exact<'_> {
    /// Close-by-one enumeration of closed (rows, cols) pairs of the zero
    /// pattern. Descendants only add rows at index `≥ from`, and each added
    /// row must vanish on the remaining columns, which bounds both sides.
    fn visit(&mut self, rows: &FixedBitSet, cols: &FixedBitSet, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::cap(format!(
                "exact zero-rectangle search exceeded {} nodes; use heuristic mode",
                self.cap
            )));
        }
        let (a, b) = (rows.count_ones(..), cols.count_ones(..));
        let key = self.target.key(a, b);
        if key > self.best {
            self.best = key;
            self.best_rows = rows.clone();
            self.best_cols = cols.clone();
        }
        let mut counts: Vec<usize> = (from..self.p.n)
            .filter(|&j| !rows.contains(j))
            .map(|j| self.p.row_zeros[j].intersection_count(cols))
            .filter(|&c| c > 0)
            .collect();
        counts.sort_unstable_by(|x, y| y.cmp(x));
        let mut bound_min = 0;
        let mut bound_area = 0;
        for (k, &c) in counts.iter().enumerate() {
            let (h, w) = (a + k + 1, c);
            bound_min = bound_min.max(h.min(w));
            bound_area = bound_area.max(h * w);
        }
        let bound = match self.target {
            Target::MaxMinSide => (bound_min, bound_area),
            Target::MaxArea => (bound_area, bound_min),
        };
        if bound <= self.best {
            return Ok(());
        }
        for j in from..self.p.n {
            if rows.contains(j) {
                continue;
            }
            let mut cols2 = cols.clone();
            cols2.intersect_with(&self.p.row_zeros[j]);
            if cols2.is_clear() {
                continue;
            }
            let rows2 = self.p.rows_of(&cols2);
            // canonical: the closure adds no row before j
            let canonical = (0..j).all(|i| rows2.contains(i) == rows.contains(i));
            if canonical {
                self.visit(&rows2, &cols2, j + 1)?;
            }
        }
        Ok(())
    }
}

fn exact_search(mat: &IntMatrix, target: Target, cap: u64) -> Result<(Rectangle, u64)> {
    let transposed = mat.n_rows() > mat.n_cols();
    let p = Pattern::new(mat, transposed);
    let mut cols = FixedBitSet::with_capacity(p.m);
    cols.insert_range(..);
    let rows = p.rows_of(&cols);
    let mut s = Exact {
        p: &p,
        target,
        best: (0, 0),
        best_rows: FixedBitSet::with_capacity(p.n),
        best_cols: FixedBitSet::with_capacity(p.m),
        nodes: 0,
        cap,
    };
    s.visit(&rows, &cols, 0)?;
    Ok((p.rect(&s.best_rows, &s.best_cols, transposed), s.nodes))
}

/// Greedy row addition from every seed row, then single-row swaps.
fn heuristic_search(mat: &IntMatrix, target: Target) -> Rectangle {
    let p = Pattern::new(mat, false);
    let eval = |rows: &[usize]| -> (FixedBitSet, (usize, usize)) {
        let mut cols = FixedBitSet::with_capacity(p.m);
        cols.insert_range(..);
        for &r in rows {
            cols.intersect_with(&p.row_zeros[r]);
        }
        let k = target.key(rows.len(), cols.count_ones(..));
        (cols, k)
    };
    let mut best: (Vec<usize>, (usize, usize)) = (Vec::new(), (0, 0));
    for seed in 0..p.n {
        let mut rows = vec![seed];
        let mut cur = eval(&rows).1;
        loop {
            let mut step: Option<(usize, (usize, usize))> = None;
            for j in 0..p.n {
                if rows.contains(&j) {
                    continue;
                }
                rows.push(j);
                let k = eval(&rows).1;
                rows.pop();
                if k > cur && step.is_none_or(|(_, s)| k > s) {
                    step = Some((j, k));
                }
            }
            if step.is_none() {
                // one swap: drop a row, add another
                'swap: for out in 0..rows.len() {
                    for j in 0..p.n {
                        if rows.contains(&j) {
                            continue;
                        }
                        let mut trial = rows.clone();
                        trial[out] = j;
                        let k = eval(&trial).1;
                        if k > cur {
                            rows = trial;
                            cur = k;
                            step = Some((usize::MAX, k));
                            break 'swap;
                        }
                    }
                }
                if step.is_none() {
                    break;
                }
                continue;
            }
            let (j, k) = step.unwrap();
            rows.push(j);
            cur = k;
        }
        if cur > best.1 {
            best = (rows, cur);
        }
    }
    let (cols, _) = eval(&best.0);
    let closed = p.rows_of(&cols);
    p.rect(&closed, &cols, false)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n_rows: usize,
    pub n_cols: usize,
    pub nonzeros: usize,
    pub sparsity: f64,
    pub rank: usize,
    pub rank_overridden: bool,
    pub sqrt_eps_r: f64,
    /// `n·exp(−√(εr))`.
    pub bound: f64,
    pub bound_ratio: f64,
    pub zero_rect: ZeroRectReport,
}

/// Measures how a matrix compares with the conjectured zero-rectangle size
/// `n·exp(−√(εr))`. Reports the ratio only; no pass/fail.
pub fn conjecture_check(m: &IntMatrix, rank: Option<usize>) -> Result<ConjectureReport> {
    let zr = zero_rectangle_with(m, SearchMode::Exact, Target::MaxMinSide, rank, EXACT_NODE_CAP)?;
    let sqrt_eps_r = (zr.sparsity * zr.rank as f64).sqrt();
    Ok(ConjectureReport {
        n_rows: m.n_rows(),
        n_cols: m.n_cols(),
        nonzeros: m.nonzeros(),
        sparsity: zr.sparsity,
        rank: zr.rank,
        rank_overridden: rank.is_some(),
        sqrt_eps_r,
        bound: m.n_rows() as f64 * (-sqrt_eps_r).exp(),
        bound_ratio: zr.bound_ratio,
        zero_rect: zr,
    })
}

/// `M = L + S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityDecomposition {
    pub m: IntMatrix,
    pub l: IntMatrix,
    pub s: IntMatrix,
}

impl RigidityDecomposition {
    /// `M = L + S`; errors when shapes or entries disagree.
    pub fn new(m: IntMatrix, l: IntMatrix, s: IntMatrix) -> Result<Self> {
        let d = RigidityDecomposition { m, l, s };
        d.check()?;
        Ok(d)
    }

    /// `M = L + S`.
    pub fn from_parts(l: IntMatrix, s: IntMatrix) -> Result<Self> {
        let m = l.add(&s)?;
        Ok(RigidityDecomposition { m, l, s })
    }

    pub fn check(&self) -> Result<()> {
        let sum = self.l.add(&self.s).map_err(|e| Error::Verification(e.to_string()))?;
        if sum != self.m {
            let k = (0..sum.entries().len()).find(|&k| sum.entries()[k] != self.m.entries()[k]).unwrap_or(0);
            let (i, j) = (k / self.m.n_cols(), k % self.m.n_cols());
            return Err(Error::Verification(format!("M ≠ L + S at ({i}, {j})")));
        }
        Ok(())
    }

    /// Nonzero count of `S`.
    pub fn sparsity_count(&self) -> usize {
        self.s.nonzeros()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub r: usize,
    pub s_nonzeros: usize,
    pub rank_m: usize,
    pub rank_l: usize,
    pub rank_s: usize,
    /// `rank(S) ≤ rank(M) + rank(L)`.
    pub subadditive: bool,
    pub zero_rect: Rectangle,
    pub zero_rect_certified: bool,
    pub min_side: usize,
    /// `M = L` on the zero rectangle of `S`.
    pub m_equals_l: bool,
    /// `rank(M)` on the zero rectangle; bounded by `rank(L)`.
    pub rank_m_on_rect: usize,
    /// `min(|A|, |B|) ≥ r`.
    pub triggered: bool,
    pub rank_l_below_r: bool,
    /// Rank of the leading `r × r` minor of `M` inside the rectangle.
    pub minor_rank: Option<usize>,
    pub minor_full_rank: Option<bool>,
    /// Triggered, `rank(L) < r` and a full-rank minor: `rank(L) ≥ r` is
    /// forced, a contradiction.
    pub contradiction: bool,
    /// Triggered with `rank(L) < r` but the minor is singular: the argument
    /// needs every `r × r` minor of `M` to have full rank.
    pub minor_hypothesis_fails: bool,
}

/// Re-runs the rigidity argument on a concrete decomposition: `S` sparse
/// leaves a large zero rectangle, on which `M = L`, so `rank(L)` is at least
/// the rank of `M` there.
pub fn verify_rigidity_decomposition(dec: &RigidityDecomposition, r: usize) -> Result<DecompositionReport> {
    dec.check()?;
    let (rank_m, rank_l, rank_s) = (dec.m.rank(), dec.l.rank(), dec.s.rank());
    let (rect, certified) = match zero_rectangle(&dec.s, SearchMode::Exact, Target::MaxMinSide) {
        Ok(z) => (z.rect, true),
        Err(Error::Cap(_)) => (zero_rectangle(&dec.s, SearchMode::Heuristic, Target::MaxMinSide)?.rect, false),
        Err(e) => return Err(e),
    };
    let min_side = rect.rows.len().min(rect.cols.len());
    let m_equals_l = rect.cells().all(|(i, j)| dec.m.get(i, j) == dec.l.get(i, j));
    let rank_m_on_rect = dec.m.rank_on(&rect);
    let triggered = min_side >= r;
    let rank_l_below_r = rank_l < r;
    let minor_rank = (triggered && r > 0).then(|| {
        let minor = Rectangle::new(rect.rows.iter().take(r).collect(), rect.cols.iter().take(r).collect());
        dec.m.rank_on(&minor)
    });
    let minor_full_rank = minor_rank.map(|k| k == r);
    Ok(DecompositionReport {
        r,
        s_nonzeros: dec.sparsity_count(),
        rank_m,
        rank_l,
        rank_s,
        subadditive: rank_s <= rank_m + rank_l,
        zero_rect: rect,
        zero_rect_certified: certified,
        min_side,
        m_equals_l,
        rank_m_on_rect,
        triggered,
        rank_l_below_r,
        minor_rank,
        minor_full_rank,
        contradiction: triggered && rank_l_below_r && minor_full_rank == Some(true),
        minor_hypothesis_fails: triggered && rank_l_below_r && minor_full_rank == Some(false),
    })
}
