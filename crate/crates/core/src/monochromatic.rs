//! Monochromatic sub-rectangles of low-rank, nearly-monochromatic
//! rectangles, plus an exhaustive maximum-monochromatic-rectangle oracle.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::rank::RowBasis;
use crate::rect::{IndexSet, Rectangle};

pub const BRUTE_FORCE_CAP: usize = 20;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoExtraction {
    pub input_rect: Rectangle,
    /// Rows of the input with at most `|B|/(2r)` minority entries.
    pub a_prime: IndexSet,
    /// Rows of `a_prime` spanning the row space of `a_prime × B`.
    pub basis_rows: Vec<usize>,
    /// Columns where every basis row takes the majority value.
    pub b_prime: IndexSet,
    pub output_rect: Rectangle,
    pub color: i8,
    /// The `r` in the thresholds.
    pub r: usize,
    pub restricted_rank: usize,
    /// Minority entries in the input rectangle.
    pub minority_count: usize,
    /// `|A'| ≥ |A|/2`.
    pub rows_half: bool,
    /// `|B'| ≥ |B|/2`.
    pub cols_half: bool,
}

impl MonoExtraction {
    pub fn size_ratio(&self) -> f64 {
        self.output_rect.area() as f64 / self.input_rect.area() as f64
    }
}

/// Extracts a monochromatic `R' ⊆ R` with `|R'| ≥ |R|/8` from a rectangle
/// whose uniform average is at least `1 − 1/(2r)` in absolute value.
///
/// `r` defaults to the rank of `f` restricted to `R`.
pub fn extract_mono(f: &SignMatrix, rect: &Rectangle, r: Option<usize>) -> Result<MonoExtraction> {
    if rect.is_empty() || !rect.within(f.n_rows(), f.n_cols()) {
        return Err(Error::precondition(format!("rectangle {rect} is empty or out of bounds")));
    }
    let restricted_rank = f.rank_on(rect);
    let r = r.unwrap_or(restricted_rank).max(1);
    let (minus, plus) = f.count_signs(rect);
    let area = rect.area();
    // avg = (plus − minus)/area ≥ 1 − 1/(2r)  ⇔  2r·(plus − minus) ≥ (2r − 1)·area
    let meets = |maj: usize, min: usize| 2 * r as i64 * (maj as i64 - min as i64) >= (2 * r as i64 - 1) * area as i64;
    let majority: i8 = if meets(plus, minus) {
        1
    } else if meets(minus, plus) {
        -1
    } else {
        return Err(Error::precondition(format!("average below 1 − 1/2r (r = {r}, {plus} plus / {minus} minus)")));
    };
    let minority_count = if majority > 0 { minus } else { plus };

    let b = &rect.cols;
    let a_prime: IndexSet = rect
        .rows
        .iter()
        .filter(|&i| {
            let bad = b.iter().filter(|&j| f.get(i, j) != majority).count();
            2 * r * bad <= b.len()
        })
        .collect();

    let mut basis = RowBasis::new();
    let mut basis_rows = Vec::new();
    for i in a_prime.iter() {
        let v: Vec<i64> = b.iter().map(|j| f.get(i, j) as i64).collect();
        if basis.insert(&v) {
            basis_rows.push(i);
        }
    }

    let b_prime: IndexSet = b.iter().filter(|&j| basis_rows.iter().all(|&i| f.get(i, j) == majority)).collect();
    if b_prime.is_empty() || a_prime.is_empty() {
        return Err(Error::invariant("empty B' or A' despite the average condition"));
    }

    // Every row of A' is a combination of the basis rows, which are all
    // equal on B', so each such row is constant there.
    let mut plus_rows = Vec::new();
    let mut minus_rows = Vec::new();
    for i in a_prime.iter() {
        let first = f.get(i, b_prime.as_slice()[0]);
        if b_prime.iter().any(|j| f.get(i, j) != first) {
            return Err(Error::invariant(format!("row {i} is not constant on B'")));
        }
        if first > 0 {
            plus_rows.push(i);
        } else {
            minus_rows.push(i);
        }
    }
    let (rows, color) = if plus_rows.len() >= minus_rows.len() { (plus_rows, 1) } else { (minus_rows, -1) };
    let output_rect = Rectangle::new(IndexSet::new(rows), b_prime.clone());

    Ok(MonoExtraction {
        input_rect: rect.clone(),
        rows_half: 2 * a_prime.len() >= rect.rows.len(),
        cols_half: 2 * b_prime.len() >= b.len(),
        a_prime,
        basis_rows,
        b_prime,
        output_rect,
        color,
        r,
        restricted_rank,
        minority_count,
    })
}

/// A maximum-area monochromatic rectangle, by enumerating row subsets of the
/// smaller side with column closure. Ties: larger area, then smaller row
/// set, then smaller column set, then `+1`.
pub fn brute_force_max_mono(f: &SignMatrix) -> Result<(Rectangle, i8)> {
    let transposed = f.n_cols() < f.n_rows();
    let g = if transposed { f.transpose() } else { f.clone() };
    let (k, m) = (g.n_rows(), g.n_cols());
    if k > BRUTE_FORCE_CAP {
        return Err(Error::cap(format!("smaller side {k} exceeds cap {BRUTE_FORCE_CAP}")));
    }
    let mut best: Option<(usize, Rectangle, i8)> = None;
    for color in [1i8, -1] {
        let lines: Vec<FixedBitSet> = (0..k)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(m);
                for j in 0..m {
                    if g.get(i, j) == color {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        let mut chosen = Vec::new();
        let mut all = FixedBitSet::with_capacity(m);
        all.insert_range(..);
        dfs(&lines, 0, &all, &mut chosen, &mut |rows: &[usize], cols: &FixedBitSet| {
            let area = rows.len() * cols.count_ones(..);
            if area == 0 {
                return;
            }
            let cols: Vec<usize> = cols.ones().collect();
            let rect = if transposed {
                Rectangle::new(IndexSet::new(cols), IndexSet::new(rows.to_vec()))
            } else {
                Rectangle::new(IndexSet::new(rows.to_vec()), IndexSet::new(cols))
            };
            let replace = match &best {
                None => true,
                Some((a, r, c)) => {
                    area > *a
                        || (area == *a
                            && (rect.rows.len(), &rect.rows, rect.cols.len(), &rect.cols, -color)
                                < (r.rows.len(), &r.rows, r.cols.len(), &r.cols, -*c))
                }
            };
            if replace {
                best = Some((area, rect, color));
            }
        });
    }
    let (_, rect, color) = best.expect("a single cell is always monochromatic");
    Ok((rect, color))
}

fn dfs(
    lines: &[FixedBitSet],
    start: usize,
    cols: &FixedBitSet,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], &FixedBitSet),
) {
    for i in start..lines.len() {
        let mut next = cols.clone();
        next.intersect_with(&lines[i]);
        if next.count_ones(..) == 0 {
            continue;
        }
        chosen.push(i);
        visit(chosen, &next);
        dfs(lines, i + 1, &next, chosen, visit);
        chosen.pop();
    }
}
