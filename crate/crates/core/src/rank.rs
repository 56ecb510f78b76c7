//! Exact rank by fraction-free (Bareiss) elimination.
//!
//! Elimination first runs on `i128` with checked arithmetic; if any
//! intermediate overflows it restarts on arbitrary-precision integers.
//! Every intermediate value is a minor of the input, so the divisions are
//! exact and the result never depends on a floating threshold.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over the rationals of a row-major `rows × cols` integer matrix.
pub fn rank_of(rows: usize, cols: usize, data: &[i64]) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    let (r, c, buf): (usize, usize, Vec<i64>) = if rows > cols {
        let mut t = vec![0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                t[j * rows + i] = data[i * cols + j];
            }
        }
        (cols, rows, t)
    } else {
        (rows, cols, data.to_vec())
    };
    match bareiss_i128(r, c, &buf) {
        Some(k) => k,
        None => bareiss_big(r, c, &buf),
    }
}

fn bareiss_i128(rows: usize, cols: usize, data: &[i64]) -> Option<usize> {
    let mut a: Vec<i128> = data.iter().map(|&x| x as i128).collect();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let piv = a[rank * cols + c];
        for i in rank + 1..rows {
            let lead = a[i * cols + c];
            for j in c + 1..cols {
                let x = piv.checked_mul(a[i * cols + j])?.checked_sub(lead.checked_mul(a[rank * cols + j])?)?;
                a[i * cols + j] = x / prev;
            }
            a[i * cols + c] = 0;
        }
        prev = piv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(rows: usize, cols: usize, data: &[i64]) -> usize {
    let mut a: Vec<BigInt> = data.iter().map(|&x| BigInt::from(x)).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let piv = a[rank * cols + c].clone();
        for i in rank + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let x = &piv * &a[i * cols + j] - &lead * &a[rank * cols + j];
                a[i * cols + j] = x / &prev;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Greedy row basis: feeds vectors in order and keeps those that are
/// linearly independent of the ones kept so far.
///
/// Stored rows are kept in echelon form with content (gcd) removed, so
/// entries stay small for ±1 inputs.
#[derive(Debug, Default, Clone)]
pub struct RowBasis {
    pivots: Vec<(usize, Vec<BigInt>)>,
}

impl RowBasis {
    pub fn new() -> Self {
        RowBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis; keeps it and returns true if it is
    /// independent.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (pc, prow) in &self.pivots {
            if w[*pc].is_zero() {
                continue;
            }
            let a = prow[*pc].clone();
            let b = w[*pc].clone();
            for (x, y) in w.iter_mut().zip(prow.iter()) {
                *x = &a * &*x - &b * y;
            }
            normalize(&mut w);
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                // Keep pivot columns sorted so later reductions stay in echelon order.
                let at = self.pivots.partition_point(|(c, _)| *c < pc);
                self.pivots.insert(at, (pc, w));
                true
            }
            None => false,
        }
    }
}

fn normalize(w: &mut [BigInt]) {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for x in w.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
}
