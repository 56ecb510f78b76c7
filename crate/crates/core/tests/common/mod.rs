//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use logrank_core::{IntMatrix, SignMatrix};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    let s = x.to_string();
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

/// Rank by Gaussian elimination over the rationals.
pub fn rank_q(rows: usize, cols: usize, data: &[i64]) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..rows).map(|i| (0..cols).map(|j| q(data[i * cols + j])).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] / &a[rank][c];
            for k in c..cols {
                let d = &factor * &a[rank][k];
                a[i][k] -= d;
            }
        }
        rank += 1;
    }
    rank
}

pub fn sign_rank(f: &SignMatrix, rows: &[usize], cols: &[usize]) -> usize {
    let data: Vec<i64> = rows.iter().flat_map(|&i| cols.iter().map(move |&j| f.get(i, j) as i64)).collect();
    rank_q(rows.len(), cols.len(), &data)
}

pub fn int_rank(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> usize {
    let data: Vec<i64> = rows.iter().flat_map(|&i| cols.iter().map(move |&j| m.get(i, j))).collect();
    rank_q(rows.len(), cols.len(), &data)
}

fn bits(mask: u64, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| mask >> i & 1 == 1)
}

/// `max_R |Σ_{(x,y)∈R} μ(x,y)·f(x,y)|` over every pair of row and column
/// subsets.
pub fn brute_disc_mu(f: &SignMatrix, mu: &[BigRational]) -> BigRational {
    let (n, m) = (f.n_rows(), f.n_cols());
    let mut best = BigRational::zero();
    for rm in 1u64..1 << n {
        for cm in 1u64..1 << m {
            let mut s = BigRational::zero();
            for i in bits(rm, n) {
                for j in bits(cm, m) {
                    let w = &mu[i * m + j];
                    if f.get(i, j) > 0 {
                        s += w;
                    } else {
                        s -= w;
                    }
                }
            }
            let s = s.abs();
            if s > best {
                best = s;
            }
        }
    }
    best
}

/// Value of the zero-sum game paying `a[i][j]` to the maximizing row
/// player, by the textbook simplex method with Bland's rule over the
/// rationals.
pub fn game_value(a: &[Vec<i64>]) -> BigRational {
    let m = a.len();
    let n = a[0].len();
    let shift = 1 - a.iter().flatten().copied().min().unwrap().min(0);
    // max Σy  s.t.  (A + shift)·y ≤ 1, y ≥ 0;  value + shift = 1/Σy
    let width = n + m;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = a[i].iter().map(|&x| q(x + shift)).collect();
            row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            row.push(BigRational::one());
            row
        })
        .collect();
    let mut obj: Vec<BigRational> =
        (0..=width).map(|j| if j < n { BigRational::one() } else { BigRational::zero() }).collect();
    let mut basis: Vec<usize> = (n..width).collect();
    loop {
        let Some(e) = (0..width).find(|&j| obj[j].is_positive()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][width] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("bounded");
        let piv = t[l][e].clone();
        for x in t[l].iter_mut() {
            *x /= &piv;
        }
        for i in 0..m {
            if i != l && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for k in 0..=width {
                    let d = &f * &t[l][k];
                    t[i][k] -= d;
                }
            }
        }
        let f = obj[e].clone();
        for k in 0..=width {
            let d = &f * &t[l][k];
            obj[k] -= d;
        }
        basis[l] = e;
    }
    let total = -obj[width].clone();
    total.recip() - q(shift)
}

/// Every nonempty signed rectangle of an `n × m` grid as (row mask, column
/// mask, sign).
pub fn signed_rectangles(n: usize, m: usize) -> Vec<(u64, u64, i64)> {
    let mut out = Vec::new();
    for rm in 1u64..1 << n {
        for cm in 1u64..1 << m {
            out.push((rm, cm, 1));
            out.push((rm, cm, -1));
        }
    }
    out
}

/// `disc(f)` as the exact value of the full game between signed rectangles
/// and cells.
pub fn exact_disc(f: &SignMatrix) -> BigRational {
    let (n, m) = (f.n_rows(), f.n_cols());
    let rects = signed_rectangles(n, m);
    // cells maximize the negated payoff, so disc = −value
    let payoff: Vec<Vec<i64>> = (0..n * m)
        .map(|c| {
            let (i, j) = (c / m, c % m);
            rects
                .iter()
                .map(|&(rm, cm, s)| if rm >> i & 1 == 1 && cm >> j & 1 == 1 { -s * f.get(i, j) as i64 } else { 0 })
                .collect()
        })
        .collect();
    -game_value(&payoff)
}

/// Largest zero rectangle by enumerating row subsets: `(max min-side,
/// max area)`.
pub fn brute_zero_rect(m: &IntMatrix) -> (usize, usize) {
    let (n, k) = (m.n_rows(), m.n_cols());
    assert!(n <= 16);
    let zero_cols: Vec<u64> =
        (0..n).map(|i| (0..k).filter(|&j| m.get(i, j) == 0).fold(0u64, |acc, j| acc | 1 << j)).collect();
    let (mut side, mut area) = (0, 0);
    for rm in 1u64..1 << n {
        let cols = bits(rm, n).fold(u64::MAX >> (64 - k.max(1)), |acc, i| acc & zero_cols[i]);
        let (a, b) = (rm.count_ones() as usize, cols.count_ones() as usize);
        side = side.max(a.min(b));
        area = area.max(a * b);
    }
    (side, area)
}

pub fn is_monochromatic(f: &SignMatrix, rows: &[usize], cols: &[usize]) -> Option<i8> {
    let v = f.get(*rows.first()?, *cols.first()?);
    rows.iter().all(|&i| cols.iter().all(|&j| f.get(i, j) == v)).then_some(v)
}
