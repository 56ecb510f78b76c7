//! Instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SignMatrix};

pub const MAX_INNER_PRODUCT_K: u32 = 6;
pub const MAX_RIGIDITY_ROWS: usize = 5000;
const BOOL_PRODUCT_ATTEMPTS: usize = 1000;

/// `f(x, y) = (−1)^{⟨x, y⟩ mod 2}` over `{0,1}^k`, lexicographic order
/// (bit `k−1−i` of the index is coordinate `i`).
pub fn inner_product(k: u32) -> Result<SignMatrix> {
    if k == 0 {
        return Err(Error::precondition("inner product needs k ≥ 1"));
    }
    if k > MAX_INNER_PRODUCT_K {
        return Err(Error::cap(format!("inner product k={k} exceeds cap {MAX_INNER_PRODUCT_K}")));
    }
    let n = 1usize << k;
    SignMatrix::from_fn(n, n, |x, y| if (x & y).count_ones() % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowRankMode {
    /// Every row is a copy of one of `r` distinct random pattern rows.
    Pattern,
    /// `+1` where the 0/1 factor rows are disjoint, `−1` where they meet,
    /// with `⌊log₂ r⌋` factor columns; rank is checked after sampling.
    BoolProduct,
}

/// A random sign matrix of rank at most `r`, determined by `seed`.
pub fn random_low_rank(n: usize, m: usize, r: usize, seed: u64, mode: LowRankMode) -> Result<SignMatrix> {
    if r == 0 || n == 0 || m == 0 {
        return Err(Error::precondition("dimensions and rank must be positive"));
    }
    if r > n.min(m) {
        return Err(Error::precondition(format!("rank {r} exceeds min({n}, {m})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        LowRankMode::Pattern => {
            let mut patterns: Vec<Vec<i8>> = Vec::with_capacity(r);
            while patterns.len() < r {
                let row: Vec<i8> = (0..m).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
                if !patterns.contains(&row) {
                    patterns.push(row);
                }
            }
            let rows = (0..n).map(|_| patterns.choose(&mut rng).unwrap().clone()).collect();
            SignMatrix::from_rows(rows)
        }
        LowRankMode::BoolProduct => {
            let k = usize::BITS as usize - 1 - r.leading_zeros() as usize;
            for _ in 0..BOOL_PRODUCT_ATTEMPTS {
                let u: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << k)).collect();
                let v: Vec<u32> = (0..m).map(|_| rng.gen_range(0..1u32 << k)).collect();
                let f = SignMatrix::from_fn(n, m, |i, j| if u[i] & v[j] == 0 { 1 } else { -1 })?;
                if f.rank() <= r {
                    return Ok(f);
                }
            }
            Err(Error::Convergence(format!("no bool-product sample of rank ≤ {r} in {BOOL_PRODUCT_ATTEMPTS} attempts")))
        }
    }
}

/// All `w`-subsets of `{0..r}` in lexicographic order of their sorted
/// index tuples.
pub fn weight_subsets(r: usize, w: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, w: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == w {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            if r - i < w - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, r, w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, w, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// `M = N·Nᵗ` where the rows of `N` are all weight-`w` vectors of length `r`.
pub fn rigidity_example(r: usize, w: usize) -> Result<IntMatrix> {
    if w == 0 || w > r {
        return Err(Error::precondition(format!("need 1 ≤ w ≤ r, got w={w}, r={r}")));
    }
    let rows = binomial(r, w);
    if rows > MAX_RIGIDITY_ROWS as u128 {
        return Err(Error::cap(format!("C({r},{w}) = {rows} rows exceeds cap {MAX_RIGIDITY_ROWS}")));
    }
    let n = rigidity_factor(r, w)?;
    n.mul_transpose(&n)
}

/// The 0/1 factor `N` of [`rigidity_example`].
pub fn rigidity_factor(r: usize, w: usize) -> Result<IntMatrix> {
    let subsets = weight_subsets(r, w);
    IntMatrix::from_fn(subsets.len(), r, |i, j| subsets[i].contains(&j) as i64)
}
