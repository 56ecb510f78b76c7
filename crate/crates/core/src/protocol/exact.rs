//! Deterministic communication complexity of tiny matrices by exhaustive
//! search.

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;

/// Largest side accepted by [`exact_cc`].
pub const EXACT_CC_CAP: usize = 8;

const UNKNOWN: u8 = u8::MAX;

/// `D(R) = 0` for monochromatic `R`, otherwise the minimum over splits of
/// either side into two nonempty parts of `1 + max(D(R₁), D(R₂))`.
pub fn exact_cc(f: &SignMatrix) -> Result<usize> {
    exact_cc_capped(f, EXACT_CC_CAP)
}

pub fn exact_cc_capped(f: &SignMatrix, cap: usize) -> Result<usize> {
    let (n, m) = (f.n_rows(), f.n_cols());
    if n > cap || m > cap || n > 8 || m > 8 {
        return Err(Error::cap(format!("exact_cc needs at most {cap}×{cap} (max 8×8), got {n}×{m}")));
    }
    // row masks of +1 and −1 entries for each column
    let mut plus = vec![0u8; m];
    let mut minus = vec![0u8; m];
    for i in 0..n {
        for j in 0..m {
            if f.get(i, j) > 0 {
                plus[j] |= 1 << i;
            } else {
                minus[j] |= 1 << i;
            }
        }
    }
    let mut s = Search { plus, minus, memo: vec![UNKNOWN; 1 << 16] };
    let full_rows = ((1u16 << n) - 1) as u8;
    let full_cols = ((1u16 << m) - 1) as u8;
    Ok(s.solve(full_rows, full_cols) as usize)
}

struct Search {
    plus: Vec<u8>,
    minus: Vec<u8>,
    memo: Vec<u8>,
}

impl Search {
    fn mono(&self, rows: u8, cols: u8) -> bool {
        let (mut any_p, mut any_m) = (false, false);
        for j in bits(cols) {
            any_p |= self.plus[j] & rows != 0;
            any_m |= self.minus[j] & rows != 0;
        }
        !(any_p && any_m)
    }

    fn solve(&mut self, rows: u8, cols: u8) -> u8 {
        let key = (rows as usize) << 8 | cols as usize;
        if self.memo[key] != UNKNOWN {
            return self.memo[key];
        }
        let ans = if self.mono(rows, cols) {
            0
        } else {
            let mut best = UNKNOWN;
            for (side, mask) in [(0, rows), (1, cols)] {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                // part containing the lowest element; its complement is nonempty
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    if a != mask && best > 1 {
                        let b = mask ^ a;
                        let (r1, c1, r2, c2) = if side == 0 { (a, cols, b, cols) } else { (rows, a, rows, b) };
                        let d1 = self.solve(r1, c1);
                        if d1 + 1 < best {
                            let d2 = self.solve(r2, c2);
                            best = best.min(1 + d1.max(d2));
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
            best
        };
        self.memo[key] = ans;
        ans
    }
}

fn bits(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |b| mask >> b & 1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::inner_product;

    #[test]
    fn small_values() {
        let c = SignMatrix::from_rows(vec![vec![1; 5]; 3]).unwrap();
        assert_eq!(exact_cc(&c).unwrap(), 0);
        let f = SignMatrix::from_rows(vec![vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(exact_cc(&f).unwrap(), 2);
        let g = SignMatrix::from_rows(vec![vec![1, 1], vec![-1, -1]]).unwrap();
        assert_eq!(exact_cc(&g).unwrap(), 1);
    }

    #[test]
    fn identity_needs_log_plus_one() {
        for n in [2usize, 4, 8] {
            let f = SignMatrix::from_fn(n, n, |i, j| if i == j { 1 } else { -1 }).unwrap();
            let want = (n as f64).log2().ceil() as usize + 1;
            assert_eq!(exact_cc(&f).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn inner_product_two() {
        let f = inner_product(2).unwrap();
        // 0/1 versions of the two colours have ranks 3 and 4, so at least 7 leaves
        assert_eq!(exact_cc(&f).unwrap(), 3);
    }

    #[test]
    fn cap() {
        let f = SignMatrix::from_rows(vec![vec![1; 9]; 2]).unwrap();
        assert!(matches!(exact_cc(&f), Err(Error::Cap(_))));
    }
}
