//! Dense simplex solver for finite two-player zero-sum games.
//!
//! The row player maximizes, the column player minimizes. Payoffs are
//! shifted to be at least one so the column player's program
//!
//! ```text
//! maximize 1ᵀw   subject to   B w ≤ 1,  w ≥ 0
//! ```
//!
//! starts from the all-slack basis. At the optimum `value = 1/Σw − shift`,
//! the column strategy is `w / Σw` and the row strategy is read from the
//! duals of the slack columns.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;
/// Degenerate pivots in a row before switching to Bland's rule.
const BLAND_AFTER: usize = 64;
/// Scale of the right-hand-side perturbation that breaks ties between
/// degenerate vertices. The final basis is re-evaluated at the true
/// right-hand side.
const PERTURB: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct GameSolution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub pivots: usize,
}

/// Solves the game with `payoff[i][j]` paid to the row player.
pub fn solve_zero_sum(payoff: &[Vec<f64>]) -> Result<GameSolution> {
    let m = payoff.len();
    let n = payoff.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return Err(Error::precondition("game needs at least one strategy per player"));
    }
    if payoff.iter().any(|r| r.len() != n) {
        return Err(Error::precondition("ragged payoff matrix"));
    }
    if m > n {
        // The tableau has one row per row strategy; solve the smaller side.
        let flipped: Vec<Vec<f64>> = (0..n).map(|j| payoff.iter().map(|r| -r[j]).collect()).collect();
        let s = solve_tableau(&flipped)?;
        return Ok(GameSolution {
            value: -s.value,
            row_strategy: s.col_strategy,
            col_strategy: s.row_strategy,
            pivots: s.pivots,
        });
    }
    solve_tableau(payoff)
}

fn solve_tableau(payoff: &[Vec<f64>]) -> Result<GameSolution> {
    let m = payoff.len();
    let n = payoff[0].len();
    let min = payoff.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::precondition("payoffs must be finite"));
    }
    let shift = 1.0 - min;

    // Columns: n structural, m slack, then rhs.
    let width = n + m + 1;
    let mut t = vec![0.0; (m + 1) * width];
    for (i, row) in payoff.iter().enumerate() {
        if row.len() != n {
            return Err(Error::precondition("ragged payoff matrix"));
        }
        for (j, &a) in row.iter().enumerate() {
            t[i * width + j] = a + shift;
        }
        t[i * width + n + i] = 1.0;
        let jitter = ((i as u64).wrapping_mul(2_654_435_761) % 1024) as f64 / 1024.0;
        t[i * width + n + m] = 1.0 + PERTURB * (1.0 + jitter);
    }
    let obj = m * width;
    for j in 0..n {
        t[obj + j] = -1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut pivots = 0;
    let mut degenerate_run = 0;
    loop {
        let bland = degenerate_run >= BLAND_AFTER;
        let entering = if bland {
            (0..n + m).find(|&j| t[obj + j] < -PIVOT_EPS)
        } else {
            let mut best = None;
            let mut best_val = -PIVOT_EPS;
            for j in 0..n + m {
                if t[obj + j] < best_val {
                    best_val = t[obj + j];
                    best = Some(j);
                }
            }
            best
        };
        let Some(e) = entering else { break };

        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = t[i * width + e];
            if a > PIVOT_EPS {
                let ratio = t[i * width + n + m] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && basis[i] < basis[l]),
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        // The feasible region is bounded (B ≥ 1 entrywise), so some row qualifies.
        let Some(l) = leave else {
            return Err(Error::invariant("unbounded direction in a bounded game program"));
        };
        if best_ratio <= 1e-15 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }

        let p = t[l * width + e];
        for j in 0..width {
            t[l * width + j] /= p;
        }
        for i in 0..=m {
            if i == l {
                continue;
            }
            let factor = t[i * width + e];
            if factor != 0.0 {
                for j in 0..width {
                    let v = t[l * width + j];
                    if v != 0.0 {
                        t[i * width + j] -= factor * v;
                    }
                }
            }
        }
        basis[l] = e;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Convergence("simplex pivot limit reached".into()));
        }
    }

    // x_B = B⁻¹·1, read from the slack block
    let exact_rhs: Vec<f64> = (0..m).map(|i| t[i * width + n..i * width + n + m].iter().sum()).collect();
    let feasible = exact_rhs.iter().all(|&x| x >= -1e-12);
    let mut w = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            w[b] = if feasible { exact_rhs[i].max(0.0) } else { t[i * width + n + m] };
        }
    }
    let z: f64 = w.iter().sum();
    if z <= 0.0 {
        return Err(Error::invariant("non-positive optimum in game program"));
    }
    let u: Vec<f64> = (0..m).map(|i| t[obj + n + i]).collect();
    Ok(GameSolution { value: 1.0 / z - shift, row_strategy: normalize(&u), col_strategy: normalize(&w), pivots })
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let c: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    let s: f64 = c.iter().sum();
    c.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn guaranteed(payoff: &[Vec<f64>], sol: &GameSolution) -> (f64, f64) {
        let n = payoff[0].len();
        let lower = (0..n)
            .map(|j| payoff.iter().zip(&sol.row_strategy).map(|(r, x)| r[j] * x).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let upper = payoff
            .iter()
            .map(|r| r.iter().zip(&sol.col_strategy).map(|(a, y)| a * y).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        (lower, upper)
    }

    #[test]
    fn matching_pennies() {
        let p = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        let s = solve_zero_sum(&p).unwrap();
        assert!(s.value.abs() < 1e-12);
        assert!((s.row_strategy[0] - 0.5).abs() < 1e-12);
        assert!((s.col_strategy[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rock_paper_scissors_variant() {
        // Value 1/12 with row strategy (1/4, 1/3, 5/12).
        let p = vec![vec![0.0, 2.0, -1.0], vec![-1.0, 0.0, 1.0], vec![1.0, -1.0, 0.0]];
        let s = solve_zero_sum(&p).unwrap();
        assert!((s.value - 1.0 / 12.0).abs() < 1e-12);
        assert!((s.row_strategy[0] - 1.0 / 4.0).abs() < 1e-12);
        assert!((s.row_strategy[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((s.row_strategy[2] - 5.0 / 12.0).abs() < 1e-12);
        let (lo, hi) = guaranteed(&p, &s);
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn saddle_point_and_degenerate() {
        let p = vec![vec![2.0, 3.0], vec![1.0, 0.0], vec![2.0, 3.0]];
        let s = solve_zero_sum(&p).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        let (lo, hi) = guaranteed(&p, &s);
        assert!((lo - 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_games_have_matching_certificates() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = rng.gen_range(1..12);
            let n = rng.gen_range(1..12);
            let p: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-1i32..=1) as f64).collect()).collect();
            let s = solve_zero_sum(&p).unwrap();
            let (lo, hi) = guaranteed(&p, &s);
            assert!(lo <= s.value + 1e-9 && s.value <= hi + 1e-9);
            assert!(hi - lo < 1e-9, "gap {}", hi - lo);
        }
    }
}
