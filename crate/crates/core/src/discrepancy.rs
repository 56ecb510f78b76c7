//! Discrepancy of sign matrices.
//!
//! `disc_μ(f)` is computed exactly by enumerating row subsets of the
//! smaller side: once `A` and a target sign are fixed, the best column set
//! is every column whose partial sum has that sign. `disc(f)` is the value
//! of the zero-sum game in which μ picks a cell distribution and the
//! opponent a signed rectangle; it is solved by double oracle, and both
//! ends of the returned interval are certified by recomputation.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::EntryDistribution;
use crate::error::{Error, Result};
use crate::game::solve_zero_sum;
use crate::matrix::SignMatrix;
use crate::rect::{IndexSet, Rectangle};
use crate::scalar::{normalize_exact, ratio_string, Scalar};

/// Largest enumerated side for exact best responses.
pub const ENUM_CAP: usize = 24;
/// Games with at most this many cells get exact rational certificates.
pub const EXACT_CELLS: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITERS: usize = 500;

/// A rectangle together with the sign that removes the absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedRectangle {
    pub rect: Rectangle,
    pub sign: i8,
}

impl SignedRectangle {
    /// `sign · f(x,y) · 1[(x,y) ∈ rect]`.
    pub fn payoff(&self, f: &SignMatrix, i: usize, j: usize) -> i8 {
        if self.rect.contains(i, j) {
            self.sign * f.get(i, j)
        } else {
            0
        }
    }
}

/// Best response found by [`best_rectangle`].
#[derive(Clone, Debug)]
pub struct BestRectangle<T> {
    pub rect: Rectangle,
    pub sign: i8,
    pub value: T,
}

/// Maximizes `|Σ_{(x,y)∈R} g(x,y)|` over all rectangles.
///
/// `g` is row-major `n_rows × n_cols`. Ties go to the smallest row set
/// (fewest rows, then lexicographic), then the smallest column set in the
/// same order. The empty rectangle scores zero.
pub fn best_rectangle<T: Scalar>(g: &[T], n_rows: usize, n_cols: usize) -> Result<BestRectangle<T>> {
    best_signed(g, n_rows, n_cols, &[1, -1], ENUM_CAP)
}

/// Maximizes `s · Σ_{R} g` over rectangles `R` and signs `s ∈ signs`.
pub fn best_signed<T: Scalar>(
    g: &[T],
    n_rows: usize,
    n_cols: usize,
    signs: &[i8],
    cap: usize,
) -> Result<BestRectangle<T>> {
    if g.len() != n_rows * n_cols {
        return Err(Error::precondition("weight grid has the wrong size"));
    }
    if g.iter().any(|x| !x.as_f64().is_finite()) {
        return Err(Error::precondition("weights must be finite"));
    }
    let transposed = n_cols < n_rows;
    let (k, m) = if transposed { (n_cols, n_rows) } else { (n_rows, n_cols) };
    if k > cap {
        return Err(Error::cap(format!("smaller side {k} exceeds the enumeration cap {cap}; use the heuristic mode")));
    }
    // h[a][b]: enumerated line a, closure line b.
    let h = |a: usize, b: usize| -> &T {
        if transposed {
            &g[b * n_cols + a]
        } else {
            &g[a * n_cols + b]
        }
    };
    let lo_bits = k / 2;
    let hi_bits = k - lo_bits;
    let partial = |offset: usize, bits: usize| -> Vec<Vec<T>> {
        let mut sums: Vec<Vec<T>> = Vec::with_capacity(1 << bits);
        sums.push(vec![T::zero(); m]);
        for mask in 1usize..1 << bits {
            let low = mask.trailing_zeros() as usize;
            let prev = &sums[mask & (mask - 1)];
            let line = offset + low;
            let v: Vec<T> = (0..m).map(|b| prev[b].clone() + h(line, b).clone()).collect();
            sums.push(v);
        }
        sums
    };
    let low = partial(0, lo_bits);
    let high = partial(lo_bits, hi_bits);

    let to_candidate = |mask: usize, closure: Vec<usize>, sign: i8, value: T| -> Candidate<T> {
        let enumerated: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 1).collect();
        let (rows, cols) = if closure.is_empty() {
            (Vec::new(), Vec::new())
        } else if transposed {
            (closure, enumerated)
        } else {
            (enumerated, closure)
        };
        Candidate { value, rows: IndexSet::new(rows), cols: IndexSet::new(cols), sign }
    };

    let best = (0usize..1 << hi_bits)
        .into_par_iter()
        .map(|hi| {
            let mut best: Option<Candidate<T>> = None;
            let mut col = vec![T::zero(); m];
            for (lo, low_sums) in low.iter().enumerate() {
                let mask = hi << lo_bits | lo;
                for b in 0..m {
                    col[b] = low_sums[b].clone() + high[hi][b].clone();
                }
                for &s in signs {
                    let mut value = T::zero();
                    let mut any = false;
                    for c in &col {
                        let v = if s > 0 { c.clone() } else { -c.clone() };
                        if v > T::zero() {
                            value = value + v;
                            any = true;
                        }
                    }
                    let dominated = match &best {
                        Some(b) => value < b.value,
                        None => false,
                    };
                    if dominated {
                        continue;
                    }
                    let closure: Vec<usize> = if any {
                        (0..m)
                            .filter(|&b| {
                                let v = if s > 0 { col[b].clone() } else { -col[b].clone() };
                                v > T::zero()
                            })
                            .collect()
                    } else {
                        Vec::new()
                    };
                    let cand = to_candidate(mask, closure, if any { s } else { 1 }, value);
                    best = Some(match best {
                        Some(b) => better(b, cand),
                        None => cand,
                    });
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(a), Some(b)) => Some(better(a, b)),
                (a, None) => a,
                (None, b) => b,
            },
        )
        .expect("at least one candidate");
    Ok(BestRectangle { rect: Rectangle::new(best.rows, best.cols), sign: best.sign, value: best.value })
}

#[derive(Clone, Debug)]
struct Candidate<T> {
    value: T,
    rows: IndexSet,
    cols: IndexSet,
    sign: i8,
}

fn better<T: Scalar>(a: Candidate<T>, b: Candidate<T>) -> Candidate<T> {
    if b.value > a.value {
        return b;
    }
    if a.value > b.value {
        return a;
    }
    let ka = (a.rows.len(), &a.rows, a.cols.len(), &a.cols, -a.sign);
    let kb = (b.rows.len(), &b.rows, b.cols.len(), &b.cols, -b.sign);
    if kb < ka {
        b
    } else {
        a
    }
}

/// Hill-climbing best response for grids past the enumeration cap. The
/// result is a valid rectangle but not certified optimal.
pub fn best_rectangle_heuristic(g: &[f64], n_rows: usize, n_cols: usize, restarts: usize) -> BestRectangle<f64> {
    let mut best = BestRectangle { rect: Rectangle::empty(), sign: 1, value: 0.0 };
    let col_closure = |rows: &[bool], s: f64| -> (Vec<bool>, f64) {
        let mut cols = vec![false; n_cols];
        let mut total = 0.0;
        for j in 0..n_cols {
            let c: f64 = (0..n_rows).filter(|&i| rows[i]).map(|i| g[i * n_cols + j]).sum();
            if s * c > 0.0 {
                cols[j] = true;
                total += s * c;
            }
        }
        (cols, total)
    };
    let row_closure = |cols: &[bool], s: f64| -> (Vec<bool>, f64) {
        let mut rows = vec![false; n_rows];
        let mut total = 0.0;
        for i in 0..n_rows {
            let c: f64 = (0..n_cols).filter(|&j| cols[j]).map(|j| g[i * n_cols + j]).sum();
            if s * c > 0.0 {
                rows[i] = true;
                total += s * c;
            }
        }
        (rows, total)
    };
    for s in [1.0, -1.0] {
        for start in 0..restarts.min(n_rows).max(1) {
            let mut rows = vec![false; n_rows];
            rows[start % n_rows] = true;
            let mut last = f64::NEG_INFINITY;
            for _ in 0..100 {
                let (cols, _) = col_closure(&rows, s);
                let (r2, v) = row_closure(&cols, s);
                rows = r2;
                if v <= last + 1e-15 {
                    break;
                }
                last = v;
            }
            let (cols, v) = col_closure(&rows, s);
            if v > best.value {
                let to_set =
                    |m: &[bool]| IndexSet::new(m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect());
                best = BestRectangle { rect: Rectangle::new(to_set(&rows), to_set(&cols)), sign: s as i8, value: v };
            }
        }
    }
    best
}

/// `disc_μ(f)` with a witnessing signed rectangle.
pub fn disc_under(f: &SignMatrix, mu: &EntryDistribution) -> Result<(f64, SignedRectangle)> {
    check_shape(f, mu)?;
    let g: Vec<f64> = f.entries().iter().zip(mu.weights()).map(|(&e, &w)| e as f64 * w).collect();
    let b = best_rectangle(&g, f.n_rows(), f.n_cols())?;
    Ok((b.value, SignedRectangle { rect: b.rect, sign: b.sign }))
}

/// Exact `disc_μ(f)` for a rational μ given row-major.
pub fn disc_under_exact(f: &SignMatrix, mu: &[BigRational]) -> Result<(BigRational, SignedRectangle)> {
    if mu.len() != f.cells() {
        return Err(Error::precondition("distribution shape does not match the matrix"));
    }
    let g: Vec<BigRational> =
        f.entries().iter().zip(mu).map(|(&e, w)| if e > 0 { w.clone() } else { -w.clone() }).collect();
    let b = best_rectangle(&g, f.n_rows(), f.n_cols())?;
    Ok((b.value, SignedRectangle { rect: b.rect, sign: b.sign }))
}

fn check_shape(f: &SignMatrix, mu: &EntryDistribution) -> Result<()> {
    if mu.n_rows() != f.n_rows() || mu.n_cols() != f.n_cols() {
        return Err(Error::precondition("distribution shape does not match the matrix"));
    }
    Ok(())
}

/// Certified enclosure of `disc(f)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscrepancyCertificate {
    pub lower: f64,
    pub upper: f64,
    /// Exact bounds as `p/q`, present when the game was small enough.
    pub lower_exact: Option<String>,
    pub upper_exact: Option<String>,
    pub argmin_mu: EntryDistribution,
    pub witness_rect: SignedRectangle,
    pub dual: Vec<(SignedRectangle, f64)>,
    pub converged: bool,
    pub iterations: usize,
    pub tol: f64,
}

impl DiscrepancyCertificate {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GameOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions { tol: DEFAULT_TOL, max_iters: DEFAULT_MAX_ITERS }
    }
}

/// `disc(f) = min_μ disc_μ(f)` by double oracle.
///
/// Each round solves the game restricted to the signed rectangles seen so
/// far, then adds the exact best response to the restricted optimum μ.
/// `upper` is `disc_μ(f)` of the best μ seen; `lower` is the guaranteed
/// payoff of the best dual mixture against every cell. Non-convergence is
/// reported through `converged`, not as an error.
///
/// Repeated rows and columns do not change `disc(f)`, so the game is solved
/// on the deduplicated matrix and the certificate is lifted back: μ sits on
/// first occurrences and rectangles take every copy.
pub fn disc_game(f: &SignMatrix, opts: GameOptions) -> Result<DiscrepancyCertificate> {
    if !(opts.tol > 0.0) {
        return Err(Error::precondition("tol must be positive"));
    }
    let dd = f.dedupe();
    if dd.matrix.n_rows() == f.n_rows() && dd.matrix.n_cols() == f.n_cols() {
        return solve_disc(f, opts);
    }
    let c = solve_disc(&dd.matrix, opts)?;
    let lift_set =
        |s: &IndexSet, map: &[usize]| -> IndexSet { (0..map.len()).filter(|&x| s.contains(map[x])).collect() };
    let lift = |r: &SignedRectangle| SignedRectangle {
        rect: Rectangle::new(lift_set(&r.rect.rows, &dd.row_map), lift_set(&r.rect.cols, &dd.col_map)),
        sign: r.sign,
    };
    let first = |map: &[usize], k: usize| map.iter().position(|&v| v == k).expect("every class has a member");
    let (g, m) = (&dd.matrix, f.n_cols());
    let mut weights = vec![0.0; f.cells()];
    for a in 0..g.n_rows() {
        for b in 0..g.n_cols() {
            weights[first(&dd.row_map, a) * m + first(&dd.col_map, b)] = c.argmin_mu.weight(a, b);
        }
    }
    Ok(DiscrepancyCertificate {
        argmin_mu: EntryDistribution::from_weights(f.n_rows(), m, weights)?,
        witness_rect: lift(&c.witness_rect),
        dual: c.dual.iter().map(|(r, w)| (lift(r), *w)).collect(),
        ..c
    })
}

fn solve_disc(f: &SignMatrix, opts: GameOptions) -> Result<DiscrepancyCertificate> {
    let (n, m) = (f.n_rows(), f.n_cols());
    if n.min(m) > ENUM_CAP {
        return Err(Error::cap(format!("smaller side exceeds the enumeration cap {ENUM_CAP}")));
    }
    let exact_mode = f.cells() <= EXACT_CELLS;
    let full = f.full_rect();
    let mut strategies =
        vec![SignedRectangle { rect: full.clone(), sign: 1 }, SignedRectangle { rect: full, sign: -1 }];

    let mut best_upper: Option<(f64, Vec<f64>, SignedRectangle)> = None;
    let mut best_lower: Option<(f64, Vec<(SignedRectangle, f64)>)> = None;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        iterations += 1;
        let payoff: Vec<Vec<f64>> = strategies
            .iter()
            .map(|s| {
                let mut row = Vec::with_capacity(n * m);
                for i in 0..n {
                    for j in 0..m {
                        row.push(s.payoff(f, i, j) as f64);
                    }
                }
                row
            })
            .collect();
        let sol = solve_zero_sum(&payoff)?;
        let mu = EntryDistribution::normalized(n, m, &sol.col_strategy)?;
        let (upper, response) = disc_under(f, &mu)?;
        let lower = (0..n * m)
            .map(|c| {
                let (i, j) = (c / m, c % m);
                strategies.iter().zip(&sol.row_strategy).map(|(s, w)| s.payoff(f, i, j) as f64 * w).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);

        if best_upper.as_ref().is_none_or(|(b, _, _)| upper < *b) {
            best_upper = Some((upper, sol.col_strategy.clone(), response.clone()));
        }
        if best_lower.as_ref().is_none_or(|(b, _)| lower > *b) {
            let dual =
                strategies.iter().cloned().zip(sol.row_strategy.iter().copied()).filter(|(_, w)| *w > 0.0).collect();
            best_lower = Some((lower, dual));
        }
        let gap = best_upper.as_ref().unwrap().0 - best_lower.as_ref().unwrap().0;
        if gap <= opts.tol {
            converged = true;
            break;
        }
        if strategies.contains(&response) {
            // The best response is already in play; the gap cannot shrink further.
            break;
        }
        strategies.push(response);
    }

    let (mut ub, weights, mut witness) = best_upper.expect("at least one iteration");
    let (mut lb, dual) = best_lower.expect("at least one iteration");
    let mu = EntryDistribution::normalized(n, m, &weights)?;
    let (mut upper_exact, mut lower_exact) = (None, None);
    if exact_mode {
        // Both bounds re-evaluated in exact arithmetic for the normalized
        // rational versions of the two strategies.
        let q = normalize_exact(&weights);
        let (v, resp) = disc_under_exact(f, &q)?;
        ub = v.as_f64();
        witness = resp;
        upper_exact = Some(ratio_string(&v));
        let rho = normalize_exact(&dual.iter().map(|(_, w)| *w).collect::<Vec<_>>());
        let mut worst: Option<BigRational> = None;
        for c in 0..n * m {
            let (i, j) = (c / m, c % m);
            let mut acc = BigRational::zero();
            for ((s, _), w) in dual.iter().zip(&rho) {
                match s.payoff(f, i, j) {
                    1 => acc += w,
                    -1 => acc -= w,
                    _ => {}
                }
            }
            if worst.as_ref().is_none_or(|x| acc < *x) {
                worst = Some(acc);
            }
        }
        let w = worst.expect("nonempty grid");
        lb = w.as_f64();
        lower_exact = Some(ratio_string(&w));
    }
    Ok(DiscrepancyCertificate {
        lower: lb,
        upper: ub,
        lower_exact,
        upper_exact,
        argmin_mu: mu,
        witness_rect: witness,
        dual,
        converged,
        iterations,
        tol: opts.tol,
    })
}

/// Rank against discrepancy: `disc(f) ≥ 1/(8√r)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankDiscReport {
    pub rank: usize,
    pub lower: f64,
    pub upper: f64,
    pub bound: f64,
    /// `upper ≥ bound`; false would mean a solver bug.
    pub holds: bool,
    /// `upper − bound`.
    pub margin: f64,
    pub converged: bool,
    pub witness: SignedRectangle,
    pub mu: EntryDistribution,
}

pub fn rank_disc_bound(r: usize) -> f64 {
    1.0 / (8.0 * (r as f64).sqrt())
}

pub fn check_rank_disc_bound(f: &SignMatrix, opts: GameOptions) -> Result<RankDiscReport> {
    let rank = f.rank();
    let cert = disc_game(f, opts)?;
    let bound = rank_disc_bound(rank);
    Ok(RankDiscReport {
        rank,
        lower: cert.lower,
        upper: cert.upper,
        bound,
        holds: cert.upper >= bound,
        margin: cert.upper - bound,
        converged: cert.converged,
        witness: cert.witness_rect,
        mu: cert.argmin_mu,
    })
}

/// Exact value of `Σ_{R} g` for a rectangle, used by tests and reports.
pub fn rectangle_sum(g: &[f64], n_cols: usize, r: &Rectangle) -> f64 {
    r.cells().map(|(i, j)| g[i * n_cols + j]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::inner_product;

    fn m(rows: &[&[i8]]) -> SignMatrix {
        SignMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Enumerates every (rows, cols) subset pair.
    fn brute_disc(f: &SignMatrix, mu: &EntryDistribution) -> f64 {
        let (n, k) = (f.n_rows(), f.n_cols());
        let mut best: f64 = 0.0;
        for a in 0u64..1 << n {
            for b in 0u64..1 << k {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..k {
                        if a >> i & 1 == 1 && b >> j & 1 == 1 {
                            s += mu.weight(i, j) * f.get(i, j) as f64;
                        }
                    }
                }
                best = best.max(s.abs());
            }
        }
        best
    }

    #[test]
    fn all_ones_full_rectangle() {
        let f = m(&[&[1, 1], &[1, 1]]);
        let (v, w) = disc_under(&f, &EntryDistribution::uniform(2, 2)).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(w.rect, f.full_rect());
    }

    #[test]
    fn single_positive_cell() {
        let mut g = vec![0.0; 12];
        g[7] = 0.25;
        let b = best_rectangle(&g, 3, 4).unwrap();
        assert_eq!(b.value, 0.25);
        assert_eq!(b.rect, Rectangle::cell(1, 3));
    }

    #[test]
    fn inner_product_one_is_half() {
        let f = inner_product(1).unwrap();
        let mu = EntryDistribution::uniform(2, 2);
        let (v, w) = disc_under(&f, &mu).unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(brute_disc(&f, &mu), 0.5);
        // Lexicographically smallest optimal rectangle.
        assert_eq!(w.rect, Rectangle::new(IndexSet::new(vec![0]), IndexSet::range(2)));
    }

    #[test]
    fn point_mass_gives_one() {
        let f = inner_product(2).unwrap();
        let (v, w) = disc_under(&f, &EntryDistribution::point(4, 4, 3, 3)).unwrap();
        assert_eq!(v, 1.0);
        assert!(w.rect.contains(3, 3));
    }

    #[test]
    fn transposed_enumeration_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..6);
            let k = rng.gen_range(1..6);
            let f = SignMatrix::from_fn(n, k, |_, _| if rng.gen::<bool>() { 1 } else { -1 }).unwrap();
            let w: Vec<f64> = (0..n * k).map(|_| rng.gen_range(0..5) as f64).collect();
            let total: f64 = w.iter().sum::<f64>().max(1.0);
            let mu =
                EntryDistribution::normalized(n, k, &w.iter().map(|x| x / total + 1e-3).collect::<Vec<_>>()).unwrap();
            let (v, sr) = disc_under(&f, &mu).unwrap();
            assert!((v - brute_disc(&f, &mu)).abs() < 1e-12);
            let g: Vec<f64> = f.entries().iter().zip(mu.weights()).map(|(&e, &p)| e as f64 * p).collect();
            assert!((sr.sign as f64 * rectangle_sum(&g, k, &sr.rect) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = vec![0.0; 25 * 25];
        assert!(matches!(best_rectangle(&g, 25, 25), Err(Error::Cap(_))));
        let g = vec![1.0; 30 * 2];
        assert_eq!(best_rectangle(&g, 30, 2).unwrap().value, 60.0);
    }

    #[test]
    fn heuristic_finds_valid_rectangles() {
        let f = inner_product(2).unwrap();
        let g: Vec<f64> = f.entries().iter().map(|&e| e as f64 / 16.0).collect();
        let h = best_rectangle_heuristic(&g, 4, 4, 4);
        let exact = best_rectangle(&g, 4, 4).unwrap();
        assert!(h.value <= exact.value + 1e-12);
        assert!((h.sign as f64 * rectangle_sum(&g, 4, &h.rect) - h.value).abs() < 1e-12);
    }

    #[test]
    fn disc_game_constant_matrix() {
        let f = m(&[&[1, 1, 1], &[1, 1, 1]]);
        let c = disc_game(&f, GameOptions::default()).unwrap();
        assert!(c.converged);
        assert_eq!(c.lower, 1.0);
        assert_eq!(c.upper, 1.0);
        assert_eq!(c.upper_exact.as_deref(), Some("1"));
    }

    #[test]
    fn disc_game_inner_product() {
        let f = inner_product(1).unwrap();
        let c = disc_game(&f, GameOptions::default()).unwrap();
        assert!(c.converged);
        assert!(c.lower <= c.upper && c.gap() <= 1e-4);
        assert!(c.upper >= rank_disc_bound(2));
        // The certificate's μ really attains `upper`.
        let (v, _) = disc_under(&f, &c.argmin_mu).unwrap();
        assert!((v - c.upper).abs() < 1e-12);
    }

    #[test]
    fn rank_disc_report() {
        let r = check_rank_disc_bound(&m(&[&[1; 4], &[1; 4]]), GameOptions::default()).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.holds);
        let r = check_rank_disc_bound(&inner_product(2).unwrap(), GameOptions::default()).unwrap();
        assert_eq!(r.rank, 4);
        assert_eq!(r.bound, 1.0 / 16.0);
        assert!(r.holds && r.converged);
    }

    #[test]
    fn duplicates_are_lifted() {
        let g = crate::generators::inner_product(2).unwrap();
        let f = SignMatrix::from_fn(6, 5, |i, j| g.get(i % 4, j % 4)).unwrap();
        let a = disc_game(&g, GameOptions::default()).unwrap();
        let b = disc_game(&f, GameOptions::default()).unwrap();
        assert_eq!(a.upper_exact, b.upper_exact);
        let (v, _) = disc_under(&f, &b.argmin_mu).unwrap();
        assert!((v - b.upper).abs() < 1e-9);
        let worst = (0..30)
            .map(|c| b.dual.iter().map(|(r, w)| r.payoff(&f, c / 5, c % 5) as f64 * w).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!(worst >= b.lower - 1e-9);
        assert!(b.witness_rect.rect.within(6, 5));
    }
}
