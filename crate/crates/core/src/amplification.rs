//! Large nearly-monochromatic rectangles from a minimax distribution over
//! rectangles.
//!
//! For `f` with discrepancy at least `δ`, there is a distribution ρ over
//! rectangles under which every `+1` cell is covered at least `(2/3)δ` more
//! often than every `−1` cell. Intersecting `t` independent draws from ρ
//! drives the ratio `q^t/p^t` below `ε/2`, and a draw whose mass clears
//! `p^t/4` with at most an ε fraction of minority mass exists and is found
//! by sampling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{best_signed, disc_game, GameOptions, ENUM_CAP};
use crate::dist::EntryDistribution;
use crate::error::{Error, Result};
use crate::game::solve_zero_sum;
use crate::matrix::SignMatrix;
use crate::rect::{IndexSet, Rectangle};

/// Maximum number of rectangles kept in ρ's support.
pub const SUPPORT_CAP: usize = 200;
/// `C` in the size floor `2^{−C·log₂(1/ε)/δ}`.
pub const SIZE_FLOOR_CONSTANT: f64 = 16.0;
pub const DEFAULT_MAX_TRIALS: usize = 1000;

/// The four rectangles cut out by `A`, `B` and their complements, in the
/// order `A×B, A'×B, A×B', A'×B'`. Members may be empty.
pub fn four_split(r: &Rectangle, n_rows: usize, n_cols: usize) -> [Rectangle; 4] {
    let a = r.rows.clone();
    let b = r.cols.clone();
    let a2 = IndexSet::range(n_rows).difference(&a);
    let b2 = IndexSet::range(n_cols).difference(&b);
    [
        Rectangle::new(a.clone(), b.clone()),
        Rectangle::new(a2.clone(), b),
        Rectangle::new(a, b2.clone()),
        Rectangle::new(a2, b2),
    ]
}

/// A finitely supported distribution over rectangles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RectangleDistribution {
    pub support: Vec<(Rectangle, f64)>,
}

impl RectangleDistribution {
    pub fn new(support: Vec<(Rectangle, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::precondition("empty rectangle distribution"));
        }
        if support.iter().any(|(r, w)| r.is_empty() || !(*w >= 0.0)) {
            return Err(Error::precondition("support rectangles must be nonempty with nonnegative weight"));
        }
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::precondition(format!("rectangle weights sum to {total}")));
        }
        Ok(RectangleDistribution { support })
    }

    /// `Pr_{R∼ρ}[(i,j) ∈ R]` for every cell, row-major.
    pub fn inclusion(&self, n_rows: usize, n_cols: usize) -> Vec<f64> {
        let mut p = vec![0.0; n_rows * n_cols];
        for (r, w) in &self.support {
            for (i, j) in r.cells() {
                p[i * n_cols + j] += w;
            }
        }
        p
    }
}

/// Coverage statistics of ρ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparationStats {
    /// Minimum inclusion probability over `+1` cells.
    pub p: f64,
    /// Maximum inclusion probability over `−1` cells.
    pub q: f64,
    pub margin: f64,
    pub delta_lb: f64,
    pub p_cell: (usize, usize),
    pub q_cell: (usize, usize),
}

impl SeparationStats {
    /// Scans every cell of `f` against ρ.
    pub fn compute(f: &SignMatrix, rho: &RectangleDistribution, delta_lb: f64) -> Result<Self> {
        let (n, m) = (f.n_rows(), f.n_cols());
        let incl = rho.inclusion(n, m);
        let mut p: Option<(f64, (usize, usize))> = None;
        let mut q: Option<(f64, (usize, usize))> = None;
        for i in 0..n {
            for j in 0..m {
                let v = incl[i * m + j];
                if f.get(i, j) > 0 {
                    if p.is_none_or(|(x, _)| v < x) {
                        p = Some((v, (i, j)));
                    }
                } else if q.is_none_or(|(x, _)| v > x) {
                    q = Some((v, (i, j)));
                }
            }
        }
        let (Some((p, p_cell)), Some((q, q_cell))) = (p, q) else {
            return Err(Error::precondition("lemma vacuous: no opposite-sign pair"));
        };
        Ok(SeparationStats { p, q, margin: p - q, delta_lb, p_cell, q_cell })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Separation {
    pub rho: RectangleDistribution,
    pub stats: SeparationStats,
    /// Best-response bound on the game value; `stats.margin` is within
    /// `upper − margin` of optimal.
    pub upper: f64,
    pub converged: bool,
    pub iterations: usize,
    pub support_cap: usize,
    pub cap_hit: bool,
}

/// Solves the game between rectangles and (`+1` cell, `−1` cell) pairs,
/// where a rectangle scores `1[plus ∈ R] − 1[minus ∈ R]`.
///
/// The pair player's best response to ρ is (least covered `+1` cell, most
/// covered `−1` cell); the rectangle player's best response to pair weights
/// is a maximum-weight rectangle for the aggregated cell weights.
pub fn build_separating_distribution(f: &SignMatrix, delta_lb: f64, opts: GameOptions) -> Result<Separation> {
    let (n, m) = (f.n_rows(), f.n_cols());
    if f.constant_value().is_some() {
        return Err(Error::precondition("lemma vacuous: no opposite-sign pair"));
    }
    if !(delta_lb > 0.0) {
        return Err(Error::precondition("delta_lb must be positive"));
    }
    let plus: Vec<(usize, usize)> = (0..n * m).filter(|c| f.entries()[*c] > 0).map(|c| (c / m, c % m)).collect();
    let minus: Vec<(usize, usize)> = (0..n * m).filter(|c| f.entries()[*c] < 0).map(|c| (c / m, c % m)).collect();

    let mut pairs: Vec<((usize, usize), (usize, usize))> = vec![(plus[0], minus[0])];
    let mut rects: Vec<Rectangle> = vec![rect_best_response(f, &pairs, &[1.0])?.0];
    let mut best: Option<(RectangleDistribution, SeparationStats)> = None;
    let mut best_upper = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut cap_hit = false;

    while iterations < opts.max_iters {
        iterations += 1;
        let payoff: Vec<Vec<f64>> = rects
            .iter()
            .map(|r| {
                pairs
                    .iter()
                    .map(|&(a, b)| r.contains(a.0, a.1) as i32 as f64 - r.contains(b.0, b.1) as i32 as f64)
                    .collect()
            })
            .collect();
        let sol = solve_zero_sum(&payoff)?;
        let support: Vec<(Rectangle, f64)> =
            rects.iter().cloned().zip(sol.row_strategy.iter().copied()).filter(|(_, w)| *w > 0.0).collect();
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        let rho = RectangleDistribution::new(support.into_iter().map(|(r, w)| (r, w / total)).collect())?;
        let stats = SeparationStats::compute(f, &rho, delta_lb)?;

        let (response, upper) = rect_best_response(f, &pairs, &sol.col_strategy)?;
        best_upper = best_upper.min(upper);
        if best.as_ref().is_none_or(|(_, s)| stats.margin > s.margin) {
            best = Some((rho, stats.clone()));
        }
        let lower = best.as_ref().unwrap().1.margin;
        if best_upper - lower <= opts.tol {
            converged = true;
            break;
        }

        let new_pair = (stats.p_cell, stats.q_cell);
        let mut grew = false;
        if !pairs.contains(&new_pair) {
            pairs.push(new_pair);
            grew = true;
        }
        if !rects.contains(&response) {
            if rects.len() >= SUPPORT_CAP {
                // Drop strategies outside the current support.
                let keep: Vec<Rectangle> =
                    rects.iter().zip(&sol.row_strategy).filter(|(_, w)| **w > 0.0).map(|(r, _)| r.clone()).collect();
                rects = keep;
                cap_hit = true;
            }
            if rects.len() < SUPPORT_CAP {
                rects.push(response);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let (rho, stats) = best.expect("at least one iteration");
    Ok(Separation { rho, stats, upper: best_upper, converged, iterations, support_cap: SUPPORT_CAP, cap_hit })
}

/// Maximum of `Σ_pairs w·(1[a∈R] − 1[b∈R])` over nonempty rectangles.
fn rect_best_response(
    f: &SignMatrix,
    pairs: &[((usize, usize), (usize, usize))],
    weights: &[f64],
) -> Result<(Rectangle, f64)> {
    let (n, m) = (f.n_rows(), f.n_cols());
    let mut g = vec![0.0; n * m];
    for (&(a, b), &w) in pairs.iter().zip(weights) {
        g[a.0 * m + a.1] += w;
        g[b.0 * m + b.1] -= w;
    }
    let best = best_signed(&g, n, m, &[1], ENUM_CAP)?;
    if best.rect.is_empty() {
        // Every pair weight is zero or negative everywhere: fall back to the
        // least-damaging single plus cell.
        let (c, _) = g
            .iter()
            .enumerate()
            .filter(|(c, _)| f.entries()[*c] > 0)
            .fold((0, f64::NEG_INFINITY), |acc, (c, &v)| if v > acc.1 { (c, v) } else { acc });
        return Ok((Rectangle::cell(c / m, c % m), best.value));
    }
    Ok((best.rect, best.value))
}

/// Smallest `t ≥ 1` with `(q/p)^t ≤ ε/2`.
pub fn choose_t(stats: &SeparationStats, eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::precondition("eps must lie in (0, 1)"));
    }
    if !(stats.p > stats.q) || stats.q < 0.0 {
        return Err(Error::precondition("no separation margin"));
    }
    if stats.q == 0.0 {
        return Ok(1);
    }
    let ratio = stats.q / stats.p;
    let target = eps / 2.0;
    let mut t = ((target.ln() / ratio.ln()).ceil().max(1.0)) as u32;
    while t > 1 && ratio.powi(t as i32 - 1) <= target {
        t -= 1;
    }
    while ratio.powi(t as i32) > target {
        t += 1;
    }
    Ok(t)
}

/// `2^{−C·log₂(1/ε)/δ}`.
pub fn size_floor(delta_lb: f64, eps: f64) -> f64 {
    (-(SIZE_FLOOR_CONSTANT * (1.0 / eps).log2() / delta_lb)).exp2()
}

#[derive(Clone, Debug)]
pub struct AmplifyOptions {
    pub game: GameOptions,
    pub max_trials: usize,
    /// Use this discrepancy lower bound instead of solving for one.
    pub delta_lb: Option<f64>,
}

impl Default for AmplifyOptions {
    fn default() -> Self {
        AmplifyOptions { game: GameOptions::default(), max_trials: DEFAULT_MAX_TRIALS, delta_lb: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplifyResult {
    pub rect: Rectangle,
    pub t: u32,
    pub mu_mass: f64,
    /// μ-mass of cells in `rect` against the majority orientation.
    pub minority_mass: f64,
    pub cond_avg: f64,
    pub trials_used: usize,
    /// `+1` if run on `f`, `−1` if run on `−f`.
    pub orientation: i8,
    pub eps: f64,
    pub seed: u64,
    pub delta_lb: f64,
    pub p: f64,
    pub q: f64,
    /// `p^t / 4`, the acceptance threshold on `mu_mass`.
    pub mass_floor: f64,
    /// `2^{−16·log₂(1/ε)/δ_lb}`.
    pub size_floor: f64,
    pub support_size: usize,
    pub separation_converged: bool,
    /// μ-mass of `R_1 ∩ … ∩ R_k` for `k = 1..t` on the accepted draw.
    pub prefix_masses: Vec<f64>,
}

/// Finds `R` with `μ(R ∩ minority) ≤ ε·μ(R)` and `μ(R) ≥ p^t/4`.
///
/// Runs on the deduplicated matrix with μ summed over copies; the
/// rectangle found there is lifted to every copy, which keeps both masses.
pub fn amplify(
    f: &SignMatrix,
    mu: &EntryDistribution,
    eps: f64,
    seed: u64,
    opts: &AmplifyOptions,
) -> Result<AmplifyResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::precondition("eps must lie in (0, 1)"));
    }
    if mu.n_rows() != f.n_rows() || mu.n_cols() != f.n_cols() {
        return Err(Error::precondition("distribution shape does not match the matrix"));
    }
    let dd = f.dedupe();
    let g = &dd.matrix;
    if g.n_rows() == f.n_rows() && g.n_cols() == f.n_cols() {
        return amplify_distinct(f, mu, eps, seed, opts);
    }
    let mut merged = vec![0.0; g.cells()];
    for i in 0..f.n_rows() {
        for j in 0..f.n_cols() {
            merged[dd.row_map[i] * g.n_cols() + dd.col_map[j]] += mu.weight(i, j);
        }
    }
    let mu_g = EntryDistribution::normalized(g.n_rows(), g.n_cols(), &merged)?;
    let lift = |r: &Rectangle| {
        Rectangle::new(
            (0..f.n_rows()).filter(|&i| r.rows.contains(dd.row_map[i])).collect(),
            (0..f.n_cols()).filter(|&j| r.cols.contains(dd.col_map[j])).collect(),
        )
    };
    match amplify_distinct(g, &mu_g, eps, seed, opts) {
        Ok(res) => Ok(AmplifyResult { rect: lift(&res.rect), ..res }),
        Err(Error::TrialsExhausted { trials, best_rect, best_mass, best_minority }) => {
            Err(Error::TrialsExhausted { trials, best_rect: best_rect.as_ref().map(lift), best_mass, best_minority })
        }
        Err(e) => Err(e),
    }
}

fn amplify_distinct(
    f: &SignMatrix,
    mu: &EntryDistribution,
    eps: f64,
    seed: u64,
    opts: &AmplifyOptions,
) -> Result<AmplifyResult> {
    let (n, m) = (f.n_rows(), f.n_cols());
    let mean: f64 = f.entries().iter().zip(mu.weights()).map(|(&e, &w)| e as f64 * w).sum();
    let orientation: i8 = if mean < 0.0 { -1 } else { 1 };

    if let Some(v) = f.constant_value() {
        return Ok(AmplifyResult {
            rect: f.full_rect(),
            t: 1,
            mu_mass: 1.0,
            minority_mass: 0.0,
            cond_avg: v as f64,
            trials_used: 0,
            orientation,
            eps,
            seed,
            delta_lb: 1.0,
            p: 1.0,
            q: 0.0,
            mass_floor: 0.25,
            size_floor: size_floor(1.0, eps),
            support_size: 1,
            separation_converged: true,
            prefix_masses: vec![1.0],
        });
    }

    let g = if orientation < 0 { f.negate() } else { f.clone() };
    let delta_lb = match opts.delta_lb {
        Some(d) => d,
        None => disc_game(&g, opts.game)?.lower,
    };
    let sep = build_separating_distribution(&g, delta_lb, opts.game)?;
    let t = choose_t(&sep.stats, eps)?;
    let mass_floor = sep.stats.p.powi(t as i32) / 4.0;

    let weights: Vec<f64> = sep.rho.support.iter().map(|(_, w)| *w).collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| Error::invariant(e.to_string()))?;
    let masks: Vec<(Vec<bool>, Vec<bool>)> =
        sep.rho.support.iter().map(|(r, _)| (r.rows.mask(n), r.cols.mask(m))).collect();

    let mut best: Option<(f64, Rectangle, f64, f64)> = None;
    for trial in 0..opts.max_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut rows = vec![true; n];
        let mut cols = vec![true; m];
        let mut prefix = Vec::with_capacity(t as usize);
        for _ in 0..t {
            let k = sampler.sample(&mut rng);
            for (x, y) in rows.iter_mut().zip(&masks[k].0) {
                *x &= *y;
            }
            for (x, y) in cols.iter_mut().zip(&masks[k].1) {
                *x &= *y;
            }
            prefix.push(masked_mass(mu, &rows, &cols, m));
        }
        let (mass, minority) = masses(&g, mu, &rows, &cols);
        let rect = Rectangle::new(to_set(&rows), to_set(&cols));
        if mass > 0.0 && minority <= eps * mass && mass >= mass_floor {
            return Ok(AmplifyResult {
                rect,
                t,
                mu_mass: mass,
                minority_mass: minority,
                cond_avg: orientation as f64 * (mass - 2.0 * minority) / mass,
                trials_used: trial + 1,
                orientation,
                eps,
                seed,
                delta_lb,
                p: sep.stats.p,
                q: sep.stats.q,
                mass_floor,
                size_floor: size_floor(delta_lb, eps),
                support_size: sep.rho.support.len(),
                separation_converged: sep.converged,
                prefix_masses: prefix,
            });
        }
        let score = mass - minority / eps;
        if mass > 0.0 && best.as_ref().is_none_or(|b| score > b.0) {
            best = Some((score, rect, mass, minority));
        }
    }
    let (best_rect, best_mass, best_minority) = match best {
        Some((_, r, a, b)) => (Some(r), a, b),
        None => (None, 0.0, 0.0),
    };
    Err(Error::TrialsExhausted { trials: opts.max_trials, best_rect, best_mass, best_minority })
}

fn to_set(mask: &[bool]) -> IndexSet {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

fn masked_mass(mu: &EntryDistribution, rows: &[bool], cols: &[bool], m: usize) -> f64 {
    let w = mu.weights();
    let mut s = 0.0;
    for (i, _) in rows.iter().enumerate().filter(|(_, &b)| b) {
        for (j, _) in cols.iter().enumerate().filter(|(_, &b)| b) {
            s += w[i * m + j];
        }
    }
    s
}

/// (μ(R), μ(R ∩ {g = −1})).
fn masses(g: &SignMatrix, mu: &EntryDistribution, rows: &[bool], cols: &[bool]) -> (f64, f64) {
    let m = g.n_cols();
    let w = mu.weights();
    let (mut mass, mut minority) = (0.0, 0.0);
    for (i, _) in rows.iter().enumerate().filter(|(_, &b)| b) {
        for (j, _) in cols.iter().enumerate().filter(|(_, &b)| b) {
            mass += w[i * m + j];
            if g.get(i, j) < 0 {
                minority += w[i * m + j];
            }
        }
    }
    (mass, minority)
}
