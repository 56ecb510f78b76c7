mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logrank_core::discrepancy::{best_rectangle, disc_game, disc_under, disc_under_exact, GameOptions};
use logrank_core::game::solve_zero_sum;
use logrank_core::generators::inner_product;
use logrank_core::rank::rank_of;
use logrank_core::{EntryDistribution, IntMatrix, SignMatrix};

use common::*;

#[test]
fn game_solver_matches_rational_simplex() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..60 {
        let (m, n) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
        let a: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let want = to_f64(&game_value(&a));
        let payoff: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let sol = solve_zero_sum(&payoff).unwrap();
        assert!((sol.value - want).abs() < 1e-9, "case {case}: {} vs {want}", sol.value);
        // both strategies guarantee the value
        let row_guarantee = (0..n)
            .map(|j| (0..m).map(|i| sol.row_strategy[i] * payoff[i][j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let col_guarantee = (0..m)
            .map(|i| (0..n).map(|j| sol.col_strategy[j] * payoff[i][j]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(row_guarantee >= want - 1e-9 && col_guarantee <= want + 1e-9, "case {case}");
    }
}

#[test]
fn rational_simplex_on_known_games() {
    // matching pennies and rock-paper-scissors
    assert_eq!(game_value(&[vec![1, -1], vec![-1, 1]]), q(0));
    assert_eq!(game_value(&[vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]), q(0));
    assert_eq!(game_value(&[vec![3, 1], vec![0, 2]]), q_frac(3, 2));
}

#[test]
fn best_rectangle_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let f = SignMatrix::from_fn(n, m, |_, _| if rng.gen_bool(0.5) { 1 } else { -1 }).unwrap();
        let raw: Vec<i64> = (0..n * m).map(|_| rng.gen_range(1..=9)).collect();
        let total: i64 = raw.iter().sum();
        let mu: Vec<BigRational> = raw.iter().map(|&x| q_frac(x, total)).collect();
        let want = brute_disc_mu(&f, &mu);
        let (got, witness) = disc_under_exact(&f, &mu).unwrap();
        assert_eq!(got, want);
        let sum: BigRational = witness.rect.cells().map(|(i, j)| &mu[i * m + j] * q(f.get(i, j) as i64)).sum();
        assert_eq!(sum * q(witness.sign as i64), want);

        let g: Vec<f64> = (0..n * m).map(|c| f.entries()[c] as f64 * raw[c] as f64).collect();
        let b = best_rectangle(&g, n, m).unwrap();
        assert!((b.value - to_f64(&want) * total as f64).abs() < 1e-9);
    }
}

#[test]
fn disc_game_brackets_the_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..25 {
        let (n, m) = (rng.gen_range(2..=4), rng.gen_range(2..=3));
        let f = SignMatrix::from_fn(n, m, |_, _| if rng.gen_bool(0.5) { 1 } else { -1 }).unwrap();
        let exact = to_f64(&exact_disc(&f));
        let c = disc_game(&f, GameOptions::default()).unwrap();
        assert!(c.converged);
        assert!(c.lower <= exact + 1e-9 && exact <= c.upper + 1e-9, "[{}, {}] vs {exact}", c.lower, c.upper);
        let (v, _) = disc_under(&f, &c.argmin_mu).unwrap();
        assert!((v - c.upper).abs() < 1e-9);
    }
}

#[test]
fn inner_product_discrepancy() {
    // μ = 1/3 on the three cells other than (0, 0) caps every rectangle at 1/3
    let ip1 = inner_product(1).unwrap();
    assert_eq!(exact_disc(&ip1), q_frac(1, 3));
    let mu = EntryDistribution::from_weights(2, 2, vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
    assert!((disc_under(&ip1, &mu).unwrap().0 - 1.0 / 3.0).abs() < 1e-12);
    for k in [1, 2] {
        let f = inner_product(k).unwrap();
        let want = to_f64(&exact_disc(&f));
        let c = disc_game(&f, GameOptions::default()).unwrap();
        assert!(c.lower <= want + 1e-12 && want <= c.upper + 1e-12);
        assert!(c.gap() <= 1e-4);
    }
}

#[test]
fn rank_matches_rational_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..80 {
        let (n, m) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let k = rng.gen_range(1..=4);
        let big = rng.gen_bool(0.3);
        let u: Vec<i64> = (0..n * k)
            .map(|_| if big { rng.gen_range(-1_000_000..=1_000_000) } else { rng.gen_range(-3..=3) })
            .collect();
        let v: Vec<i64> = (0..k * m).map(|_| rng.gen_range(-3..=3)).collect();
        let mut data = vec![0i64; n * m];
        for i in 0..n {
            for j in 0..m {
                data[i * m + j] = (0..k).map(|t| u[i * k + t] * v[t * m + j]).sum();
            }
        }
        let want = rank_q(n, m, &data);
        assert!(want <= k);
        assert_eq!(rank_of(n, m, &data), want);
        assert_eq!(IntMatrix::new(n, m, data).unwrap().rank(), want);
    }
}

fn sign_matrix() -> impl Strategy<Value = SignMatrix> {
    (1usize..=7, 1usize..=7).prop_flat_map(|(n, m)| {
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n * m)
            .prop_map(move |e| SignMatrix::new(n, m, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_invariances(f in sign_matrix(), seed in any::<u64>()) {
        let r = f.rank();
        let rows: Vec<usize> = (0..f.n_rows()).collect();
        let cols: Vec<usize> = (0..f.n_cols()).collect();
        prop_assert_eq!(r, sign_rank(&f, &rows, &cols));
        prop_assert_eq!(f.transpose().rank(), r);
        prop_assert_eq!(f.negate().rank(), r);
        prop_assert_eq!(f.dedupe().matrix.rank(), r);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pr = rows.clone();
        let mut pc = cols.clone();
        for i in (1..pr.len()).rev() { pr.swap(i, rng.gen_range(0..=i)); }
        for j in (1..pc.len()).rev() { pc.swap(j, rng.gen_range(0..=j)); }
        let p = SignMatrix::from_fn(f.n_rows(), f.n_cols(), |i, j| f.get(pr[i], pc[j])).unwrap();
        prop_assert_eq!(p.rank(), r);

        // heredity: a submatrix never has larger rank
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        if !sub_rows.is_empty() && !sub_cols.is_empty() {
            let rect = logrank_core::Rectangle::new(sub_rows.clone().into(), sub_cols.clone().into());
            let sr = f.rank_on(&rect);
            prop_assert!(sr <= r);
            prop_assert_eq!(sr, sign_rank(&f, &sub_rows, &sub_cols));
        }
    }

    #[test]
    fn dedupe_maps_back(f in sign_matrix()) {
        let d = f.dedupe();
        for i in 0..f.n_rows() {
            for j in 0..f.n_cols() {
                prop_assert_eq!(d.matrix.get(d.row_map[i], d.col_map[j]), f.get(i, j));
            }
        }
        let rows: Vec<&[i8]> = d.matrix.rows().collect();
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                prop_assert_ne!(rows[a], rows[b]);
            }
        }
    }

    #[test]
    fn disc_under_is_symmetric(f in sign_matrix()) {
        let mu = EntryDistribution::uniform(f.n_rows(), f.n_cols());
        let mu_t = EntryDistribution::uniform(f.n_cols(), f.n_rows());
        let (a, _) = disc_under(&f, &mu).unwrap();
        let (b, _) = disc_under(&f.transpose(), &mu_t).unwrap();
        let (c, _) = disc_under(&f.negate(), &mu).unwrap();
        prop_assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);
    }
}
