mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logrank_core::amplification::AmplifyOptions;
use logrank_core::generators::{inner_product, random_low_rank, LowRankMode};
use logrank_core::protocol::{
    balance, balance_bound, complexity, exact_cc, nw_build, run, verify, BruteForceFinder, GreedyFinder, MonoFinder,
    PipelineFinder, ProtocolTree,
};
use logrank_core::SignMatrix;

use common::*;

fn cases() -> Vec<SignMatrix> {
    let mut out = vec![inner_product(1).unwrap(), inner_product(2).unwrap()];
    for seed in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m, r) = (rng.gen_range(3..=8), rng.gen_range(3..=8), rng.gen_range(1..=3));
        let mode = if seed % 2 == 0 { LowRankMode::Pattern } else { LowRankMode::BoolProduct };
        out.push(random_low_rank(n, m, r, seed, mode).unwrap().dedupe().matrix);
    }
    out
}

fn agrees(f: &SignMatrix, t: &ProtocolTree) -> bool {
    (0..f.n_rows()).all(|x| (0..f.n_cols()).all(|y| run(t, x, y).map(|tr| tr.value).ok() == Some(f.get(x, y))))
}

#[test]
fn every_finder_builds_a_correct_protocol() {
    let pipeline = PipelineFinder::new(1, None, AmplifyOptions::default());
    let finders: [&dyn MonoFinder; 3] = [&BruteForceFinder, &GreedyFinder, &pipeline];
    for f in cases() {
        for finder in finders {
            let b = nw_build(&f, finder).unwrap();
            assert!(agrees(&f, &b.tree), "{}", finder.name());
            assert!(verify(&f, &b.tree).pass);
            assert_eq!(b.trace.len(), b.tree.internal_nodes());
            for s in &b.trace {
                let r = sign_rank(&f, s.domain.rows.as_slice(), s.domain.cols.as_slice());
                assert_eq!(s.rank, r);
                let rest_cols = s.domain.cols.difference(&s.rect.cols);
                let rest_rows = s.domain.rows.difference(&s.rect.rows);
                let rs = sign_rank(&f, s.rect.rows.as_slice(), rest_cols.as_slice());
                let rp = sign_rank(&f, rest_rows.as_slice(), s.rect.cols.as_slice());
                assert_eq!((s.rank_s, s.rank_p), (rs, rp));
                assert!(rs + rp <= r + 1);
                assert!(is_monochromatic(&f, s.rect.rows.as_slice(), s.rect.cols.as_slice()).is_some());
            }
        }
    }
}

#[test]
fn balancing_preserves_the_function() {
    for f in cases() {
        let b = nw_build(&f, &GreedyFinder).unwrap();
        let bal = balance(&b.tree);
        assert!(agrees(&f, &bal));
        assert!(bal.depth() <= b.tree.depth());
        assert!(bal.depth() <= balance_bound(b.tree.leaves()));
        let rep = complexity(&f, &b.tree, &b.trace, &bal);
        assert_eq!(rep.balanced_depth, bal.depth());
        if f.n_rows() <= 8 && f.n_cols() <= 8 {
            assert!(rep.exact_cc.unwrap() <= bal.depth());
        }
    }
}

#[test]
fn exact_cc_lower_bounds_by_rank() {
    // a protocol of depth d has at most 2^d leaves, and rank ≤ leaves
    for f in cases() {
        let cc = exact_cc(&f).unwrap();
        assert!(1usize << cc >= f.rank(), "cc {cc} rank {}", f.rank());
    }
}

#[test]
fn transcripts_follow_the_tree() {
    let f = inner_product(2).unwrap();
    let b = nw_build(&f, &BruteForceFinder).unwrap();
    for x in 0..4 {
        for y in 0..4 {
            let t = run(&b.tree, x, y).unwrap();
            assert!(t.len() <= b.tree.depth());
            assert_eq!(t.value, f.get(x, y));
        }
    }
    let text = serde_json::to_string(&b.tree).unwrap();
    let back: ProtocolTree = serde_json::from_str(&text).unwrap();
    assert_eq!(back, b.tree);
    assert!(run(&b.tree, 4, 0).is_err());
}
