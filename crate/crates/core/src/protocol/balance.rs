//! Depth reduction for protocol trees.

use crate::rect::Rectangle;

use super::tree::{ProtocolTree, Speaker};

/// Constant in [`balance_bound`].
pub const BALANCE_K: usize = 3;

/// `K·⌈log_{3/2} L⌉ + K`, the depth guaranteed by [`balance`] for a tree with
/// `L` leaves.
pub fn balance_bound(leaves: usize) -> usize {
    if leaves <= 1 {
        return BALANCE_K;
    }
    let mut k = 0usize;
    let mut p = 1.0f64;
    while p < leaves as f64 {
        p *= 1.5;
        k += 1;
    }
    BALANCE_K * k + BALANCE_K
}

/// Returns an equivalent tree of depth `O(log L)`.
///
/// Picks a node `v` holding between a third and two thirds of the leaves.
/// The row player says whether `x ∈ rows(v)`, then (if so) the column player
/// whether `y ∈ cols(v)`. Inside `v`'s rectangle the protocol continues with
/// `v`'s subtree; elsewhere `v` is unreachable and is cut out. Both parts are
/// balanced recursively. A subtree that is already shallower than its
/// rebalanced form is kept as is.
pub fn balance(tree: &ProtocolTree) -> ProtocolTree {
    let b = rebalance(tree);
    if b.depth() <= tree.depth() {
        b
    } else {
        tree.clone()
    }
}

fn rebalance(tree: &ProtocolTree) -> ProtocolTree {
    let total = tree.leaves();
    if total <= 2 {
        return tree.clone();
    }
    let v = pivot(tree, total);
    let d = tree.domain();
    let vd = v.domain();
    let rows_in = d.rows.intersection(&vd.rows);
    let rows_out = d.rows.difference(&vd.rows);
    let cols_in = d.cols.intersection(&vd.cols);
    let cols_out = d.cols.difference(&vd.cols);

    let part = |r: Rectangle| tree.restrict(&r).map(|t| balance(&t));
    let inner = {
        let hit = part(Rectangle::new(rows_in.clone(), cols_in.clone()));
        let miss = part(Rectangle::new(rows_in.clone(), cols_out));
        join(Rectangle::new(rows_in, d.cols.clone()), Speaker::Col, hit, miss)
    };
    let outer = part(Rectangle::new(rows_out, d.cols.clone()));
    join(d.clone(), Speaker::Row, inner, outer).expect("nonempty domain")
}

fn join(domain: Rectangle, speaker: Speaker, a: Option<ProtocolTree>, b: Option<ProtocolTree>) -> Option<ProtocolTree> {
    match (a, b) {
        (Some(a), Some(b)) => Some(ProtocolTree::internal(domain, speaker, a, b)),
        (Some(t), None) | (None, Some(t)) => Some(t),
        (None, None) => None,
    }
}

/// Descends into the heavier child until at most `2/3` of the leaves remain.
fn pivot(tree: &ProtocolTree, total: usize) -> &ProtocolTree {
    let mut node = tree;
    while 3 * node.leaves() > 2 * total {
        match node {
            ProtocolTree::Internal { children, .. } => {
                node = if children[0].leaves() >= children[1].leaves() { &children[0] } else { &children[1] };
            }
            ProtocolTree::Leaf { .. } => unreachable!(),
        }
    }
    node
}
