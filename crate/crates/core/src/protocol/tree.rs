use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;
use crate::rect::{IndexSet, Rectangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Row,
    Col,
}

/// A protocol tree. Every node carries the rectangle of inputs that reach
/// it; an internal node's speaker splits its own side of that rectangle in
/// two, sending bit `k` for part `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProtocolTree {
    Leaf { domain: Rectangle, leaf: i8 },
    Internal { domain: Rectangle, speaker: Speaker, split: [IndexSet; 2], children: Box<[ProtocolTree; 2]> },
}

impl ProtocolTree {
    pub fn leaf(domain: Rectangle, value: i8) -> Self {
        ProtocolTree::Leaf { domain, leaf: value }
    }

    /// An internal node whose split is read off the children's domains.
    pub fn internal(domain: Rectangle, speaker: Speaker, left: ProtocolTree, right: ProtocolTree) -> Self {
        let side = |t: &ProtocolTree| match speaker {
            Speaker::Row => t.domain().rows.clone(),
            Speaker::Col => t.domain().cols.clone(),
        };
        let split = [side(&left), side(&right)];
        ProtocolTree::Internal { domain, speaker, split, children: Box::new([left, right]) }
    }

    pub fn domain(&self) -> &Rectangle {
        match self {
            ProtocolTree::Leaf { domain, .. } | ProtocolTree::Internal { domain, .. } => domain,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 0,
            ProtocolTree::Internal { children, .. } => 1 + children[0].depth().max(children[1].depth()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 1,
            ProtocolTree::Internal { children, .. } => children[0].leaves() + children[1].leaves(),
        }
    }

    pub fn internal_nodes(&self) -> usize {
        self.leaves() - 1
    }

    /// Re-roots the tree on `d`: intersects every domain with `d`, drops
    /// subtrees that become empty and splices out nodes left with a single
    /// child. `None` if nothing of the tree meets `d`.
    pub fn restrict(&self, d: &Rectangle) -> Option<ProtocolTree> {
        let dom = self.domain().intersect(d);
        if dom.is_empty() {
            return None;
        }
        match self {
            ProtocolTree::Leaf { leaf, .. } => Some(ProtocolTree::leaf(dom, *leaf)),
            ProtocolTree::Internal { speaker, children, .. } => {
                match (children[0].restrict(d), children[1].restrict(d)) {
                    (Some(a), Some(b)) => Some(ProtocolTree::internal(dom, *speaker, a, b)),
                    (Some(a), None) | (None, Some(a)) => Some(a),
                    (None, None) => None,
                }
            }
        }
    }
}

/// Bits sent on one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub value: i8,
    pub bits: Vec<(Speaker, u8)>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Runs the protocol on input `(x, y)`.
pub fn run(tree: &ProtocolTree, x: usize, y: usize) -> Result<Transcript> {
    if !tree.domain().contains(x, y) {
        return Err(Error::precondition(format!("input ({x}, {y}) outside the protocol's domain")));
    }
    let mut node = tree;
    let mut bits = Vec::new();
    loop {
        match node {
            ProtocolTree::Leaf { leaf, .. } => return Ok(Transcript { value: *leaf, bits }),
            ProtocolTree::Internal { speaker, split, children, .. } => {
                let v = match speaker {
                    Speaker::Row => x,
                    Speaker::Col => y,
                };
                let bit = if split[0].contains(v) {
                    0
                } else if split[1].contains(v) {
                    1
                } else {
                    return Err(Error::Verification(format!("input ({x}, {y}) falls outside a split")));
                };
                bits.push((*speaker, bit));
                node = &children[bit as usize];
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub structural_errors: Vec<String>,
    /// First cell `(x, y, f(x,y), protocol output)` that disagrees.
    pub counterexample: Option<(usize, usize, i8, i8)>,
    pub cells_checked: usize,
}

/// Checks structure (root covers the matrix, splits partition domains,
/// leaves are monochromatic) and extensional correctness on every cell.
pub fn verify(f: &SignMatrix, tree: &ProtocolTree) -> VerifyReport {
    let mut report = VerifyReport::default();
    if tree.domain() != &f.full_rect() {
        report.structural_errors.push(format!("root domain {} is not the full matrix", tree.domain()));
    }
    check_node(f, tree, &mut report.structural_errors);
    'cells: for x in 0..f.n_rows() {
        for y in 0..f.n_cols() {
            report.cells_checked += 1;
            match run(tree, x, y) {
                Ok(t) if t.value == f.get(x, y) => {}
                Ok(t) => {
                    report.counterexample = Some((x, y, f.get(x, y), t.value));
                    break 'cells;
                }
                Err(e) => {
                    report.structural_errors.push(e.to_string());
                    report.counterexample = Some((x, y, f.get(x, y), 0));
                    break 'cells;
                }
            }
        }
    }
    report.pass = report.structural_errors.is_empty() && report.counterexample.is_none();
    report
}

fn check_node(f: &SignMatrix, node: &ProtocolTree, errors: &mut Vec<String>) {
    if errors.len() > 20 {
        return;
    }
    let dom = node.domain();
    if dom.is_empty() || !dom.within(f.n_rows(), f.n_cols()) {
        errors.push(format!("node domain {dom} is empty or out of bounds"));
        return;
    }
    match node {
        ProtocolTree::Leaf { leaf, .. } => {
            if f.constant_on(dom) != Some(*leaf) {
                errors.push(format!("leaf {dom} is not monochromatic with value {leaf}"));
            }
        }
        ProtocolTree::Internal { speaker, split, children, .. } => {
            let (own, other) = match speaker {
                Speaker::Row => (&dom.rows, &dom.cols),
                Speaker::Col => (&dom.cols, &dom.rows),
            };
            if split[0].is_empty() || split[1].is_empty() {
                errors.push(format!("node {dom} has an empty split part"));
            }
            if !split[0].is_disjoint(&split[1]) {
                errors.push(format!("node {dom} has overlapping split parts"));
            }
            if &split[0].union(&split[1]) != own {
                errors.push(format!("split of node {dom} does not cover the speaker's side"));
            }
            for (k, child) in children.iter().enumerate() {
                let c = child.domain();
                let (c_own, c_other) = match speaker {
                    Speaker::Row => (&c.rows, &c.cols),
                    Speaker::Col => (&c.cols, &c.rows),
                };
                if c_own != &split[k] || c_other != other {
                    errors.push(format!("child {k} of {dom} has domain {c} inconsistent with the split"));
                }
                check_node(f, child, errors);
            }
        }
    }
}
