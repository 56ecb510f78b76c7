//! Index sets and combinatorial rectangles.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A sorted set of row or column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl From<Vec<usize>> for IndexSet {
    fn from(v: Vec<usize>) -> Self {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

impl IndexSet {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// Indices of the set bits of `mask`, offset by nothing.
    pub fn from_mask(mask: u64) -> Self {
        IndexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        IndexSet(out)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Membership mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &i in &self.0 {
            if i < n {
                m[i] = true;
            }
        }
        m
    }

    /// Position of `i` inside the set, if present.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A combinatorial rectangle `rows × cols`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rectangle {
    pub rows: IndexSet,
    pub cols: IndexSet,
}

impl Rectangle {
    pub fn new(rows: IndexSet, cols: IndexSet) -> Self {
        Rectangle { rows, cols }
    }

    pub fn full(n_rows: usize, n_cols: usize) -> Self {
        Rectangle::new(IndexSet::range(n_rows), IndexSet::range(n_cols))
    }

    pub fn empty() -> Self {
        Rectangle::default()
    }

    pub fn cell(i: usize, j: usize) -> Self {
        Rectangle::new(IndexSet(vec![i]), IndexSet(vec![j]))
    }

    /// True when either side is empty.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }

    pub fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.contains(i) && self.cols.contains(j)
    }

    pub fn intersect(&self, other: &Rectangle) -> Rectangle {
        Rectangle::new(self.rows.intersection(&other.rows), self.cols.intersection(&other.cols))
    }

    pub fn is_subset(&self, other: &Rectangle) -> bool {
        self.is_empty() || (self.rows.is_subset(&other.rows) && self.cols.is_subset(&other.cols))
    }

    pub fn within(&self, n_rows: usize, n_cols: usize) -> bool {
        self.rows.last().is_none_or(|i| i < n_rows) && self.cols.last().is_none_or(|j| j < n_cols)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().flat_map(move |i| self.cols.iter().map(move |j| (i, j)))
    }

    pub fn transpose(&self) -> Rectangle {
        Rectangle::new(self.cols.clone(), self.rows.clone())
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}×{}", self.rows, self.cols)
    }
}
