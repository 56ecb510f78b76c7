//! The fixed test corpus and its on-disk form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::{inner_product, random_low_rank, rigidity_example, LowRankMode};
use crate::matrix::{IntMatrix, SignMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum CorpusMatrix {
    Sign(SignMatrix),
    Int(IntMatrix),
}

impl CorpusMatrix {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            CorpusMatrix::Sign(f) => (f.n_rows(), f.n_cols()),
            CorpusMatrix::Int(m) => (m.n_rows(), m.n_cols()),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CorpusMatrix::Sign(f) => f.rank(),
            CorpusMatrix::Int(m) => m.rank(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            CorpusMatrix::Sign(f) => f.to_text(),
            CorpusMatrix::Int(m) => m.to_text(),
        }
    }

    pub fn format(&self) -> &'static str {
        match self {
            CorpusMatrix::Sign(_) => "sign",
            CorpusMatrix::Int(_) => "int",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: String,
    pub seed: Option<u64>,
    pub matrix: CorpusMatrix,
}

impl CorpusEntry {
    fn sign(name: impl Into<String>, kind: &str, seed: Option<u64>, f: SignMatrix) -> Self {
        CorpusEntry { name: name.into(), kind: kind.into(), seed, matrix: CorpusMatrix::Sign(f) }
    }

    /// The sign matrix, if this entry is one.
    pub fn sign_matrix(&self) -> Option<&SignMatrix> {
        match &self.matrix {
            CorpusMatrix::Sign(f) => Some(f),
            CorpusMatrix::Int(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub kind: String,
    /// `sign` (`+`/`-` rows) or `int` (whitespace-separated integers).
    pub format: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub seed: Option<u64>,
}

fn hand_fixtures() -> Result<Vec<CorpusEntry>> {
    let fix = |name: &str, f: SignMatrix| CorpusEntry::sign(name, "fixture", None, f);
    let pm = |b: bool| if b { 1i8 } else { -1 };
    Ok(vec![
        fix("ones-3x3", SignMatrix::from_fn(3, 3, |_, _| 1)?),
        fix("minus-4x5", SignMatrix::from_fn(4, 5, |_, _| -1)?),
        fix("single-cell-1x1", SignMatrix::from_fn(1, 1, |_, _| -1)?),
        fix("one-minus-4x4", SignMatrix::from_fn(4, 4, |i, j| pm(i != 3 || j != 3))?),
        fix("row-split-6x4", SignMatrix::from_fn(6, 4, |i, _| pm(i % 2 == 0))?),
        fix("checker-6x6", SignMatrix::from_fn(6, 6, |i, j| pm((i + j) % 2 == 0))?),
        fix("blocks-8x8", SignMatrix::from_fn(8, 8, |i, j| pm((i < 4) == (j < 4)))?),
        fix("diag-3x3", SignMatrix::from_fn(3, 3, |i, j| pm(i == j))?),
        fix("diag-5x5", SignMatrix::from_fn(5, 5, |i, j| pm(i == j))?),
        fix("diag-8x8", SignMatrix::from_fn(8, 8, |i, j| pm(i == j))?),
        fix("greater-than-5x5", SignMatrix::from_fn(5, 5, |i, j| pm(i >= j))?),
        fix("greater-than-8x8", SignMatrix::from_fn(8, 8, |i, j| pm(i >= j))?),
        fix("greater-than-12x7", SignMatrix::from_fn(12, 7, |i, j| pm(i >= 2 * j))?),
        fix("disjointness-2", SignMatrix::from_fn(4, 4, |x, y| pm(x & y == 0))?),
        fix("disjointness-3", SignMatrix::from_fn(8, 8, |x, y| pm(x & y == 0))?),
        fix("band-7x7", SignMatrix::from_fn(7, 7, |i, j| pm(i.abs_diff(j) <= 1))?),
    ])
}

/// The acceptance corpus: sign matrices of at most 12×12 with ranks 1 to 8.
/// Random members are drawn from `seed`.
pub fn default_corpus(seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(CorpusEntry::sign(format!("ip-{k}"), "inner-product", None, inner_product(k)?));
    }
    out.extend(hand_fixtures()?);
    let mut idx = 0u64;
    let pattern_shapes = [(6, 6), (8, 10), (12, 12)];
    for r in 1..=8usize {
        for &(n, m) in &pattern_shapes {
            if r > n.min(m) {
                continue;
            }
            let s = seed.wrapping_add(idx);
            idx += 1;
            let f = random_low_rank(n, m, r, s, LowRankMode::Pattern)?;
            out.push(CorpusEntry::sign(format!("pattern-{n}x{m}-r{r}"), "random-pattern", Some(s), f));
        }
    }
    for &(n, m, r) in &[
        (6, 6, 2),
        (8, 8, 2),
        (8, 8, 4),
        (10, 12, 4),
        (12, 12, 4),
        (12, 12, 8),
        (10, 10, 8),
        (9, 11, 8),
        (7, 9, 2),
        (11, 11, 4),
    ] {
        let s = seed.wrapping_add(idx);
        idx += 1;
        let f = random_low_rank(n, m, r, s, LowRankMode::BoolProduct)?;
        out.push(CorpusEntry::sign(format!("boolprod-{n}x{m}-r{r}"), "random-bool-product", Some(s), f));
    }
    Ok(out)
}

/// [`default_corpus`] plus larger members: the 16×16 inner product and two
/// rigidity examples (integer matrices).
pub fn extended_corpus(seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut out = default_corpus(seed)?;
    out.push(CorpusEntry::sign("ip-4", "inner-product", None, inner_product(4)?));
    for (r, w) in [(8, 2), (16, 2)] {
        out.push(CorpusEntry {
            name: format!("rigidity-r{r}-w{w}"),
            kind: "rigidity".into(),
            seed: None,
            matrix: CorpusMatrix::Int(rigidity_example(r, w)?),
        });
    }
    Ok(out)
}

pub fn manifest(entries: &[CorpusEntry]) -> Vec<ManifestEntry> {
    entries
        .iter()
        .map(|e| {
            let (rows, cols) = e.matrix.dims();
            ManifestEntry {
                name: e.name.clone(),
                file: format!("{}.txt", e.name),
                kind: e.kind.clone(),
                format: e.matrix.format().into(),
                rows,
                cols,
                rank: e.matrix.rank(),
                seed: e.seed,
            }
        })
        .collect()
}

/// Writes one text file per entry and `manifest.json` into `dir`.
pub fn write_corpus(dir: &Path, entries: &[CorpusEntry]) -> Result<Vec<ManifestEntry>> {
    fs::create_dir_all(dir)?;
    let man = manifest(entries);
    for (e, m) in entries.iter().zip(&man) {
        fs::write(dir.join(&m.file), e.matrix.to_text())?;
    }
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&man)? + "\n")?;
    Ok(man)
}

/// Reads back a directory written by [`write_corpus`].
pub fn read_corpus(dir: &Path) -> Result<Vec<(ManifestEntry, CorpusMatrix)>> {
    let man: Vec<ManifestEntry> = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    man.into_iter()
        .map(|m| {
            let text = fs::read_to_string(dir.join(&m.file))?;
            let mat = if m.format == "int" {
                CorpusMatrix::Int(IntMatrix::parse(&text)?)
            } else {
                CorpusMatrix::Sign(SignMatrix::parse(&text)?)
            };
            Ok((m, mat))
        })
        .collect()
}
