//! Sign and integer matrices.

use serde::{Deserialize, Serialize};

use crate::dist::EntryDistribution;
use crate::error::{Error, Result};
use crate::rank::rank_of;
use crate::rect::{IndexSet, Rectangle};

/// JSON shape shared by both matrix types.
#[derive(Serialize, Deserialize)]
struct MatrixJson<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<T>>,
}

/// A total boolean function `f: X × Y → {−1, +1}` as a row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson<i8>", into = "MatrixJson<i8>")]
pub struct SignMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<i8>,
}

impl TryFrom<MatrixJson<i8>> for SignMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson<i8>) -> Result<Self> {
        let m = SignMatrix::from_rows(j.entries)?;
        if m.n_rows != j.rows || m.n_cols != j.cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared {}×{} but entries are {}×{}", j.rows, j.cols, m.n_rows, m.n_cols),
            });
        }
        Ok(m)
    }
}

impl From<SignMatrix> for MatrixJson<i8> {
    fn from(m: SignMatrix) -> Self {
        MatrixJson { rows: m.n_rows, cols: m.n_cols, entries: m.rows().map(|r| r.to_vec()).collect() }
    }
}

/// Result of [`SignMatrix::dedupe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deduped {
    pub matrix: SignMatrix,
    /// Original row index → row of `matrix`.
    pub row_map: Vec<usize>,
    /// Original column index → column of `matrix`.
    pub col_map: Vec<usize>,
}

impl SignMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<i8>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::precondition("sign matrix must have at least one row and column"));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::precondition(format!("expected {} entries, got {}", n_rows * n_cols, entries.len())));
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::precondition(format!("entry {bad} is not ±1")));
        }
        Ok(SignMatrix { n_rows, n_cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("ragged row: expected {n_cols} entries, got {}", r.len()),
                });
            }
        }
        SignMatrix::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut e = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                e.push(f(i, j));
            }
        }
        SignMatrix::new(n_rows, n_cols, e)
    }

    /// Parses the text format: one row per line, entries given either as a
    /// run of `+`/`-` characters or as whitespace-separated tokens from
    /// `+ - 1 -1 +1`. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<i8>> = Vec::new();
        let mut width: Option<usize> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = ln + 1;
            let row = parse_row(line).map_err(|msg| Error::Parse { line: lineno, msg })?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("ragged row: expected {w} entries, got {}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty input".into() });
        }
        SignMatrix::from_rows(rows)
    }

    /// Renders the `+`/`-` text format, one row per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n_rows * (self.n_cols + 1));
        for r in self.rows() {
            for &e in r {
                s.push(if e > 0 { '+' } else { '-' });
            }
            s.push('\n');
        }
        s
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn cells(&self) -> usize {
        self.n_rows * self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n_cols + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n_cols)
    }

    pub fn full_rect(&self) -> Rectangle {
        Rectangle::full(self.n_rows, self.n_cols)
    }

    pub fn negate(&self) -> SignMatrix {
        SignMatrix { n_rows: self.n_rows, n_cols: self.n_cols, entries: self.entries.iter().map(|e| -e).collect() }
    }

    pub fn transpose(&self) -> SignMatrix {
        let mut e = Vec::with_capacity(self.entries.len());
        for j in 0..self.n_cols {
            for i in 0..self.n_rows {
                e.push(self.get(i, j));
            }
        }
        SignMatrix { n_rows: self.n_cols, n_cols: self.n_rows, entries: e }
    }

    /// The common value if every entry is equal.
    pub fn constant_value(&self) -> Option<i8> {
        let v = self.entries[0];
        self.entries.iter().all(|&e| e == v).then_some(v)
    }

    /// The common value of `f` on `r`, if `r` is nonempty and monochromatic.
    pub fn constant_on(&self, r: &Rectangle) -> Option<i8> {
        let (i0, j0) = r.cells().next()?;
        let v = self.get(i0, j0);
        r.cells().all(|(i, j)| self.get(i, j) == v).then_some(v)
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().map(|&e| e as i64).collect(),
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let data: Vec<i64> = self.entries.iter().map(|&e| e as i64).collect();
        rank_of(self.n_rows, self.n_cols, &data)
    }

    /// Rank of the submatrix on `r`; zero for an empty rectangle.
    pub fn rank_on(&self, r: &Rectangle) -> usize {
        if r.is_empty() {
            return 0;
        }
        let data: Vec<i64> = r.cells().map(|(i, j)| self.get(i, j) as i64).collect();
        rank_of(r.rows.len(), r.cols.len(), &data)
    }

    /// The `|rows| × |cols|` submatrix on `r`, in increasing index order.
    pub fn restrict(&self, r: &Rectangle) -> Result<SignMatrix> {
        if r.is_empty() {
            return Err(Error::precondition("cannot restrict to an empty rectangle"));
        }
        if !r.within(self.n_rows, self.n_cols) {
            return Err(Error::precondition(format!("rectangle {r} outside a {}×{} matrix", self.n_rows, self.n_cols)));
        }
        let e = r.cells().map(|(i, j)| self.get(i, j)).collect();
        SignMatrix::new(r.rows.len(), r.cols.len(), e)
    }

    /// Removes repeated rows and columns, keeping first occurrences.
    pub fn dedupe(&self) -> Deduped {
        let (keep_rows, row_map) = first_occurrences(self.rows().map(|r| r.to_vec()));
        let t = self.transpose();
        let (keep_cols, col_map) = first_occurrences(t.rows().map(|r| r.to_vec()));
        let rect = Rectangle::new(IndexSet::new(keep_rows), IndexSet::new(keep_cols));
        let matrix = self.restrict(&rect).expect("dedupe keeps at least one row and column");
        Deduped { matrix, row_map, col_map }
    }

    /// `E_μ[f | r]`.
    pub fn average(&self, mu: &EntryDistribution, r: &Rectangle) -> Result<f64> {
        if mu.n_rows() != self.n_rows || mu.n_cols() != self.n_cols {
            return Err(Error::precondition("distribution shape does not match the matrix"));
        }
        let (mut mass, mut signed) = (0.0, 0.0);
        for (i, j) in r.cells() {
            let w = mu.weight(i, j);
            mass += w;
            signed += w * self.get(i, j) as f64;
        }
        if mass <= 0.0 {
            return Err(Error::precondition("conditioning on null event"));
        }
        Ok(signed / mass)
    }

    /// Number of `-1` and `+1` entries on `r`.
    pub fn count_signs(&self, r: &Rectangle) -> (usize, usize) {
        let minus = r.cells().filter(|&(i, j)| self.get(i, j) < 0).count();
        (minus, r.area() - minus)
    }
}

fn first_occurrences(lines: impl Iterator<Item = Vec<i8>>) -> (Vec<usize>, Vec<usize>) {
    let mut seen: std::collections::HashMap<Vec<i8>, usize> = std::collections::HashMap::new();
    let mut keep = Vec::new();
    let mut map = Vec::new();
    for (i, line) in lines.enumerate() {
        let next = keep.len();
        let idx = *seen.entry(line).or_insert_with(|| {
            keep.push(i);
            next
        });
        map.push(idx);
    }
    (keep, map)
}

fn parse_row(line: &str) -> std::result::Result<Vec<i8>, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() == 1 && tokens[0].chars().all(|c| c == '+' || c == '-') && tokens[0] != "-" {
        return Ok(tokens[0].chars().map(|c| if c == '+' { 1 } else { -1 }).collect());
    }
    tokens
        .iter()
        .map(|t| match *t {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(format!("symbol {other:?} is not one of + - 1 -1")),
        })
        .collect()
}

/// An integer matrix with exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson<i64>", into = "MatrixJson<i64>")]
pub struct IntMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<i64>,
}

impl TryFrom<MatrixJson<i64>> for IntMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson<i64>) -> Result<Self> {
        let m = IntMatrix::from_rows(j.entries)?;
        if m.n_rows != j.rows || m.n_cols != j.cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared {}×{} but entries are {}×{}", j.rows, j.cols, m.n_rows, m.n_cols),
            });
        }
        Ok(m)
    }
}

impl From<IntMatrix> for MatrixJson<i64> {
    fn from(m: IntMatrix) -> Self {
        MatrixJson {
            rows: m.n_rows,
            cols: m.n_cols,
            entries: m.entries.chunks(m.n_cols.max(1)).map(|r| r.to_vec()).collect(),
        }
    }
}

impl IntMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<i64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::precondition("matrix must have at least one row and column"));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::precondition(format!("expected {} entries, got {}", n_rows * n_cols, entries.len())));
        }
        Ok(IntMatrix { n_rows, n_cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("ragged row: expected {n_cols} entries, got {}", r.len()),
                });
            }
        }
        IntMatrix::new(rows.len(), n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        let mut e = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                e.push(f(i, j));
            }
        }
        IntMatrix::new(n_rows, n_cols, e)
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self> {
        IntMatrix::new(n_rows, n_cols, vec![0; n_rows * n_cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        IntMatrix::from_fn(n, n, |i, j| (i == j) as i64)
    }

    /// Whitespace-separated integers, one row per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse { line: ln + 1, msg: format!("{t:?} is not an integer") })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first() {
                let first: &Vec<i64> = first;
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        line: ln + 1,
                        msg: format!("ragged row: expected {} entries, got {}", first.len(), row.len()),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty input".into() });
        }
        IntMatrix::from_rows(rows)
    }

    /// Renders the text format read by [`IntMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n_cols + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        rank_of(self.n_rows, self.n_cols, &self.entries)
    }

    pub fn rank_on(&self, r: &Rectangle) -> usize {
        if r.is_empty() {
            return 0;
        }
        let data: Vec<i64> = r.cells().map(|(i, j)| self.get(i, j)).collect();
        rank_of(r.rows.len(), r.cols.len(), &data)
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().filter(|&&x| x != 0).count()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n_cols, self.n_rows, |i, j| self.get(j, i)).expect("nonempty")
    }

    /// `self · otherᵗ`, i.e. row inner products.
    pub fn mul_transpose(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n_cols != other.n_cols {
            return Err(Error::precondition("inner dimensions differ"));
        }
        IntMatrix::from_fn(self.n_rows, other.n_rows, |i, j| {
            (0..self.n_cols).map(|k| self.get(i, k) * other.get(j, k)).sum()
        })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &IntMatrix, op: impl Fn(i64, i64) -> i64) -> Result<IntMatrix> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(Error::precondition("matrix shapes differ"));
        }
        let e = self.entries.iter().zip(&other.entries).map(|(&a, &b)| op(a, b)).collect();
        IntMatrix::new(self.n_rows, self.n_cols, e)
    }

    pub fn restrict(&self, r: &Rectangle) -> Result<IntMatrix> {
        if r.is_empty() || !r.within(self.n_rows, self.n_cols) {
            return Err(Error::precondition(format!("bad restriction rectangle {r}")));
        }
        IntMatrix::new(r.rows.len(), r.cols.len(), r.cells().map(|(i, j)| self.get(i, j)).collect())
    }

    pub fn is_zero_on(&self, r: &Rectangle) -> bool {
        r.cells().all(|(i, j)| self.get(i, j) == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i8]]) -> SignMatrix {
        SignMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(SignMatrix::parse("+-\n-+").unwrap(), m(&[&[1, -1], &[-1, 1]]));
        assert_eq!(SignMatrix::parse("++\n++").unwrap(), m(&[&[1, 1], &[1, 1]]));
        assert_eq!(SignMatrix::parse("1 -1\n-1 +1\n").unwrap(), m(&[&[1, -1], &[-1, 1]]));
        assert_eq!(SignMatrix::parse("+ -\n- +").unwrap(), m(&[&[1, -1], &[-1, 1]]));
        assert_eq!(SignMatrix::parse("-1\n1").unwrap(), m(&[&[-1], &[1]]));
    }

    #[test]
    fn parse_errors() {
        match SignMatrix::parse("+-\n-") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("ragged")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(SignMatrix::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(SignMatrix::parse("  \n\n"), Err(Error::Parse { .. })));
        assert!(matches!(SignMatrix::parse("+x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(SignMatrix::parse("1 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn text_round_trip() {
        let a = m(&[&[1, -1, 1], &[-1, -1, 1]]);
        assert_eq!(SignMatrix::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn json_shape() {
        let a = m(&[&[1, -1], &[-1, 1]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[[1,-1],[-1,1]]}"#);
        assert_eq!(serde_json::from_str::<SignMatrix>(&s).unwrap(), a);
        assert!(serde_json::from_str::<SignMatrix>(r#"{"rows":1,"cols":1,"entries":[[2]]}"#).is_err());
        assert!(serde_json::from_str::<SignMatrix>(r#"{"rows":2,"cols":1,"entries":[[1]]}"#).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(m(&[&[1; 4], &[1; 4], &[1; 4], &[1; 4]]).rank(), 1);
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.rank(), 2);
        let rep = m(&[&[1, 1], &[1, -1], &[1, 1]]);
        assert_eq!(rep.rank(), rep.dedupe().matrix.rank());
    }

    #[test]
    fn dedupe_examples() {
        let d = m(&[&[1, 1], &[1, 1]]).dedupe();
        assert_eq!(d.matrix, m(&[&[1]]));
        assert_eq!(d.row_map, vec![0, 0]);
        assert_eq!(d.col_map, vec![0, 0]);

        let a = m(&[&[1, -1], &[-1, 1]]);
        let d = a.dedupe();
        assert_eq!(d.matrix, a);
        assert_eq!(d.row_map, vec![0, 1]);

        let d = m(&[&[1, -1], &[1, -1], &[1, 1]]).dedupe();
        assert_eq!(d.row_map, vec![0, 0, 1]);
        assert!(d.matrix.n_rows() <= 2 && d.matrix.n_cols() <= 2);
    }

    #[test]
    fn restrict_examples() {
        let a = m(&[&[1, -1], &[-1, 1]]);
        assert_eq!(a.restrict(&a.full_rect()).unwrap(), a);
        let r = Rectangle::new(IndexSet::new(vec![0]), IndexSet::range(2));
        assert_eq!(a.restrict(&r).unwrap(), m(&[&[1, -1]]));
        assert!(a.restrict(&Rectangle::empty()).is_err());
        let out = Rectangle::new(IndexSet::new(vec![5]), IndexSet::range(2));
        assert!(a.restrict(&out).is_err());
    }

    #[test]
    fn average_examples() {
        let ones = m(&[&[1, 1], &[1, 1]]);
        let mu = EntryDistribution::uniform(2, 2);
        let skew = EntryDistribution::from_weights(2, 2, vec![0.7, 0.1, 0.2, 0.0]).unwrap();
        assert_eq!(ones.average(&skew, &ones.full_rect()).unwrap(), 1.0);
        let a = m(&[&[1, -1], &[-1, 1]]);
        assert_eq!(a.average(&mu, &a.full_rect()).unwrap(), 0.0);
        let top = Rectangle::new(IndexSet::new(vec![0]), IndexSet::range(2));
        assert_eq!(a.average(&mu, &top).unwrap(), 0.0);
        let null = Rectangle::cell(1, 1);
        match a.average(&skew, &null) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("null event")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn int_matrix_basics() {
        let a = IntMatrix::parse("1 2\n3 4").unwrap();
        assert_eq!(a.rank(), 2);
        let b = a.mul_transpose(&a).unwrap();
        assert_eq!(b.get(0, 1), 11);
        assert_eq!(a.add(&a).unwrap().sub(&a).unwrap(), a);
        assert!(IntMatrix::parse("1 2\n3").is_err());
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), a);
    }
}
