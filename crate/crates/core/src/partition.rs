//! Partitions, cells, contents and skew shapes.
//!
//! Cells are addressed by `(col, row)` with the origin at the first cell of
//! the first row; rows grow upward (French convention). The content of a
//! cell is `col - row`.

use std::fmt;
use std::str::FromStr;

use num::BigInt;

use crate::error::{Error, Result};

/// A cell of a Ferrers diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

impl Cell {
    pub fn new(col: usize, row: usize) -> Self {
        Cell { col, row }
    }

    /// Content `col - row`; may be negative.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

// Row-major order so that sorted cell lists read bottom row first.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// An integer partition in canonical form: positive non-increasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, stripping trailing zeros. Parts must be
    /// non-increasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not non-increasing: {parts:?}"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(k)`; the empty partition when `k = 0`.
    pub fn single_row(k: usize) -> Self {
        if k == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![k] }
        }
    }

    /// The one-column partition `(1^k)`.
    pub fn single_column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `i`-th part (0-based); 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// True iff the Ferrers diagram of `inner` fits inside this one.
    pub fn contains(&self, inner: &Partition) -> bool {
        (0..inner.len()).all(|i| inner.part(i) <= self.part(i))
    }

    /// Cells of the Ferrers diagram, bottom row first.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (row, &len) in self.parts.iter().enumerate() {
            for col in 0..len {
                out.push(Cell::new(col, row));
            }
        }
        out
    }

    pub fn has_cell(&self, c: Cell) -> bool {
        c.col < self.part(c.row)
    }

    /// Multiset of contents, in the order of [`Partition::cells`].
    pub fn content_multiset(&self) -> Vec<i64> {
        self.cells().iter().map(Cell::content).collect()
    }

    /// Conjugate partition (diagram flipped along the diagonal).
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (1..=cols)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }

    /// Rows at which a cell can be added while staying a partition.
    pub fn addable_rows(&self) -> Vec<usize> {
        let mut rows = Vec::new();
        for row in 0..=self.len() {
            if row == 0 || self.part(row) < self.part(row - 1) {
                rows.push(row);
            }
        }
        rows
    }

    /// All partitions obtained by adding one cell to this diagram.
    pub fn add_cell_set(&self) -> Vec<Partition> {
        self.addable_rows()
            .into_iter()
            .map(|row| {
                let mut parts = self.parts.clone();
                if row == parts.len() {
                    parts.push(1);
                } else {
                    parts[row] += 1;
                }
                Partition { parts }
            })
            .collect()
    }

    /// All partitions of `n`, in descending lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for first in (1..=remaining.min(max_part)).rev() {
                prefix.push(first);
                rec(remaining - first, first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n.max(1), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s = self
            .parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{s}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated parts, e.g. `5,3,3,2`; `""` and `"0"` denote
    /// the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A pair of nested shapes `outer/inner`.
///
/// Containment is not enforced at construction: counting operations treat a
/// non-contained pair as having no tableaux at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewShape {
    pub outer: Partition,
    pub inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Self {
        SkewShape { outer, inner }
    }

    pub fn from_partition(outer: Partition) -> Self {
        SkewShape {
            outer,
            inner: Partition::empty(),
        }
    }

    pub fn is_contained(&self) -> bool {
        self.outer.contains(&self.inner)
    }

    /// Cells of the outer diagram that are not in the inner one.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (row, &len) in self.outer.parts().iter().enumerate() {
            for col in self.inner.part(row).min(len)..len {
                out.push(Cell::new(col, row));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.cells().len()
    }

    pub fn has_cell(&self, c: Cell) -> bool {
        self.outer.has_cell(c) && !self.inner.has_cell(c)
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

impl FromStr for SkewShape {
    type Err = Error;

    /// Parses `outer/inner`, e.g. `5,3,3,2/3,2`; a plain partition is a
    /// skew shape with empty inner.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((o, i)) => Ok(SkewShape::new(o.parse()?, i.parse()?)),
            None => Ok(SkewShape::from_partition(s.parse()?)),
        }
    }
}

/// Falling factorial `n (n-1) ... (n-k+1)`; 1 when `k = 0`, 0 when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    acc
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn cells_of_5332() {
        let shape = p(&[5, 3, 3, 2]);
        let cells = shape.cells();
        assert_eq!(cells.len(), 13);
        assert_eq!(cells.iter().filter(|c| c.row == 0).count(), 5);
        assert_eq!(cells[0], Cell::new(0, 0));
    }

    #[test]
    fn cells_edge_cases() {
        assert!(Partition::empty().cells().is_empty());
        let single = p(&[1]);
        assert_eq!(single.cells(), vec![Cell::new(0, 0)]);
        assert_eq!(single.cells()[0].content(), 0);
    }

    #[test]
    fn content_multiset_5332() {
        let shape = p(&[5, 3, 3, 2]);
        let contents = shape.content_multiset();
        // bottom row carries 0..=4, top row -3 and -2
        assert_eq!(&contents[..5], &[0, 1, 2, 3, 4]);
        assert_eq!(&contents[11..], &[-3, -2]);
    }

    #[test]
    fn content_multiset_small() {
        assert_eq!(p(&[4]).content_multiset(), vec![0, 1, 2, 3]);
        let mut c = p(&[2, 1]).content_multiset();
        c.sort();
        assert_eq!(c, vec![-1, 0, 1]);
        assert_eq!(p(&[2, 1]).content_multiset().iter().sum::<i64>(), 0);
    }

    #[test]
    fn conjugate_examples() {
        // independent column-count oracle
        let shape = p(&[5, 3, 3, 2]);
        let by_columns: Vec<usize> = (0..5)
            .map(|col| shape.parts().iter().filter(|&&len| len > col).count())
            .collect();
        assert_eq!(shape.conjugate().parts(), &by_columns[..]);
        assert_eq!(shape.conjugate(), p(&[4, 4, 3, 1, 1]));
        assert_eq!(p(&[4]).conjugate(), p(&[1, 1, 1, 1]));
    }

    #[test]
    fn conjugate_is_involution() {
        for n in 0..=8 {
            for shape in Partition::all_of(n) {
                assert_eq!(shape.conjugate().conjugate(), shape);
            }
        }
    }

    #[test]
    fn conjugate_negates_contents() {
        for n in 0..=8 {
            for shape in Partition::all_of(n) {
                let mut a = shape.content_multiset();
                let mut b: Vec<i64> = shape
                    .conjugate()
                    .content_multiset()
                    .iter()
                    .map(|c| -c)
                    .collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn add_cell_set_examples() {
        let as_set = |v: Vec<Partition>| v.into_iter().collect::<BTreeSet<_>>();
        assert_eq!(
            as_set(p(&[1]).add_cell_set()),
            as_set(vec![p(&[2]), p(&[1, 1])])
        );
        assert_eq!(
            as_set(p(&[2, 1]).add_cell_set()),
            as_set(vec![p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1])])
        );
        assert_eq!(as_set(Partition::empty().add_cell_set()), as_set(vec![p(&[1])]));
    }

    #[test]
    fn add_cell_set_against_corner_oracle() {
        // brute force: every partition of n+1 containing the shape with one
        // extra cell
        for n in 0..=8 {
            for shape in Partition::all_of(n) {
                let expect: BTreeSet<Partition> = Partition::all_of(n + 1)
                    .into_iter()
                    .filter(|bigger| bigger.contains(&shape))
                    .collect();
                let got: BTreeSet<Partition> = shape.add_cell_set().into_iter().collect();
                assert_eq!(got, expect, "shape {shape}");
                let distinct: BTreeSet<usize> = shape.parts().iter().copied().collect();
                assert_eq!(got.len(), distinct.len() + 1);
            }
        }
    }

    #[test]
    fn contains_examples() {
        assert!(p(&[5, 3, 3, 2]).contains(&p(&[3, 2])));
        assert!(!p(&[2, 1]).contains(&p(&[3])));
        let q = p(&[4, 2, 1]);
        assert!(q.contains(&q));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(4, 4), BigInt::from(24));
        assert_eq!(falling_factorial(7, 0), BigInt::from(1));
        assert_eq!(falling_factorial(3, 2), BigInt::from(6));
        assert_eq!(falling_factorial(3, 5), BigInt::from(0));
    }

    #[test]
    fn row_content_sums() {
        // row j of length L sums to L(L-1)/2 - jL
        let shape = p(&[4, 3, 1]);
        for (j, &len) in shape.parts().iter().enumerate() {
            let sum: i64 = shape
                .cells()
                .iter()
                .filter(|c| c.row == j)
                .map(Cell::content)
                .sum();
            let expect = (len * (len - 1) / 2) as i64 - (j * len) as i64;
            assert_eq!(sum, expect);
        }
        let n = 6;
        let total: i64 = Partition::single_row(n).content_multiset().iter().sum();
        assert_eq!(total, (n * (n - 1) / 2) as i64);
        let total: i64 = Partition::single_column(n).content_multiset().iter().sum();
        assert_eq!(total, -((n * (n - 1) / 2) as i64));
    }

    #[test]
    fn partition_parsing() {
        assert_eq!("5,3,3,2".parse::<Partition>().unwrap(), p(&[5, 3, 3, 2]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert!("3,5".parse::<Partition>().is_err());
        let skew: SkewShape = "5,3,3,2/3,2".parse().unwrap();
        assert_eq!(skew.outer, p(&[5, 3, 3, 2]));
        assert_eq!(skew.inner, p(&[3, 2]));
        assert_eq!(skew.to_string(), "5,3,3,2/3,2");
    }

    #[test]
    fn skew_cells() {
        let skew: SkewShape = "5,3,3,2/3,2".parse().unwrap();
        assert!(skew.is_contained());
        assert_eq!(skew.size(), 8);
        let bad = SkewShape::new(p(&[2, 1]), p(&[3]));
        assert!(!bad.is_contained());
    }

    #[test]
    fn all_partitions_of_small_n() {
        assert_eq!(Partition::all_of(0), vec![Partition::empty()]);
        let of4 = Partition::all_of(4);
        assert_eq!(of4.len(), 5);
        assert_eq!(of4[0], p(&[4]));
        assert_eq!(of4[4], p(&[1, 1, 1, 1]));
        assert_eq!(Partition::all_of(9).len(), 30);
    }
}
