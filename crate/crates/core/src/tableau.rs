//! Standard and skew tableaux: validation, lazy enumeration and exact
//! counting. Enumeration doubles as the ground-truth oracle for every
//! counting formula in the crate.

use std::fmt;

use num::BigInt;

use crate::error::{Error, Result};
use crate::partition::{Cell, Partition, SkewShape};

/// A standard tableau: the cells of a partition filled bijectively with
/// `1..=n`, increasing along rows and up columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<u32>>,
}

/// A skew tableau: the cells of `outer/inner` filled bijectively with
/// `1..=m`, increasing along rows and up columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewTableau {
    shape: SkewShape,
    rows: Vec<Vec<u32>>,
}

fn check_filling(shape: &SkewShape, rows: &[Vec<u32>]) -> Result<()> {
    if !shape.is_contained() {
        return Err(Error::InvalidTableau(format!(
            "inner {} not contained in outer {}",
            shape.inner, shape.outer
        )));
    }
    let outer = &shape.outer;
    let inner = &shape.inner;
    if rows.len() != outer.len() {
        return Err(Error::InvalidTableau(format!(
            "expected {} rows, got {}",
            outer.len(),
            rows.len()
        )));
    }
    let m = shape.size();
    let mut seen = vec![false; m + 1];
    for (j, row) in rows.iter().enumerate() {
        if row.len() != outer.part(j) - inner.part(j) {
            return Err(Error::InvalidTableau(format!("row {j} has wrong length")));
        }
        for &e in row {
            if e == 0 || e as usize > m || seen[e as usize] {
                return Err(Error::InvalidTableau(format!(
                    "entries must be a bijection onto 1..={m}"
                )));
            }
            seen[e as usize] = true;
        }
        if !row.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidTableau(format!("row {j} not increasing")));
        }
    }
    // column condition between vertically adjacent skew cells
    for j in 1..rows.len() {
        for col in inner.part(j)..outer.part(j) {
            if col >= inner.part(j - 1) && col < outer.part(j - 1) {
                let below = rows[j - 1][col - inner.part(j - 1)];
                let here = rows[j][col - inner.part(j)];
                if below >= here {
                    return Err(Error::InvalidTableau(format!(
                        "column {col} not increasing between rows {} and {j}",
                        j - 1
                    )));
                }
            }
        }
    }
    Ok(())
}

fn rows_to_string(rows: &[Vec<u32>]) -> String {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" / ")
}

fn rows_from_str(s: &str) -> Result<Vec<Vec<u32>>> {
    s.split('/')
        .map(|row| {
            row.split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

impl StandardTableau {
    /// Validates and builds a tableau from rows of entries, bottom row
    /// first.
    pub fn new(shape: Partition, rows: Vec<Vec<u32>>) -> Result<Self> {
        check_filling(&SkewShape::from_partition(shape.clone()), &rows)?;
        Ok(StandardTableau { shape, rows })
    }

    /// Parses the row serialization, e.g. `1 2 5 9 11 / 3 7 10 / 4 8 13 / 6 12`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows = rows_from_str(s)?;
        let shape = Partition::new(rows.iter().map(Vec::len).collect::<Vec<_>>().to_vec())
            .map_err(|_| Error::InvalidTableau("row lengths not a partition".into()))?;
        StandardTableau::new(shape, rows)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn entry(&self, c: Cell) -> Option<u32> {
        self.rows.get(c.row)?.get(c.col).copied()
    }

    pub fn cell_of(&self, entry: u32) -> Option<Cell> {
        for (j, row) in self.rows.iter().enumerate() {
            if let Some(i) = row.iter().position(|&e| e == entry) {
                return Some(Cell::new(i, j));
            }
        }
        None
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rows_to_string(&self.rows))
    }
}

impl SkewTableau {
    /// Validates and builds a skew tableau; `rows[j]` lists the entries of
    /// row `j` outside the inner shape.
    pub fn new(shape: SkewShape, rows: Vec<Vec<u32>>) -> Result<Self> {
        check_filling(&shape, &rows)?;
        Ok(SkewTableau { shape, rows })
    }

    /// Parses the row serialization against a known shape; inner cells are
    /// omitted from each row.
    pub fn parse(shape: SkewShape, s: &str) -> Result<Self> {
        let mut rows = rows_from_str(s)?;
        // a trailing empty shape row may be omitted entirely
        while rows.len() < shape.outer.len() {
            rows.push(Vec::new());
        }
        SkewTableau::new(shape, rows)
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn entry(&self, c: Cell) -> Option<u32> {
        if !self.shape.has_cell(c) {
            return None;
        }
        let offset = self.shape.inner.part(c.row);
        self.rows.get(c.row)?.get(c.col - offset).copied()
    }
}

impl fmt::Display for SkewTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rows_to_string(&self.rows))
    }
}

/// Depth-first enumeration of the fillings of `outer/inner`.
///
/// Entries are placed in increasing order on the addable corners of a
/// region growing from the inner shape, trying lower rows first, so the
/// stream is deterministic and lexicographic in the row sequence.
pub struct SkewTableauIter {
    outer: Vec<usize>,
    m: usize,
    filled: Vec<usize>,
    // choice[t] = row where entry t+1 sits
    choice: Vec<usize>,
    // first row to try when placing the next entry
    resume: usize,
    done: bool,
}

impl SkewTableauIter {
    fn new(shape: &SkewShape) -> Self {
        let contained = shape.is_contained();
        let nrows = shape.outer.len();
        let outer: Vec<usize> = (0..nrows).map(|j| shape.outer.part(j)).collect();
        let inner: Vec<usize> = (0..nrows).map(|j| shape.inner.part(j)).collect();
        SkewTableauIter {
            m: shape.size(),
            filled: inner,
            outer,
            choice: Vec::new(),
            resume: 0,
            done: !contained,
        }
    }

    fn addable(&self, row: usize) -> bool {
        self.filled[row] < self.outer[row]
            && (row == 0 || self.filled[row] < self.filled[row - 1])
    }

    fn pop(&mut self) -> Option<usize> {
        let row = self.choice.pop()?;
        self.filled[row] -= 1;
        Some(row)
    }

    fn assemble(&self) -> Vec<Vec<u32>> {
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.outer.len()];
        for (t, &row) in self.choice.iter().enumerate() {
            rows[row].push(t as u32 + 1);
        }
        rows
    }
}

impl Iterator for SkewTableauIter {
    type Item = Vec<Vec<u32>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.m == 0 {
            // the empty filling, exactly once
            self.done = true;
            return Some(vec![Vec::new(); self.outer.len()]);
        }
        let mut from = self.resume;
        loop {
            if self.choice.len() == self.m {
                let rows = self.assemble();
                // backtrack one level so the next call resumes the search
                match self.pop() {
                    Some(row) => self.resume = row + 1,
                    None => self.done = true,
                }
                return Some(rows);
            }
            match (from..self.outer.len()).find(|&r| self.addable(r)) {
                Some(row) => {
                    self.choice.push(row);
                    self.filled[row] += 1;
                    from = 0;
                }
                None => match self.pop() {
                    Some(row) => from = row + 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

/// Lazily enumerates all standard tableaux of `shape`.
pub fn standard_tableaux(shape: &Partition) -> impl Iterator<Item = StandardTableau> {
    let shape = shape.clone();
    SkewTableauIter::new(&SkewShape::from_partition(shape.clone())).map(move |rows| {
        StandardTableau {
            shape: shape.clone(),
            rows,
        }
    })
}

/// Lazily enumerates all skew tableaux of `shape`; empty when the inner
/// shape is not contained in the outer one.
pub fn skew_tableaux(shape: &SkewShape) -> impl Iterator<Item = SkewTableau> {
    let shape = shape.clone();
    SkewTableauIter::new(&shape).map(move |rows| SkewTableau {
        shape: shape.clone(),
        rows,
    })
}

/// The number of standard tableaux of `shape`.
pub fn count_standard(shape: &Partition) -> BigInt {
    BigInt::from(standard_tableaux(shape).count())
}

/// The number of skew tableaux of `shape`; zero when the inner shape is
/// not contained in the outer one.
pub fn count_skew(shape: &SkewShape) -> BigInt {
    BigInt::from(skew_tableaux(shape).count())
}
