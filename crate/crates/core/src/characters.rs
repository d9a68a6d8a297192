//! Ribbons, ribbon tableaux and character evaluation by the ribbon rule,
//! plus the reduction of padded-class characters to skew-tableau counts.

use std::collections::HashMap;

use num::BigInt;

use crate::error::{Error, Result};
use crate::partition::{Cell, Partition, SkewShape};
use crate::tableau::count_skew;

/// True iff the skew shape is a ribbon: nonempty, edge-connected and free
/// of 2x2 blocks.
pub fn is_ribbon(s: &SkewShape) -> bool {
    if !s.is_contained() {
        return false;
    }
    let cells = s.cells();
    if cells.is_empty() {
        return false;
    }
    let set: std::collections::BTreeSet<_> = cells.iter().copied().collect();
    for &c in &cells {
        let right = set.contains(&Cell::new(c.col + 1, c.row));
        let up = set.contains(&Cell::new(c.col, c.row + 1));
        let diag = set.contains(&Cell::new(c.col + 1, c.row + 1));
        if right && up && diag {
            return false;
        }
    }
    // connectivity by flood fill
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![cells[0]];
    while let Some(c) = stack.pop() {
        if !seen.insert(c) {
            continue;
        }
        let mut neighbors = vec![Cell::new(c.col + 1, c.row), Cell::new(c.col, c.row + 1)];
        if c.col > 0 {
            neighbors.push(Cell::new(c.col - 1, c.row));
        }
        if c.row > 0 {
            neighbors.push(Cell::new(c.col, c.row - 1));
        }
        stack.extend(neighbors.into_iter().filter(|d| set.contains(d)));
    }
    seen.len() == cells.len()
}

/// Number of rows a ribbon spans, minus one.
pub fn ribbon_height(s: &SkewShape) -> Result<usize> {
    if !is_ribbon(s) {
        return Err(Error::NotARibbon(s.to_string()));
    }
    let rows: std::collections::BTreeSet<usize> = s.cells().iter().map(|c| c.row).collect();
    Ok(rows.len() - 1)
}

/// A chain of partitions whose successive differences are ribbons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonTableau {
    pub chain: Vec<Partition>,
    pub entry_sequence: Vec<usize>,
    pub total_height: usize,
}

impl RibbonTableau {
    /// `(-1)^total_height`.
    pub fn sign(&self) -> i64 {
        if self.total_height.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// All ways to strip a border ribbon of `size` cells off `shape`, as
/// (remaining partition, ribbon height) pairs.
///
/// A removable ribbon spans consecutive part indices `i..=j`; every row
/// below the topmost must be cut down to one less than the row above it,
/// so only the amount removed from row `j` is free and each `(i, j)` pair
/// yields at most one ribbon.
pub fn removable_ribbons(shape: &Partition, size: usize) -> Vec<(Partition, usize)> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    let len = shape.len();
    for i in 0..len {
        let mut removed_below = 0; // cells taken from rows i..j-1
        for j in i..len {
            if j > i {
                removed_below += shape.part(j - 1) + 1 - shape.part(j);
            }
            if removed_below >= size {
                break;
            }
            let from_top = size - removed_below;
            // row j keeps at least part(j+1) cells and loses at least one
            if from_top <= shape.part(j) && shape.part(j) - from_top >= shape.part(j + 1) {
                let mut parts: Vec<usize> = shape.parts().to_vec();
                for r in i..j {
                    parts[r] = shape.part(r + 1) - 1;
                }
                parts[j] = shape.part(j) - from_top;
                let rest = Partition::new(parts).expect("strip leaves a partition");
                out.push((rest, j - i));
            }
        }
    }
    out
}

/// All ribbon tableaux of `shape` with the given entry sequence.
pub fn ribbon_tableaux(shape: &Partition, entries: &[usize]) -> Result<Vec<RibbonTableau>> {
    if entries.iter().sum::<usize>() != shape.size() {
        return Err(Error::SizeMismatch(format!(
            "entries sum to {}, shape has {} cells",
            entries.iter().sum::<usize>(),
            shape.size()
        )));
    }
    fn rec(
        shape: &Partition,
        entries: &[usize],
        suffix: &mut Vec<Partition>,
        height: usize,
        out: &mut Vec<(Vec<Partition>, usize)>,
    ) {
        if entries.is_empty() {
            if shape.is_empty() {
                let mut chain = vec![Partition::empty()];
                chain.extend(suffix.iter().rev().cloned());
                out.push((chain, height));
            }
            return;
        }
        let last = entries[entries.len() - 1];
        suffix.push(shape.clone());
        for (rest, h) in removable_ribbons(shape, last) {
            rec(&rest, &entries[..entries.len() - 1], suffix, height + h, out);
        }
        suffix.pop();
    }
    let mut raw = Vec::new();
    rec(shape, entries, &mut Vec::new(), 0, &mut raw);
    Ok(raw
        .into_iter()
        .map(|(chain, total_height)| RibbonTableau {
            chain,
            entry_sequence: entries.to_vec(),
            total_height,
        })
        .collect())
}

/// Irreducible character of the symmetric group: the signed count of
/// ribbon tableaux of shape `lambda` with entry sequence `class_partition`,
/// computed by peeling the last ribbon with memoization.
pub fn chi_mn(shape: &Partition, class_partition: &Partition) -> Result<BigInt> {
    if shape.size() != class_partition.size() {
        return Err(Error::SizeMismatch(format!(
            "|{shape}| = {} but |{class_partition}| = {}",
            shape.size(),
            class_partition.size()
        )));
    }
    let mut memo = HashMap::new();
    Ok(chi_rec(shape, class_partition.parts(), &mut memo))
}

fn chi_rec(
    shape: &Partition,
    remaining: &[usize],
    memo: &mut HashMap<(Partition, usize), BigInt>,
) -> BigInt {
    if remaining.is_empty() {
        return BigInt::from(1); // shape is empty here by size bookkeeping
    }
    let key = (shape.clone(), remaining.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let last = remaining[remaining.len() - 1];
    let mut acc = BigInt::from(0);
    for (rest, height) in removable_ribbons(shape, last) {
        let term = chi_rec(&rest, &remaining[..remaining.len() - 1], memo);
        if height % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    memo.insert(key, acc.clone());
    acc
}

/// Appends `n - |mu|` parts of size one to `mu`.
pub fn pad_with_ones(mu: &Partition, n: usize) -> Partition {
    let mut parts = mu.parts().to_vec();
    parts.extend(std::iter::repeat_n(1, n - mu.size()));
    Partition::new(parts).expect("padding keeps parts non-increasing")
}

/// Character on the padded class `(mu, 1^(n-k))` computed through skew
/// tableau counts: the sum over `nu` of `f^(lambda/nu) chi^nu_mu`, with
/// the skew counts supplied by `skew_count`.
pub fn chi_via_skew_with<F>(shape: &Partition, mu: &Partition, skew_count: F) -> Result<BigInt>
where
    F: Fn(&Partition, &Partition) -> Result<BigInt>,
{
    let n = shape.size();
    let k = mu.size();
    if k >= n {
        return Err(Error::SizeMismatch(format!(
            "|mu| = {k} must be smaller than |lambda| = {n}"
        )));
    }
    let mut acc = BigInt::from(0);
    for nu in Partition::all_of(k) {
        let chi = chi_mn(&nu, mu)?;
        if chi != BigInt::from(0) {
            acc += skew_count(shape, &nu)? * chi;
        }
    }
    Ok(acc)
}

/// [`chi_via_skew_with`] backed by exhaustive skew-tableau enumeration.
pub fn chi_via_skew(shape: &Partition, mu: &Partition) -> Result<BigInt> {
    chi_via_skew_with(shape, mu, |lam, nu| {
        Ok(count_skew(&SkewShape::new(lam.clone(), nu.clone())))
    })
}
