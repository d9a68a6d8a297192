//! Jeu de taquin: in-coming and out-going steps, slides, and the bijection
//! between (standard tableau, k-tuple of entries) and (skew tableau, exit
//! order, k-tuple).
//!
//! Slides move a distinguished entry inward, one cell at a time. With the
//! entry at `*`, `x` the entry below and `y` the entry to the left, the
//! in-coming step swaps `*` with `x` when `x >= y` (or `y` is absent) and
//! with `y` otherwise; this is the unique choice that keeps the remaining
//! entries increasing. The out-going step is its exact inverse.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::{Cell, Partition, SkewShape};
use crate::tableau::{SkewTableau, StandardTableau};

/// A partial filling of the cells of an outer shape. Vacated and inner
/// cells hold `None`; slides operate on whatever entries are present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filling {
    outer: Partition,
    grid: Vec<Vec<Option<u32>>>,
}

impl Filling {
    pub fn from_standard(t: &StandardTableau) -> Self {
        let grid = t
            .rows()
            .iter()
            .map(|row| row.iter().map(|&e| Some(e)).collect())
            .collect();
        Filling {
            outer: t.shape().clone(),
            grid,
        }
    }

    pub fn from_skew(t: &SkewTableau) -> Self {
        let shape = t.shape();
        let grid = shape
            .outer
            .parts()
            .iter()
            .enumerate()
            .map(|(j, &len)| (0..len).map(|i| t.entry(Cell::new(i, j))).collect())
            .collect();
        Filling {
            outer: shape.outer.clone(),
            grid,
        }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn entry(&self, c: Cell) -> Option<u32> {
        *self.grid.get(c.row)?.get(c.col)?
    }

    pub fn cell_of(&self, entry: u32) -> Option<Cell> {
        for (j, row) in self.grid.iter().enumerate() {
            if let Some(i) = row.iter().position(|&e| e == Some(entry)) {
                return Some(Cell::new(i, j));
            }
        }
        None
    }

    /// Cells currently holding an entry, bottom row first.
    pub fn present_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (j, row) in self.grid.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                if e.is_some() {
                    out.push(Cell::new(i, j));
                }
            }
        }
        out
    }

    fn set(&mut self, c: Cell, v: Option<u32>) {
        self.grid[c.row][c.col] = v;
    }

    /// Removes and returns the entry at `c`.
    pub fn take(&mut self, c: Cell) -> Option<u32> {
        let e = self.entry(c);
        self.set(c, None);
        e
    }

    pub fn place(&mut self, c: Cell, entry: u32) {
        self.set(c, Some(entry));
    }

    fn below(&self, c: Cell) -> Option<(Cell, u32)> {
        if c.row == 0 {
            return None;
        }
        let d = Cell::new(c.col, c.row - 1);
        self.entry(d).map(|e| (d, e))
    }

    fn left(&self, c: Cell) -> Option<(Cell, u32)> {
        if c.col == 0 {
            return None;
        }
        let d = Cell::new(c.col - 1, c.row);
        self.entry(d).map(|e| (d, e))
    }

    fn above(&self, c: Cell) -> Option<(Cell, u32)> {
        let d = Cell::new(c.col, c.row + 1);
        self.entry(d).map(|e| (d, e))
    }

    fn right(&self, c: Cell) -> Option<(Cell, u32)> {
        let d = Cell::new(c.col + 1, c.row);
        self.entry(d).map(|e| (d, e))
    }

    fn swap(&mut self, a: Cell, b: Cell) {
        let ea = self.entry(a);
        let eb = self.entry(b);
        self.set(a, eb);
        self.set(b, ea);
    }

    /// Destination of the in-coming step at `c`, without moving anything.
    pub fn in_step_target(&self, c: Cell) -> Option<Cell> {
        match (self.below(c), self.left(c)) {
            (Some((bc, x)), Some((_, y))) if x >= y => Some(bc),
            (Some(_), Some((lc, _))) => Some(lc),
            (Some((bc, _)), None) => Some(bc),
            (None, Some((lc, _))) => Some(lc),
            (None, None) => None,
        }
    }

    /// One in-coming step of the entry at `c`; returns its new cell.
    pub fn in_step(&mut self, c: Cell) -> Result<Cell> {
        let target = self.in_step_target(c).ok_or(Error::NoInwardNeighbor(c))?;
        self.swap(c, target);
        Ok(target)
    }

    /// One out-going step of the entry at `c`; returns its new cell. The
    /// swap partner is the smaller of the outward neighbors, which is the
    /// exact inverse of [`Filling::in_step`].
    pub fn out_step(&mut self, c: Cell) -> Result<Cell> {
        let target = match (self.above(c), self.right(c)) {
            (Some((ac, p)), Some((_, q))) if p < q => ac,
            (Some(_), Some((rc, _))) => rc,
            (Some((ac, _)), None) => ac,
            (None, Some((rc, _))) => rc,
            (None, None) => return Err(Error::NoOutwardNeighbor(c)),
        };
        self.swap(c, target);
        Ok(target)
    }

    /// Slides `entry` inward until it has no present neighbor below or to
    /// the left; returns the visited cells, starting cell included.
    pub fn in_slide(&mut self, entry: u32) -> Result<Vec<Cell>> {
        let mut at = self.cell_of(entry).ok_or(Error::EntryNotFound(entry))?;
        let mut path = vec![at];
        while self.in_step_target(at).is_some() {
            at = self.in_step(at)?;
            path.push(at);
        }
        Ok(path)
    }

    /// True iff the entry at `c` is compatible with its four present
    /// neighbors. Together with validity of the rest of the filling this
    /// decides validity of the whole.
    pub fn entry_fits(&self, c: Cell) -> bool {
        let e = match self.entry(c) {
            Some(e) => e,
            None => return true,
        };
        self.below(c).is_none_or(|(_, x)| x < e)
            && self.left(c).is_none_or(|(_, y)| y < e)
            && self.above(c).is_none_or(|(_, x)| x > e)
            && self.right(c).is_none_or(|(_, y)| y > e)
    }

    /// Slides `entry` outward until the filling including it is again
    /// row/column increasing; the exact reverse of an in-coming slide.
    pub fn out_slide(&mut self, entry: u32) -> Result<Vec<Cell>> {
        let mut at = self.cell_of(entry).ok_or(Error::EntryNotFound(entry))?;
        let mut path = vec![at];
        while !self.entry_fits(at) {
            at = self.out_step(at)?;
            path.push(at);
        }
        Ok(path)
    }

    /// True iff all present entries increase along rows and up columns.
    pub fn is_increasing(&self) -> bool {
        self.present_cells().iter().all(|&c| self.entry_fits(c))
    }

    /// The vacated cells inside the outer shape, when they form a
    /// partition (left-justified, non-increasing upward).
    pub fn hole_shape(&self) -> Option<Partition> {
        let mut holes = Vec::new();
        for (j, row) in self.grid.iter().enumerate() {
            let k = row.iter().take_while(|e| e.is_none()).count();
            if row.iter().skip(k).any(|e| e.is_none()) {
                return None; // a hole after a present entry
            }
            if k > 0 {
                holes.push((j, k));
            }
        }
        if holes.iter().enumerate().any(|(idx, &(j, _))| idx != j) {
            return None; // holes must start from the bottom row
        }
        Partition::new(holes.into_iter().map(|(_, k)| k).collect()).ok()
    }

    /// Interprets the filling as a skew tableau; entries must already be
    /// `1..=m` and the holes must form a partition.
    pub fn to_skew_tableau(&self) -> Result<SkewTableau> {
        let inner = self
            .hole_shape()
            .ok_or_else(|| Error::InvalidTableau("holes do not form a partition".into()))?;
        let shape = SkewShape::new(self.outer.clone(), inner);
        let rows = self
            .grid
            .iter()
            .map(|row| row.iter().flatten().copied().collect())
            .collect();
        SkewTableau::new(shape, rows)
    }
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        Some(e) => e.to_string(),
                        None => ".".to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// Result of an in-coming slide: the filling afterwards (distinguished
/// entry still in place at the last path cell) and the cells visited.
#[derive(Clone, Debug)]
pub struct SlideResult {
    pub tableau: Filling,
    pub path: Vec<Cell>,
}

/// Applies the in-coming slide of `entry` to a copy of `t`.
pub fn in_slide(t: &Filling, entry: u32) -> Result<SlideResult> {
    let mut tableau = t.clone();
    let path = tableau.in_slide(entry)?;
    Ok(SlideResult { tableau, path })
}

/// Image of a `(tableau, k-tuple)` pair under the slide bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionImage {
    /// Skew tableau of shape `lambda/mu` with entries renumbered `1..=n-k`.
    pub skew: SkewTableau,
    /// Standard tableau of shape `mu` recording the order in which the
    /// inner cells were vacated.
    pub exit_order: StandardTableau,
    /// The removed entries, in removal order.
    pub removed: Vec<u32>,
}

/// Slides the entries `removed` out of `t` in order. Each slide ends at a
/// cell with no inward neighbor; that cell is vacated and recorded.
pub fn bijection_forward(t: &StandardTableau, removed: &[u32]) -> Result<BijectionImage> {
    let n = t.size() as u32;
    let mut seen = std::collections::BTreeSet::new();
    for &a in removed {
        if a == 0 || a > n {
            return Err(Error::EntryNotFound(a));
        }
        if !seen.insert(a) {
            return Err(Error::InvalidTableau(format!("entry {a} removed twice")));
        }
    }

    let mut filling = Filling::from_standard(t);
    let mut exits = Vec::with_capacity(removed.len());
    for &a in removed {
        let path = filling.in_slide(a)?;
        let exit = *path.last().expect("path never empty");
        filling.take(exit);
        exits.push(exit);
    }

    let mu = filling
        .hole_shape()
        .expect("vacated cells always form a partition");
    let mut exit_rows: Vec<Vec<u32>> = mu.parts().iter().map(|&len| vec![0; len]).collect();
    for (i, &c) in exits.iter().enumerate() {
        exit_rows[c.row][c.col] = i as u32 + 1;
    }
    let exit_order = StandardTableau::new(mu.clone(), exit_rows)?;

    // order-preserving renumbering of the survivors onto 1..=n-k
    let mut survivors: Vec<u32> = (1..=n).filter(|e| !seen.contains(e)).collect();
    survivors.sort_unstable();
    let mut renumbered = filling.clone();
    for c in filling.present_cells() {
        let e = filling.entry(c).unwrap();
        let rank = survivors.binary_search(&e).unwrap() as u32 + 1;
        renumbered.place(c, rank);
    }

    Ok(BijectionImage {
        skew: renumbered.to_skew_tableau()?,
        exit_order,
        removed: removed.to_vec(),
    })
}

/// Reconstructs the original tableau and tuple from a bijection image.
pub fn bijection_backward(img: &BijectionImage) -> Result<(StandardTableau, Vec<u32>)> {
    let mu = &img.skew.shape().inner;
    let k = img.removed.len();
    if mu.size() != k || img.exit_order.shape() != mu {
        return Err(Error::SizeMismatch(format!(
            "inner shape {mu} does not match {k} removed entries"
        )));
    }
    let n = img.skew.size() + k;

    // undo the renumbering
    let removed_set: std::collections::BTreeSet<u32> = img.removed.iter().copied().collect();
    if removed_set.len() != k || img.removed.iter().any(|&a| a == 0 || a as usize > n) {
        return Err(Error::InvalidTableau("removed entries not distinct in 1..=n".into()));
    }
    let survivors: Vec<u32> = (1..=n as u32).filter(|e| !removed_set.contains(e)).collect();

    let mut filling = Filling::from_skew(&img.skew);
    for c in filling.present_cells() {
        let rank = filling.entry(c).unwrap() as usize;
        filling.place(c, survivors[rank - 1]);
    }

    // re-insert in reverse removal order, each at the cell it vacated
    for i in (0..k).rev() {
        let cell = img
            .exit_order
            .cell_of(i as u32 + 1)
            .expect("exit order is a bijection");
        if filling.entry(cell).is_some() {
            return Err(Error::InvalidTableau(format!("cell {cell} not vacant")));
        }
        filling.place(cell, img.removed[i]);
        filling.out_slide(img.removed[i])?;
    }

    let rows: Vec<Vec<u32>> = filling
        .outer()
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &len)| {
            (0..len)
                .map(|i| {
                    filling
                        .entry(Cell::new(i, j))
                        .ok_or_else(|| Error::InvalidTableau(format!("hole left at ({i},{j})")))
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let t = StandardTableau::new(filling.outer().clone(), rows)?;
    Ok((t, img.removed.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_tableau() -> StandardTableau {
        StandardTableau::parse("1 2 5 9 11 / 3 7 10 / 4 8 13 / 6 12").unwrap()
    }

    #[test]
    fn in_step_prefers_below_when_larger() {
        // x = 3 below, y = 2 left, x >= y: swap with x
        let t = StandardTableau::parse("1 3 / 2 4").unwrap();
        let mut f = Filling::from_standard(&t);
        let at = f.cell_of(4).unwrap();
        let to = f.in_step(at).unwrap();
        assert_eq!(to, Cell::new(1, 0));
        assert_eq!(f.entry(Cell::new(1, 0)), Some(4));
        assert_eq!(f.entry(Cell::new(1, 1)), Some(3));
    }

    #[test]
    fn in_step_prefers_left_when_below_smaller() {
        // x = 2 below, y = 3 left, x < y: swap with y
        let t = StandardTableau::parse("1 2 / 3 4").unwrap();
        let mut f = Filling::from_standard(&t);
        let at = f.cell_of(4).unwrap();
        let to = f.in_step(at).unwrap();
        assert_eq!(to, Cell::new(0, 1));
        assert_eq!(f.entry(Cell::new(0, 1)), Some(4));
        assert_eq!(f.entry(Cell::new(1, 1)), Some(3));
    }

    #[test]
    fn in_step_forced_with_single_neighbor() {
        let t = StandardTableau::parse("1 2 3").unwrap();
        let mut f = Filling::from_standard(&t);
        assert_eq!(f.in_step(Cell::new(2, 0)).unwrap(), Cell::new(1, 0));
        let t = StandardTableau::parse("1 / 2").unwrap();
        let mut f = Filling::from_standard(&t);
        assert_eq!(f.in_step(Cell::new(0, 1)).unwrap(), Cell::new(0, 0));
        assert!(f.in_step(Cell::new(0, 0)).is_err());
    }

    #[test]
    fn out_step_inverts_in_step() {
        for n in 1..=5 {
            for shape in Partition::all_of(n) {
                for t in crate::tableau::standard_tableaux(&shape) {
                    let base = Filling::from_standard(&t);
                    for c in base.present_cells() {
                        if base.in_step_target(c).is_none() {
                            continue;
                        }
                        let mut f = base.clone();
                        let to = f.in_step(c).unwrap();
                        let back = f.out_step(to).unwrap();
                        assert_eq!(back, c);
                        assert_eq!(f, base);
                    }
                }
            }
        }
    }

    #[test]
    fn slide_of_reference_entry() {
        let mut f = Filling::from_standard(&fig_tableau());
        let path = f.in_slide(12).unwrap();
        assert_eq!(
            path,
            vec![
                Cell::new(1, 3),
                Cell::new(1, 2),
                Cell::new(1, 1),
                Cell::new(0, 1),
                Cell::new(0, 0)
            ]
        );
        assert_eq!(
            f.to_string(),
            "12 2 5 9 11 / 1 3 10 / 4 7 13 / 6 8"
        );
    }

    #[test]
    fn slide_at_origin_is_trivial() {
        let mut f = Filling::from_standard(&fig_tableau());
        let before = f.clone();
        let path = f.in_slide(1).unwrap();
        assert_eq!(path, vec![Cell::new(0, 0)]);
        assert_eq!(f, before);
    }

    #[test]
    fn out_slide_reverses_in_slide() {
        for n in 1..=6 {
            for shape in Partition::all_of(n) {
                for t in crate::tableau::standard_tableaux(&shape) {
                    let base = Filling::from_standard(&t);
                    for e in 1..=n as u32 {
                        let mut f = base.clone();
                        let path = f.in_slide(e).unwrap();
                        let back = f.out_slide(e).unwrap();
                        let mut reversed = path.clone();
                        reversed.reverse();
                        assert_eq!(back, reversed);
                        assert_eq!(f, base);
                    }
                }
            }
        }
    }

    #[test]
    fn forward_matches_reference_figure() {
        let img = bijection_forward(&fig_tableau(), &[12, 5]).unwrap();
        assert_eq!(img.skew.shape().outer.to_string(), "5,3,3,2");
        assert_eq!(img.skew.shape().inner.to_string(), "2");
        assert_eq!(img.exit_order.to_string(), "1 2");
        assert_eq!(img.skew.to_string(), "2 8 10 / 1 3 9 / 4 6 11 / 5 7");
        let (t, removed) = bijection_backward(&img).unwrap();
        assert_eq!(t, fig_tableau());
        assert_eq!(removed, vec![12, 5]);
    }

    #[test]
    fn forward_with_empty_tuple_is_identity() {
        let t = fig_tableau();
        let img = bijection_forward(&t, &[]).unwrap();
        assert!(img.skew.shape().inner.is_empty());
        assert_eq!(img.skew.to_string(), t.to_string());
        assert_eq!(bijection_backward(&img).unwrap().0, t);
    }

    #[test]
    fn round_trip_on_small_shape() {
        let shape = Partition::new(vec![2, 1]).unwrap();
        for t in crate::tableau::standard_tableaux(&shape) {
            for a in 1..=3u32 {
                let img = bijection_forward(&t, &[a]).unwrap();
                let (back, removed) = bijection_backward(&img).unwrap();
                assert_eq!(back, t);
                assert_eq!(removed, vec![a]);
            }
        }
    }

    #[test]
    fn backward_rejects_inconsistent_shapes() {
        let img = bijection_forward(&fig_tableau(), &[12, 5]).unwrap();
        let bad = BijectionImage {
            removed: vec![12],
            ..img
        };
        assert!(bijection_backward(&bad).is_err());
    }

    #[test]
    fn duplicate_removals_rejected() {
        assert!(bijection_forward(&fig_tableau(), &[4, 4]).is_err());
        assert!(bijection_forward(&fig_tableau(), &[99]).is_err());
    }

    #[test]
    fn slide_keeps_remaining_entries_increasing() {
        let t = fig_tableau();
        for e in 1..=13u32 {
            let mut f = Filling::from_standard(&t);
            let path = f.in_slide(e).unwrap();
            let exit = *path.last().unwrap();
            f.take(exit);
            assert!(f.is_increasing(), "entry {e}");
        }
    }
}
