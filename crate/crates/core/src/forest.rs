//! Trace forests: the parent-arc structure a tableau induces on its cells,
//! with subtree classification and the separation check for slides.
//!
//! Every cell with a present neighbor below or to the left gets one arc,
//! pointing to the destination its entry would take under a single
//! in-coming step. Following arcs from any cell reproduces the full
//! in-coming slide path of its entry, and each node has at most two
//! children (the cell to its right and the cell above), so every component
//! is a binary tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::jdt::Filling;
use crate::partition::Cell;

#[derive(Clone, Debug)]
pub struct TraceForest {
    parent: BTreeMap<Cell, Cell>,
    right_child: BTreeMap<Cell, Cell>,
    upper_child: BTreeMap<Cell, Cell>,
    roots: Vec<Cell>,
    cells: BTreeSet<Cell>,
}

/// Builds the trace forest of a (standard or skew) tableau.
pub fn build(f: &Filling) -> TraceForest {
    let mut parent = BTreeMap::new();
    let mut right_child = BTreeMap::new();
    let mut upper_child = BTreeMap::new();
    let mut roots = Vec::new();
    let cells: BTreeSet<Cell> = f.present_cells().into_iter().collect();
    for &c in &cells {
        match f.in_step_target(c) {
            Some(p) => {
                parent.insert(c, p);
                if p.row == c.row {
                    right_child.insert(p, c);
                } else {
                    upper_child.insert(p, c);
                }
            }
            None => roots.push(c),
        }
    }
    TraceForest {
        parent,
        right_child,
        upper_child,
        roots,
        cells,
    }
}

impl TraceForest {
    pub fn roots(&self) -> &[Cell] {
        &self.roots
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    pub fn parent(&self, c: Cell) -> Option<Cell> {
        self.parent.get(&c).copied()
    }

    /// Child to the right of `c`, if its arc points at `c`.
    pub fn right_child(&self, c: Cell) -> Option<Cell> {
        self.right_child.get(&c).copied()
    }

    /// Child above `c`, if its arc points at `c`.
    pub fn upper_child(&self, c: Cell) -> Option<Cell> {
        self.upper_child.get(&c).copied()
    }

    /// The parent chain from `c` to its root, both included. Coincides
    /// with the in-coming slide path of the entry at `c`.
    pub fn path_to_root(&self, c: Cell) -> Vec<Cell> {
        let mut path = vec![c];
        let mut at = c;
        while let Some(p) = self.parent(at) {
            path.push(p);
            at = p;
        }
        path
    }

    pub fn root_of(&self, c: Cell) -> Cell {
        *self.path_to_root(c).last().unwrap()
    }

    /// All cells of the subtree rooted at `root`, including `root`.
    pub fn subtree(&self, root: Cell) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            if !out.insert(c) {
                continue;
            }
            stack.extend(self.right_child(c));
            stack.extend(self.upper_child(c));
        }
        out
    }

    /// Arc list in DOT format, one node per cell labelled with its entry.
    pub fn to_dot(&self, f: &Filling) -> String {
        let name = |c: Cell| format!("\"({},{})\"", c.col, c.row);
        let mut out = String::from("digraph trace_forest {\n");
        for &c in &self.cells {
            let e = f.entry(c).map(|e| e.to_string()).unwrap_or_default();
            let _ = writeln!(out, "  {} [label=\"({},{}):{}\"];", name(c), c.col, c.row, e);
        }
        for (&c, &p) in &self.parent {
            let _ = writeln!(out, "  {} -> {};", name(c), name(p));
        }
        out.push_str("}\n");
        out
    }
}

/// The six disjoint groups a slide at `c` induces on the other cells of a
/// subtree `S`: descendants through the right/upper child of `c`, strict
/// path cells by arc direction (with `c` itself), and the remaining cells
/// by which side their slide path joins the path of `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellClassification {
    pub d1: BTreeSet<Cell>,
    pub d2: BTreeSet<Cell>,
    pub p1: BTreeSet<Cell>,
    pub p2: BTreeSet<Cell>,
    pub r: BTreeSet<Cell>,
    pub a: BTreeSet<Cell>,
}

impl CellClassification {
    /// `D1 | P1 | R`: the cells that end up on the right component.
    pub fn c_left(&self) -> BTreeSet<Cell> {
        self.d1.union(&self.p1).chain(&self.r).copied().collect()
    }

    /// `D2 | P2 | A`: the cells that end up on the upper component.
    pub fn c_up(&self) -> BTreeSet<Cell> {
        self.d2.union(&self.p2).chain(&self.a).copied().collect()
    }
}

/// Classifies every cell of the subtree at `subtree_root` (except the root
/// itself) relative to `c`.
pub fn classify(forest: &TraceForest, subtree_root: Cell, c: Cell) -> Result<CellClassification> {
    let subtree = forest.subtree(subtree_root);
    if !subtree.contains(&c) {
        return Err(Error::CellOutside(c));
    }

    // path from c up to the subtree root, truncated there
    let path_c = truncated_path(forest, c, subtree_root);
    let on_path: BTreeSet<Cell> = path_c.iter().copied().collect();

    let mut cls = CellClassification {
        d1: BTreeSet::new(),
        d2: BTreeSet::new(),
        p1: BTreeSet::new(),
        p2: BTreeSet::new(),
        r: BTreeSet::new(),
        a: BTreeSet::new(),
    };

    for &d in &subtree {
        if d == subtree_root {
            continue;
        }
        if on_path.contains(&d) && d != subtree_root {
            // ancestor of c (including c itself); split by arc direction
            let p = forest.parent(d).expect("non-root cell has a parent");
            if p.row == d.row {
                cls.p1.insert(d);
            } else {
                cls.p2.insert(d);
            }
            continue;
        }
        let path_d = truncated_path(forest, d, subtree_root);
        if path_d.contains(&c) {
            // d is a strict descendant of c; pick the child branch it uses
            let idx = path_d.iter().position(|&x| x == c).unwrap();
            let branch = path_d[idx - 1];
            if branch.row == c.row {
                cls.d1.insert(d);
            } else {
                cls.d2.insert(d);
            }
            continue;
        }
        // paths merge strictly above both; the side of the merge decides
        let merge_idx = path_d
            .iter()
            .position(|x| on_path.contains(x))
            .expect("paths inside one subtree always merge");
        let m = path_d[merge_idx];
        let pred = path_d[merge_idx - 1];
        if pred.row == m.row {
            cls.r.insert(d);
        } else {
            cls.a.insert(d);
        }
    }
    Ok(cls)
}

fn truncated_path(forest: &TraceForest, from: Cell, stop: Cell) -> Vec<Cell> {
    let mut path = vec![from];
    let mut at = from;
    while at != stop {
        at = forest.parent(at).expect("stop cell is an ancestor");
        path.push(at);
    }
    path
}

/// Side of a path comparison; paths may share cells, and a shared cell
/// counts as being on either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Right,
    Above,
}

/// Compares two slide paths. Every step of a slide path moves to the next
/// lower anti-diagonal `col + row`, so each path has at most one cell per
/// anti-diagonal and the comparison is cell against cell.
fn path_side_ok(candidate: &[Cell], reference: &[Cell], side: Side) -> bool {
    let by_diag: BTreeMap<usize, usize> = reference
        .iter()
        .map(|c| (c.col + c.row, c.col))
        .collect();
    candidate.iter().all(|c| match by_diag.get(&(c.col + c.row)) {
        Some(&ref_col) => match side {
            Side::Right => c.col >= ref_col,
            Side::Above => c.col <= ref_col,
        },
        None => true,
    })
}

/// Checks the separation property of the slide at `c`: after sliding the
/// entry of `c` out of the tableau, every cell grouped on the right (resp.
/// upper) side slides along a path that stays weakly right of (resp. above)
/// the original path of `c`, with coincident cells allowed.
pub fn verify_separation(f: &Filling, c: Cell) -> Result<bool> {
    if f.entry(c).is_none() {
        return Err(Error::CellOutside(c));
    }
    let forest = build(f);
    let root = forest.root_of(c);
    let cls = classify(&forest, root, c)?;

    let mut slid = f.clone();
    let entry = slid.entry(c).unwrap();
    let path_c = slid.in_slide(entry)?;
    let exit = *path_c.last().unwrap();
    debug_assert_eq!(exit, root);
    slid.take(exit);

    let check = |cells: &BTreeSet<Cell>, side: Side| -> Result<bool> {
        for &d in cells {
            let e = slid.entry(d).expect("group cells keep an entry after the slide");
            let mut probe = slid.clone();
            let path_d = probe.in_slide(e)?;
            if !path_side_ok(&path_d, &path_c, side) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    Ok(check(&cls.c_left(), Side::Right)? && check(&cls.c_up(), Side::Above)?)
}
