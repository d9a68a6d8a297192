//! The symbolic layer: content powersums `cp^alpha`, the re-rooting
//! operators, bracket expressions over the two child subtrees, inductive
//! forms and their identification back to powersum combinations.
//!
//! A monomial `cp^alpha` with `alpha = (a_1, ..., a_l)` evaluates on a set
//! of cells as the product over parts of the sums of relative contents
//! raised to `a_i - 1` (so `cp^(1)` is cardinality, with `0^0 = 1`). The
//! empty index denotes the constant 1, which lets one map carry constant
//! terms along with everything else.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partition::{binomial, Cell, Partition};
use crate::Rat;

/// Index of a content-powersum monomial; the empty partition is the
/// constant 1.
pub type CpMonomial = Partition;

/// Multiplicity of the part `i` in `alpha`.
pub fn monomial_multiplicity(alpha: &Partition, i: usize) -> usize {
    alpha.parts().iter().filter(|&&p| p == i).count()
}

fn rat_int(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

/// Merges two monomial indices as multisets.
fn merge_parts(a: &Partition, b: &Partition) -> Partition {
    let mut parts: Vec<usize> = a.parts().iter().chain(b.parts()).copied().collect();
    parts.sort_unstable_by(|x, y| y.cmp(x));
    Partition::new(parts).expect("sorted parts form a partition")
}

/// Exact-rational linear combination of `cp^alpha` monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CpExpression {
    terms: BTreeMap<Partition, Rat>,
}

impl CpExpression {
    pub fn zero() -> Self {
        CpExpression::default()
    }

    pub fn constant(v: Rat) -> Self {
        let mut e = CpExpression::zero();
        e.add_term(Partition::empty(), v);
        e
    }

    /// The generator `cp^(k)`.
    pub fn generator(k: usize) -> Self {
        CpExpression::monomial(Partition::single_row(k))
    }

    pub fn monomial(alpha: Partition) -> Self {
        let mut e = CpExpression::zero();
        e.add_term(alpha, rat_int(1));
        e
    }

    pub fn from_terms(terms: Vec<(Partition, Rat)>) -> Self {
        let mut e = CpExpression::zero();
        for (alpha, coeff) in terms {
            e.add_term(alpha, coeff);
        }
        e
    }

    pub fn add_term(&mut self, alpha: Partition, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Partition) -> Rat {
        self.terms.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest `|alpha|` with a nonzero coefficient; 0 for constants.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Partition::size).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &CpExpression) -> CpExpression {
        let mut out = self.clone();
        for (alpha, coeff) in rhs.terms() {
            out.add_term(alpha.clone(), coeff.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &CpExpression) -> CpExpression {
        self.add(&rhs.scale(&rat_int(-1)))
    }

    pub fn scale(&self, factor: &Rat) -> CpExpression {
        if factor.is_zero() {
            return CpExpression::zero();
        }
        CpExpression {
            terms: self
                .terms
                .iter()
                .map(|(alpha, coeff)| (alpha.clone(), coeff * factor))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &CpExpression) -> CpExpression {
        let mut out = CpExpression::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(merge_parts(a, b), ca * cb);
            }
        }
        out
    }

    /// Evaluates on a multiset of relative contents.
    pub fn eval_contents(&self, contents: &[i64]) -> Rat {
        let max_power = self.terms.keys().map(|a| a.part(0)).max().unwrap_or(1);
        // powersums[p] = sum of c^p over the multiset
        let mut powersums = vec![BigInt::zero(); max_power];
        for &c in contents {
            let mut acc = BigInt::one();
            for slot in powersums.iter_mut() {
                *slot += &acc;
                acc *= BigInt::from(c);
            }
        }
        let mut total = Rat::zero();
        for (alpha, coeff) in self.terms() {
            let mut term = BigInt::one();
            for &k in alpha.parts() {
                term *= &powersums[k - 1];
            }
            total += coeff * BigRational::from_integer(term);
        }
        total
    }

    /// Evaluates on a whole partition, origin at the first cell.
    pub fn eval_partition(&self, shape: &Partition) -> Rat {
        self.eval_contents(&shape.content_multiset())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut terms: Vec<(&Partition, &Rat)> = self.terms.iter().collect();
        terms.sort_by_key(|(alpha, _)| (std::cmp::Reverse(alpha.size()), (*alpha).clone()));
        serde_json::Value::Array(
            terms
                .into_iter()
                .map(|(alpha, coeff)| {
                    serde_json::json!({
                        "coeff": coeff.to_string(),
                        "alpha": alpha.parts(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON array of terms".into()))?;
        let mut out = CpExpression::zero();
        for item in arr {
            let coeff = parse_rational(
                item.get("coeff")
                    .and_then(|c| c.as_str())
                    .ok_or_else(|| Error::Parse("term without coeff".into()))?,
            )?;
            let alpha = json_partition(item.get("alpha"))?;
            out.add_term(alpha, coeff);
        }
        Ok(out)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rat> {
    s.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

fn json_partition(value: Option<&serde_json::Value>) -> Result<Partition> {
    let arr = value
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("expected a part list".into()))?;
    let parts = arr
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|p| p as usize)
                .ok_or_else(|| Error::Parse("parts must be integers".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
}

fn format_terms<K: Clone + Ord>(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<K, Rat>,
    degree: impl Fn(&K) -> usize,
    label: impl Fn(&K) -> String,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let mut keys: Vec<&K> = terms.keys().collect();
    keys.sort_by_key(|k| (std::cmp::Reverse(degree(k)), (*k).clone()));
    for (idx, key) in keys.iter().enumerate() {
        let coeff = &terms[key];
        let mag = coeff.abs();
        if idx == 0 {
            if coeff.is_negative() {
                write!(f, "-")?;
            }
        } else if coeff.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let name = label(key);
        if name.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag} {name}")?;
        }
    }
    Ok(())
}

impl fmt::Display for CpExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, &self.terms, Partition::size, |alpha| {
            if alpha.is_empty() {
                String::new()
            } else {
                format!("cp^({alpha})")
            }
        })
    }
}

/// `cp^alpha` with the given origin, evaluated over a cell set; an exact
/// integer.
pub fn eval_cp(alpha: &Partition, origin: Cell, cells: &[Cell]) -> BigInt {
    let rel: Vec<i64> = cells.iter().map(|c| c.content() - origin.content()).collect();
    let mut acc = BigInt::one();
    for &k in alpha.parts() {
        let sum: BigInt = rel.iter().map(|&c| BigInt::from(c).pow(k as u32 - 1)).sum();
        acc *= sum;
    }
    acc
}

fn gamma_generator(k: usize, toward_right: bool) -> CpExpression {
    // relative contents shift by -1 per step right, +1 per step up;
    // expand (c -+ 1)^(k-1) over the generators
    let mut out = CpExpression::zero();
    for i in 0..k {
        let mut coeff = Rat::from_integer(binomial(k - 1, i));
        if toward_right && i % 2 == 1 {
            coeff = -coeff;
        }
        out.add_term(Partition::single_row(k - i), coeff);
    }
    out
}

fn gamma_map(e: &CpExpression, toward_right: bool) -> CpExpression {
    let mut out = CpExpression::zero();
    for (alpha, coeff) in e.terms() {
        let mut prod = CpExpression::constant(rat_int(1));
        for &k in alpha.parts() {
            prod = prod.mul(&gamma_generator(k, toward_right));
        }
        out = out.add(&prod.scale(coeff));
    }
    out
}

/// Re-roots one cell to the right: evaluating the image at origin `a`
/// equals evaluating the argument at the cell right of `a`. Multiplicative
/// and inverse to [`gamma_minus`].
pub fn gamma_plus(e: &CpExpression) -> CpExpression {
    gamma_map(e, true)
}

/// Re-roots one cell up; inverse to [`gamma_plus`].
pub fn gamma_minus(e: &CpExpression) -> CpExpression {
    gamma_map(e, false)
}

/// All splits of `alpha` into an ordered pair of sub-multisets, with the
/// product of per-size binomial multiplicities. Evaluating `cp^alpha` on a
/// disjoint union is the weighted sum over these splits of the products of
/// the two sub-evaluations.
pub fn union_split(alpha: &Partition) -> Vec<(Partition, Partition, BigInt)> {
    let mut sizes: Vec<(usize, usize)> = Vec::new(); // (part size, multiplicity)
    for &p in alpha.parts() {
        match sizes.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => sizes.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut picks = vec![0usize; sizes.len()];
    loop {
        let mut first = Vec::new();
        let mut second = Vec::new();
        let mut mult = BigInt::one();
        for (idx, &(size, m)) in sizes.iter().enumerate() {
            let take = picks[idx];
            first.extend(std::iter::repeat_n(size, take));
            second.extend(std::iter::repeat_n(size, m - take));
            mult *= binomial(m, take);
        }
        out.push((
            Partition::new(first).unwrap(),
            Partition::new(second).unwrap(),
            mult,
        ));
        // advance the mixed-radix counter
        let mut idx = 0;
        loop {
            if idx == sizes.len() {
                return out;
            }
            if picks[idx] < sizes[idx].1 {
                picks[idx] += 1;
                break;
            }
            picks[idx] = 0;
            idx += 1;
        }
    }
}

/// A product of two evaluations at a subtree's root: the left index over
/// the right-child subtree and the up index over the upper-child subtree.
/// Both indices empty is the constant 1.
pub type BracketMonomial = (Partition, Partition);

/// Exact-rational linear combination of bracket monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BracketExpression {
    terms: BTreeMap<BracketMonomial, Rat>,
}

impl BracketExpression {
    pub fn zero() -> Self {
        BracketExpression::default()
    }

    pub fn constant(v: Rat) -> Self {
        let mut e = BracketExpression::zero();
        e.add_term((Partition::empty(), Partition::empty()), v);
        e
    }

    pub fn monomial(left: Partition, up: Partition) -> Self {
        let mut e = BracketExpression::zero();
        e.add_term((left, up), rat_int(1));
        e
    }

    pub fn from_terms(terms: Vec<(Partition, Partition, Rat)>) -> Self {
        let mut e = BracketExpression::zero();
        for (left, up, coeff) in terms {
            e.add_term((left, up), coeff);
        }
        e
    }

    pub fn add_term(&mut self, key: BracketMonomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BracketMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &BracketMonomial) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, rhs: &BracketExpression) -> BracketExpression {
        let mut out = self.clone();
        for (key, coeff) in rhs.terms() {
            out.add_term(key.clone(), coeff.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &BracketExpression) -> BracketExpression {
        self.add(&rhs.scale(&rat_int(-1)))
    }

    pub fn scale(&self, factor: &Rat) -> BracketExpression {
        if factor.is_zero() {
            return BracketExpression::zero();
        }
        BracketExpression {
            terms: self
                .terms
                .iter()
                .map(|(key, coeff)| (key.clone(), coeff * factor))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &BracketExpression) -> BracketExpression {
        let mut out = BracketExpression::zero();
        for ((la, ua), ca) in self.terms() {
            for ((lb, ub), cb) in rhs.terms() {
                out.add_term((merge_parts(la, lb), merge_parts(ua, ub)), ca * cb);
            }
        }
        out
    }

    /// Numeric value at a root cell with given child cell sets; brackets
    /// keep the parent root as content origin.
    pub fn eval(&self, origin: Cell, left_cells: &[Cell], up_cells: &[Cell]) -> Rat {
        let mut total = Rat::zero();
        for ((left, up), coeff) in self.terms() {
            let l = eval_cp(left, origin, left_cells);
            let u = eval_cp(up, origin, up_cells);
            total += coeff * BigRational::from_integer(l * u);
        }
        total
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut terms: Vec<(&BracketMonomial, &Rat)> = self.terms.iter().collect();
        terms.sort_by_key(|((l, u), _)| {
            (std::cmp::Reverse(l.size() + u.size()), (l.clone(), u.clone()))
        });
        serde_json::Value::Array(
            terms
                .into_iter()
                .map(|((left, up), coeff)| {
                    serde_json::json!({
                        "coeff": coeff.to_string(),
                        "left": left.parts(),
                        "up": up.parts(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for BracketExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(
            f,
            &self.terms,
            |(l, u)| l.size() + u.size(),
            |(l, u)| {
                let mut s = String::new();
                if !l.is_empty() {
                    s.push_str(&format!("<^({l})"));
                }
                if !u.is_empty() {
                    if !s.is_empty() {
                        s.push(' ');
                    }
                    s.push_str(&format!("v^({u})"));
                }
                s
            },
        )
    }
}

/// Lifts a powersum expression to brackets over the right child, i.e.
/// evaluation on the right subtree with the parent root as origin.
pub fn bracket_left(e: &CpExpression) -> BracketExpression {
    let mut out = BracketExpression::zero();
    for (alpha, coeff) in e.terms() {
        out.add_term((alpha.clone(), Partition::empty()), coeff.clone());
    }
    out
}

/// Lifts a powersum expression to brackets over the upper child.
pub fn bracket_up(e: &CpExpression) -> BracketExpression {
    let mut out = BracketExpression::zero();
    for (alpha, coeff) in e.terms() {
        out.add_term((Partition::empty(), alpha.clone()), coeff.clone());
    }
    out
}

fn delta_monomial(alpha: &Partition) -> BracketExpression {
    // value on the whole subtree: the root contributes only to cp^(1)
    let mut on_s = BracketExpression::constant(rat_int(1));
    let mut on_left = BracketExpression::constant(rat_int(1));
    let mut on_up = BracketExpression::constant(rat_int(1));
    for &k in alpha.parts() {
        let mut s_factor = bracket_left(&CpExpression::generator(k))
            .add(&bracket_up(&CpExpression::generator(k)));
        if k == 1 {
            s_factor = s_factor.add(&BracketExpression::constant(rat_int(1)));
        }
        on_s = on_s.mul(&s_factor);
        // the child subtrees re-root by one step, which the re-rooting
        // operators express in the parent's origin
        on_left = on_left.mul(&bracket_left(&gamma_plus(&CpExpression::generator(k))));
        on_up = on_up.mul(&bracket_up(&gamma_minus(&CpExpression::generator(k))));
    }
    on_s.sub(&on_left).sub(&on_up)
}

/// The inductive form: value on a subtree minus the values on its two
/// child subtrees, expressed in bracket monomials.
pub fn delta(e: &CpExpression) -> BracketExpression {
    let mut out = BracketExpression::zero();
    for (alpha, coeff) in e.terms() {
        out = out.add(&delta_monomial(alpha).scale(coeff));
    }
    out
}

/// Result of an identification attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentifyOutcome {
    /// An expression with the requested inductive form and value at the
    /// empty subtree; `unique` is false when the linear system had free
    /// directions and an arbitrary solution was picked.
    Identified {
        expression: CpExpression,
        unique: bool,
    },
    /// No powersum combination of the tried degree has this inductive
    /// form.
    Unidentifiable { degree_tried: usize },
}

/// All monomial indices with `1 <= |alpha| <= bound`, by degree then
/// lexicographically.
fn basis_up_to(bound: usize) -> Vec<Partition> {
    let mut basis = Vec::new();
    for d in 1..=bound {
        basis.extend(Partition::all_of(d));
    }
    basis
}

/// Finds a powersum combination `f` with `delta(f) = b` and
/// `f(empty) = constant_at_empty`, searching coefficients on all monomials
/// of degree up to `degree_bound` (escalating once by one degree before
/// giving up). The solve is exact.
pub fn identify(
    b: &BracketExpression,
    constant_at_empty: Rat,
    degree_bound: usize,
) -> IdentifyOutcome {
    for bound in [degree_bound, degree_bound + 1] {
        if let Some(outcome) = identify_at(b, &constant_at_empty, bound) {
            return outcome;
        }
    }
    IdentifyOutcome::Unidentifiable {
        degree_tried: degree_bound + 1,
    }
}

fn identify_at(
    b: &BracketExpression,
    constant_at_empty: &Rat,
    bound: usize,
) -> Option<IdentifyOutcome> {
    let basis = basis_up_to(bound);
    let columns: Vec<BracketExpression> = basis
        .iter()
        .map(|alpha| delta(&CpExpression::monomial(alpha.clone())))
        .collect();
    // the constant part of f contributes -f(empty) to delta(f)
    let rhs = b.add(&BracketExpression::constant(constant_at_empty.clone()));

    // collect the bracket coordinates that appear anywhere
    let mut rows: std::collections::BTreeSet<BracketMonomial> = std::collections::BTreeSet::new();
    for col in &columns {
        rows.extend(col.terms().map(|(k, _)| k.clone()));
    }
    rows.extend(rhs.terms().map(|(k, _)| k.clone()));
    let rows: Vec<BracketMonomial> = rows.into_iter().collect();

    let matrix: Vec<Vec<Rat>> = rows
        .iter()
        .map(|key| columns.iter().map(|col| col.coeff(key)).collect())
        .collect();
    let target: Vec<Rat> = rows.iter().map(|key| rhs.coeff(key)).collect();

    let (solution, unique) = solve_exact(matrix, target)?;
    let mut expression = CpExpression::constant(constant_at_empty.clone());
    for (alpha, coeff) in basis.into_iter().zip(solution) {
        expression.add_term(alpha, coeff);
    }
    Some(IdentifyOutcome::Identified { expression, unique })
}

/// Gaussian elimination over the rationals. Returns a particular solution
/// (free variables at zero) and whether it is unique; `None` when the
/// system is inconsistent.
pub(crate) fn solve_exact(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<(Vec<Rat>, bool)> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let Some(pivot) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pivot);
        b.swap(row, pivot);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        b[row] *= &inv;
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..ncols {
                    let delta = &a[row][c] * &factor;
                    a[r][c] -= delta;
                }
                let delta = &b[row] * &factor;
                b[r] -= delta;
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // rows of zeros must have zero right-hand side
    for r in row..nrows {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut solution = vec![Rat::zero(); ncols];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            solution[col] = b[*r].clone();
        }
    }
    let unique = pivot_of_col.iter().all(Option::is_some);
    Some((solution, unique))
}
