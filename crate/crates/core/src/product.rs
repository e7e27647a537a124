//! Pairwise products: the definedness decision, lazy product expressions and
//! exact normal forms of product lines.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::layout::{position_support, Layout, LineFamilySet, Lines};
use crate::matrix::SymbolicMatrix;
use crate::profile::{fit_profile, Affine, Affine2, Progression, SupportProfile, ValueProfile};
use crate::scalar::Scalar;

/// A row `i` of the left factor and column `k` of the right factor whose
/// supports meet in the infinite progression `family`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UndefinedWitness {
    pub i: usize,
    pub k: usize,
    pub family: Progression,
}

/// Verdict of the definedness decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub defined: bool,
    pub witness: Option<UndefinedWitness>,
}

impl Decision {
    pub fn yes() -> Self {
        Decision { defined: true, witness: None }
    }
}

/// Decide whether the product of two matrices in normal form is defined.
///
/// Lines of one family share their tail, so it suffices to pair every
/// exceptional line and the first line of every generic family. Scanning in
/// increasing order yields the lexicographically smallest witness.
pub fn decide_defined(left: &Lines, right: &Lines) -> Decision {
    let rows = left.row_family().representatives();
    let cols: Vec<(usize, SupportProfile)> = right
        .col_family()
        .representatives()
        .into_iter()
        .map(|(k, p)| (k, p.support()))
        .filter(|(_, s)| !s.is_finite())
        .collect();
    if cols.is_empty() {
        return Decision::yes();
    }
    for (i, row) in rows {
        let row = row.support();
        if row.is_finite() {
            continue;
        }
        for (k, col) in &cols {
            if let Some(family) = row.tail_meet(col) {
                return Decision { defined: false, witness: Some(UndefinedWitness { i, k: *k, family }) };
            }
        }
    }
    Decision::yes()
}

pub fn is_defined(a: &SymbolicMatrix, b: &SymbolicMatrix) -> Decision {
    decide_defined(&Lines::of_matrix(a), &Lines::of_matrix(b))
}

/// For every row `i` of `left`, the family `{left_ij * right_j* : j}` is summable.
///
/// Works from the rows of `left` and the row families of `right` read at a
/// fixed column, independently of [`decide_defined`].
pub fn left_defined_lines(left: &Lines, right: &Lines) -> bool {
    let right_rows = right.row_family();
    let reach =
        right_rows.generic.iter().map(|t| t.position_regime()).max().unwrap_or(0).max(right_rows.regime_start()) + 1;
    let columns: Vec<SupportProfile> = (1..=reach).map(|k| position_support(&right_rows, k)).collect();
    left.row_family().representatives().into_iter().all(|(_, row)| {
        let row = row.support();
        row.is_finite() || columns.iter().all(|col| row.tail_meet(col).is_none())
    })
}

/// For every column `k` of `right`, the family `{left_*j * right_jk : j}` is summable.
pub fn right_defined_lines(left: &Lines, right: &Lines) -> bool {
    left_defined_lines(&right.transposed(), &left.transposed())
}

pub fn left_defined(a: &SymbolicMatrix, b: &SymbolicMatrix) -> bool {
    left_defined_lines(&Lines::of_matrix(a), &Lines::of_matrix(b))
}

pub fn right_defined(a: &SymbolicMatrix, b: &SymbolicMatrix) -> bool {
    right_defined_lines(&Lines::of_matrix(a), &Lines::of_matrix(b))
}

/// `sum_j row(j) * col(j)`, or `None` when the supports meet infinitely often.
pub fn line_dot(row: &ValueProfile, col: &ValueProfile) -> Option<Scalar> {
    let bound = row.support().meet_bound(&col.support())?;
    Some(dot_to(row, col, bound))
}

fn dot_to(row: &ValueProfile, col: &ValueProfile, bound: usize) -> Scalar {
    let mut acc = Scalar::zero();
    for j in 1..=bound {
        let x = row.value(j);
        if x.is_zero() {
            continue;
        }
        let y = col.value(j);
        if !y.is_zero() {
            acc += &x * &y;
        }
    }
    acc
}

/// A product whose definedness has been certified. Entries are evaluated on demand.
#[derive(Debug)]
pub struct ProductExpr {
    left: SymbolicMatrix,
    right: SymbolicMatrix,
    certificate: Decision,
    left_lines: Lines,
    right_lines: Lines,
    lines: OnceLock<std::result::Result<Lines, String>>,
}

pub fn product(a: &SymbolicMatrix, b: &SymbolicMatrix) -> Result<ProductExpr> {
    let left_lines = Lines::of_matrix(a);
    let right_lines = Lines::of_matrix(b);
    let certificate = decide_defined(&left_lines, &right_lines);
    if !certificate.defined {
        return Err(Error::UndefinedProduct(Box::new(certificate)));
    }
    Ok(ProductExpr { left: a.clone(), right: b.clone(), certificate, left_lines, right_lines, lines: OnceLock::new() })
}

impl ProductExpr {
    pub fn left(&self) -> &SymbolicMatrix {
        &self.left
    }

    pub fn right(&self) -> &SymbolicMatrix {
        &self.right
    }

    pub fn certificate(&self) -> &Decision {
        &self.certificate
    }

    /// Exact entry `sum_j left_ij * right_jk`, summed over the finite meet of the two supports.
    pub fn entry(&self, i: usize, k: usize) -> Scalar {
        line_dot(&self.left_lines.row_profile(i), &self.right_lines.col_profile(k))
            .expect("certified product has finite sums")
    }

    /// Last `j` that can contribute to entry `(i, k)`.
    pub fn summation_bound(&self, i: usize, k: usize) -> usize {
        self.left_lines
            .row_profile(i)
            .support()
            .meet_bound(&self.right_lines.col_profile(k).support())
            .expect("certified product has finite sums")
    }

    /// Exact normal form of the product.
    pub fn lines(&self) -> Result<&Lines> {
        self.lines
            .get_or_init(|| {
                product_layout(&self.left_lines, &self.right_lines).map(Lines::new).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::ProfileDegreeOverflow(e.clone()))
    }

    pub fn row_profile(&self, i: usize) -> Result<ValueProfile> {
        Ok(self.lines()?.row_profile(i))
    }

    pub fn col_profile(&self, k: usize) -> Result<ValueProfile> {
        Ok(self.lines()?.col_profile(k))
    }

    pub fn row_family(&self) -> Result<LineFamilySet> {
        Ok(self.lines()?.row_family())
    }

    pub fn col_family(&self) -> Result<LineFamilySet> {
        Ok(self.lines()?.col_family())
    }

    /// Whether the product equals `m` everywhere.
    pub fn equals(&self, m: &SymbolicMatrix) -> Result<bool> {
        Ok(self.lines()?.same_matrix(&Lines::of_matrix(m)))
    }
}

/// Cached line profiles of the two factors of a product.
struct Factors<'a> {
    left: &'a Lines,
    right: &'a Lines,
    rows: HashMap<usize, (ValueProfile, SupportProfile)>,
    cols: HashMap<usize, (ValueProfile, SupportProfile)>,
}

impl<'a> Factors<'a> {
    fn new(left: &'a Lines, right: &'a Lines) -> Self {
        Factors { left, right, rows: HashMap::new(), cols: HashMap::new() }
    }

    fn row(&mut self, i: usize) -> &(ValueProfile, SupportProfile) {
        let left = self.left;
        self.rows.entry(i).or_insert_with(|| {
            let p = left.row_profile(i);
            let s = p.support();
            (p, s)
        })
    }

    fn col(&mut self, k: usize) -> &(ValueProfile, SupportProfile) {
        let right = self.right;
        self.cols.entry(k).or_insert_with(|| {
            let p = right.col_profile(k);
            let s = p.support();
            (p, s)
        })
    }

    fn entry(&mut self, i: usize, k: usize) -> Result<Scalar> {
        self.row(i);
        self.col(k);
        let (rp, rs) = &self.rows[&i];
        let (cp, cs) = &self.cols[&k];
        let bound =
            rs.meet_bound(cs).ok_or_else(|| Error::Invariant(format!("product entry ({i},{k}) is an infinite sum")))?;
        Ok(dot_to(rp, cp, bound))
    }
}

fn check(fitted: &Scalar, actual: Scalar, what: &str, i: usize, k: usize) -> Result<()> {
    if *fitted == actual {
        Ok(())
    } else {
        Err(Error::ProfileDegreeOverflow(format!("{what} at ({i},{k}): fitted {fitted}, actual {actual}")))
    }
}

/// Normal form of a defined product `left * right`.
///
/// Product lines are eventually quasi-affine. The thresholds below are where
/// that regime provably starts for factors with constant tails; inside it each
/// piece is fixed by two or three exact samples and then checked on further
/// samples and on a full grid around the threshold.
pub(crate) fn product_layout(left: &Lines, right: &Lines) -> Result<Layout> {
    let (la, lb) = (left.layout(), right.layout());
    let t = la.threshold().max(lb.threshold());
    let w = la.width().max(lb.width());
    let mut n_fixed = 0;
    let mut q = la.modulus().lcm(&lb.modulus());
    for j in 1..=t {
        let ca = left.col_profile(j);
        let rb = right.row_profile(j);
        n_fixed = n_fixed.max(ca.bound()).max(rb.bound());
        q = q.lcm(&ca.period()).lcm(&rb.period());
    }
    let tp = (t + 3 * w + 2).max(n_fixed) + 1;
    let wp = 2 * w + 1;
    let mut f = Factors::new(left, right);

    let mut rows = Vec::with_capacity(tp);
    for i in 1..=tp {
        let (ra, _) = f.row(i).clone();
        let bound = t.max(ra.bound()).max(n_fixed) + 2 * w + 2;
        let period = ra.period().lcm(&q);
        let mut err = None;
        let p = fit_profile(bound, period, |k| {
            f.entry(i, k).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Scalar::zero()
            })
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        rows.push(p);
    }
    let mut cols = Vec::with_capacity(tp);
    for k in 1..=tp {
        let (cb, _) = f.col(k).clone();
        let bound = t.max(cb.bound()).max(n_fixed) + 2 * w + 2;
        let period = cb.period().lcm(&q);
        let mut err = None;
        let p = fit_profile(bound, period, |i| {
            f.entry(i, k).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Scalar::zero()
            })
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        cols.push(p);
    }

    let first_in_class = |above: usize, r: usize| above + 1 + (r + q - (above + 1) % q) % q;
    let wi = wp as i64;
    let mut band = Vec::with_capacity(2 * wp + 1);
    for d in -wi..=wi {
        let mut per_class = Vec::with_capacity(q);
        for r in 0..q {
            let i1 = first_in_class(tp + wp, r);
            let at = |i: usize| (i as i64 + d) as usize;
            let (v1, v2) = (f.entry(i1, at(i1))?, f.entry(i1 + q, at(i1 + q))?);
            let a = Affine::through(i1, &v1, i1 + q, &v2);
            for i in [i1 + 2 * q, i1 + 3 * q] {
                check(&a.at(i), f.entry(i, at(i))?, "band", i, at(i))?;
            }
            per_class.push(a);
        }
        band.push(per_class);
    }

    let qs = Scalar::from(q);
    let mut upper = vec![Affine2::default(); q * q];
    let mut lower = vec![Affine2::default(); q * q];
    for r in 0..q {
        for s in 0..q {
            for above in [true, false] {
                let (i0, k0) = if above {
                    let i0 = first_in_class(tp, r);
                    (i0, first_in_class(i0 + wp + 2 * q, s))
                } else {
                    let k0 = first_in_class(tp, s);
                    (first_in_class(k0 + wp + 2 * q, r), k0)
                };
                let v1 = f.entry(i0, k0)?;
                let a = &(&f.entry(i0 + q, k0)? - &v1) / &qs;
                let b = &(&f.entry(i0, k0 + q)? - &v1) / &qs;
                let c = &(&v1 - &(&a * &Scalar::from(i0))) - &(&b * &Scalar::from(k0));
                let piece = Affine2 { a, b, c };
                let probes = if above {
                    [(i0 + q, k0 + q), (i0 + 2 * q, k0 + 3 * q), (i0 + 3 * q, k0 + 7 * q)]
                } else {
                    [(i0 + q, k0 + q), (i0 + 3 * q, k0 + 2 * q), (i0 + 7 * q, k0 + 3 * q)]
                };
                for (i, k) in probes {
                    check(&piece.at(i, k), f.entry(i, k)?, if above { "upper" } else { "lower" }, i, k)?;
                }
                if above {
                    upper[r * q + s] = piece;
                } else {
                    lower[r * q + s] = piece;
                }
            }
        }
    }

    let layout = Layout::from_parts(tp, wp, q, rows, cols, band, upper, lower);
    let grid = tp + 2 * wp + 2 * q;
    for i in 1..=grid {
        for k in 1..=grid {
            check(&layout.entry(i, k), f.entry(i, k)?, "normal form", i, k)?;
        }
    }
    Ok(layout)
}
