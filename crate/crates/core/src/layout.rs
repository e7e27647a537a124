//! Finite normal form of an infinite matrix.
//!
//! Every matrix handled by the kernel (plain symbolic matrices and products of
//! two of them) splits at a threshold `T` into
//!
//! * rows `1..=T`, each an exact [`ValueProfile`] over all columns,
//! * columns `1..=T`, each an exact profile over all rows,
//! * the corner `i > T, k > T`, where the entry depends on `delta = k - i`:
//!   for `|delta| <= W` it is affine in `i`, above the band it is affine in
//!   `(i, k)`, below the band likewise. All corner coefficients may depend
//!   on `(i mod Q, k mod Q)`.
//!
//! Row and column families, regularity flags and every decision procedure
//! downstream work on this form.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;

use crate::matrix::SymbolicMatrix;
use crate::profile::{self, Affine, Affine2, SupportProfile, ValueProfile};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    threshold: usize,
    width: usize,
    modulus: usize,
    rows: Vec<ValueProfile>,
    cols: Vec<ValueProfile>,
    /// `band[delta + W][i mod Q]`, affine in `i`.
    band: Vec<Vec<Affine>>,
    /// `upper[(i mod Q) * Q + (k mod Q)]`
    upper: Vec<Affine2>,
    lower: Vec<Affine2>,
}

impl Layout {
    /// Normal form of a plain matrix at its natural threshold and width.
    pub fn of_matrix(m: &SymbolicMatrix) -> Self {
        Self::of_matrix_at(m, 0, 0)
    }

    /// Normal form with threshold at least `min_threshold` and band half-width at least `min_width`.
    pub fn of_matrix_at(m: &SymbolicMatrix, min_threshold: usize, min_width: usize) -> Self {
        let t = m.corner_threshold().max(min_threshold);
        let w = m.corner_width().max(min_width);
        let mt = m.transpose();
        let w_i = w as i64;
        Layout {
            threshold: t,
            width: w,
            modulus: 1,
            rows: (1..=t).map(|i| profile::row_profile(m, i)).collect(),
            cols: (1..=t).map(|j| profile::row_profile(&mt, j)).collect(),
            band: (-w_i..=w_i).map(|d| vec![Affine::constant(m.corner_value(d))]).collect(),
            upper: vec![Affine2::constant(m.corner_value(w_i + 1))],
            lower: vec![Affine2::constant(m.corner_value(-w_i - 1))],
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        threshold: usize,
        width: usize,
        modulus: usize,
        rows: Vec<ValueProfile>,
        cols: Vec<ValueProfile>,
        band: Vec<Vec<Affine>>,
        upper: Vec<Affine2>,
        lower: Vec<Affine2>,
    ) -> Self {
        debug_assert_eq!(rows.len(), threshold);
        debug_assert_eq!(cols.len(), threshold);
        debug_assert_eq!(band.len(), 2 * width + 1);
        debug_assert_eq!(upper.len(), modulus * modulus);
        Layout { threshold, width, modulus, rows, cols, band, upper, lower }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn entry(&self, i: usize, k: usize) -> Scalar {
        let t = self.threshold;
        if i <= t {
            return self.rows[i - 1].value(k);
        }
        if k <= t {
            return self.cols[k - 1].value(i);
        }
        self.corner(i, k)
    }

    fn corner(&self, i: usize, k: usize) -> Scalar {
        let q = self.modulus;
        let w = self.width as i64;
        let delta = k as i64 - i as i64;
        if delta.abs() <= w {
            self.band[(delta + w) as usize][i % q].at(i)
        } else if delta > w {
            self.upper[(i % q) * q + k % q].at(i, k)
        } else {
            self.lower[(i % q) * q + k % q].at(i, k)
        }
    }

    pub fn transpose(&self) -> Layout {
        let q = self.modulus;
        let w = self.width as i64;
        let swap = |v: &[Affine2]| -> Vec<Affine2> {
            let mut out = vec![Affine2::default(); q * q];
            for r in 0..q {
                for s in 0..q {
                    out[s * q + r] = v[r * q + s].swapped();
                }
            }
            out
        };
        // new (i', i'+d') is old (i'+d', i'), old offset -d' on old row i'+d'
        let band = (-w..=w)
            .map(|d| {
                (0..q)
                    .map(|r| {
                        let old = &self.band[(-d + w) as usize][((r as i64 + d).rem_euclid(q as i64)) as usize];
                        Affine { slope: old.slope.clone(), offset: &old.offset + &(&old.slope * &Scalar::from_int(d)) }
                    })
                    .collect()
            })
            .collect();
        Layout {
            threshold: self.threshold,
            width: self.width,
            modulus: q,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            band,
            upper: swap(&self.lower),
            lower: swap(&self.upper),
        }
    }

    /// Exact profile of row `i`.
    pub fn row_profile(&self, i: usize) -> ValueProfile {
        if i <= self.threshold {
            return self.rows[i - 1].clone();
        }
        let q = self.modulus;
        let n = i + self.width;
        let transient = (1..=n).map(|k| self.entry(i, k)).collect();
        let tail = (0..q).map(|s| self.upper[(i % q) * q + s].fix_first(i)).collect();
        ValueProfile::new(transient, tail)
    }

    /// First row index from which rows of the same residue class share one template.
    fn row_regime_start(&self) -> usize {
        let mut start = self.threshold;
        for c in &self.cols {
            start = start.max(c.bound());
        }
        for u in &self.upper {
            if u.b.is_zero() {
                if let Some(root) = (Affine { slope: u.a.clone(), offset: u.c.clone() }).root() {
                    start = start.max(root);
                }
            }
        }
        start
    }

    fn row_family_modulus(&self) -> usize {
        self.cols.iter().fold(self.modulus, |acc, c| acc.lcm(&c.period()))
    }

    /// Exact description of all rows.
    pub fn row_family(&self) -> LineFamilySet {
        let start = self.row_regime_start();
        let step = self.row_family_modulus();
        let exceptional = (1..=start).map(|i| (i, self.row_profile(i))).collect();
        let generic = (start + 1..=start + step).map(|first| self.template(first, step)).collect();
        LineFamilySet { exceptional, generic }
    }

    fn template(&self, first: usize, step: usize) -> LineTemplate {
        let q = self.modulus;
        let r = first % q;
        LineTemplate {
            start: first,
            step,
            threshold: self.threshold,
            width: self.width,
            modulus: q,
            fixed: self.cols.iter().map(|c| c.tail()[first % c.period()].clone()).collect(),
            band: self.band.iter().map(|b| b[r].clone()).collect(),
            lower: (0..q).map(|s| self.lower[r * q + s].clone()).collect(),
            upper: (0..q).map(|s| self.upper[r * q + s].clone()).collect(),
        }
    }
}

/// Rows (or columns) `start + step*t`, `t >= 0`, sharing one parametrized profile.
///
/// The profile parameters are affine in the line index `n`: the values at
/// positions `1..=T`, the band around position `n`, the stretch between, and
/// the tail beyond `n + W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineTemplate {
    pub start: usize,
    pub step: usize,
    threshold: usize,
    width: usize,
    modulus: usize,
    fixed: Vec<Affine>,
    band: Vec<Affine>,
    lower: Vec<Affine2>,
    upper: Vec<Affine2>,
}

impl LineTemplate {
    pub fn covers(&self, n: usize) -> bool {
        n >= self.start && (n - self.start).is_multiple_of(self.step)
    }

    /// The exact profile of line `n`. Panics if `n` is not in the family.
    pub fn instantiate(&self, n: usize) -> ValueProfile {
        assert!(self.covers(n), "line {n} not in family {}+{}t", self.start, self.step);
        let q = self.modulus;
        let w = self.width as i64;
        let last = n + self.width;
        let transient = (1..=last)
            .map(|c| {
                if c <= self.threshold {
                    return self.fixed[c - 1].at(n);
                }
                let d = c as i64 - n as i64;
                if d.abs() <= w {
                    self.band[(d + w) as usize].at(n)
                } else {
                    self.lower[c % q].at(n, c)
                }
            })
            .collect();
        let tail = self.upper.iter().map(|u| u.fix_first(n)).collect();
        ValueProfile::new(transient, tail)
    }

    /// Value at a fixed position as lines of the family go to infinity, affine in the line index.
    pub fn position_value(&self, c: usize) -> Affine {
        if c <= self.threshold {
            self.fixed[c - 1].clone()
        } else {
            self.lower[c % self.modulus].fix_second(c)
        }
    }

    /// Positions past which [`position_value`](Self::position_value) depends only on the position's residue.
    pub(crate) fn position_regime(&self) -> usize {
        let mut start = self.threshold;
        for l in &self.lower {
            if l.a.is_zero() {
                if let Some(root) = (Affine { slope: l.b.clone(), offset: l.c.clone() }).root() {
                    start = start.max(root);
                }
            }
        }
        start + self.modulus
    }

    pub(crate) fn width(&self) -> usize {
        self.width
    }

    /// Residues (mod the returned modulus) of positions in the infinite tail of every line.
    pub fn tail_residues(&self) -> (usize, BTreeSet<usize>) {
        let set = (0..self.modulus).filter(|&s| !self.upper[s].is_zero()).collect();
        (self.modulus, set)
    }

    pub fn has_tail(&self) -> bool {
        self.upper.iter().any(|u| !u.is_zero())
    }

    /// Every line of the family is identically zero.
    pub fn is_zero(&self) -> bool {
        self.fixed.iter().all(Affine::is_zero)
            && self.band.iter().all(Affine::is_zero)
            && self.lower.iter().all(Affine2::is_zero)
            && !self.has_tail()
    }
}

/// All lines of one orientation: finitely many explicit profiles plus generic families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineFamilySet {
    pub exceptional: BTreeMap<usize, ValueProfile>,
    pub generic: Vec<LineTemplate>,
}

impl LineFamilySet {
    pub fn line(&self, n: usize) -> ValueProfile {
        if let Some(p) = self.exceptional.get(&n) {
            return p.clone();
        }
        self.generic.iter().find(|t| t.covers(n)).expect("families cover every line").instantiate(n)
    }

    /// One line per distinct behaviour, in increasing index order: every
    /// exceptional line and the first line of each generic family.
    pub fn representatives(&self) -> Vec<(usize, ValueProfile)> {
        let mut out: Vec<(usize, ValueProfile)> = self.exceptional.iter().map(|(&n, p)| (n, p.clone())).collect();
        out.extend(self.generic.iter().map(|t| (t.start, t.instantiate(t.start))));
        out.sort_by_key(|(n, _)| *n);
        out
    }

    pub fn all_finite(&self) -> bool {
        self.exceptional.values().all(|p| !p.has_tail()) && self.generic.iter().all(|t| !t.has_tail())
    }

    /// Only finitely many lines are nonzero.
    pub fn eventually_zero(&self) -> bool {
        self.generic.iter().all(LineTemplate::is_zero)
    }

    /// Largest index that is not covered by a generic family.
    pub fn regime_start(&self) -> usize {
        self.exceptional.keys().next_back().copied().unwrap_or(0)
    }

    pub fn modulus(&self) -> usize {
        self.generic.first().map_or(1, |t| t.step)
    }
}

/// A layout together with its transpose, giving both row and column views.
#[derive(Clone, Debug)]
pub struct Lines {
    rows: Layout,
    cols: Layout,
}

impl Lines {
    pub fn new(layout: Layout) -> Self {
        let cols = layout.transpose();
        Lines { rows: layout, cols }
    }

    pub fn of_matrix(m: &SymbolicMatrix) -> Self {
        Self::new(Layout::of_matrix(m))
    }

    pub fn layout(&self) -> &Layout {
        &self.rows
    }

    pub fn transposed(&self) -> Lines {
        Lines { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    pub fn entry(&self, i: usize, k: usize) -> Scalar {
        self.rows.entry(i, k)
    }

    pub fn row_profile(&self, i: usize) -> ValueProfile {
        self.rows.row_profile(i)
    }

    pub fn col_profile(&self, k: usize) -> ValueProfile {
        self.cols.row_profile(k)
    }

    pub fn row_family(&self) -> LineFamilySet {
        self.rows.row_family()
    }

    pub fn col_family(&self) -> LineFamilySet {
        self.cols.row_family()
    }

    pub fn flags(&self) -> MatrixFlags {
        let rows = self.row_family();
        let cols = self.col_family();
        let row_finite = rows.all_finite();
        let col_finite = cols.all_finite();
        MatrixFlags {
            row_finite,
            col_finite,
            rcfm: row_finite && col_finite,
            fsm: row_finite && rows.eventually_zero(),
        }
    }

    /// Whether two normal forms describe the same matrix.
    pub fn same_matrix(&self, other: &Lines) -> bool {
        let t = self.rows.threshold.max(other.rows.threshold);
        let q = self.rows.modulus.lcm(&other.rows.modulus);
        let reach = t + 2 * q + self.rows.width.max(other.rows.width);
        (1..=reach).all(|n| self.row_profile(n) == other.row_profile(n) && self.col_profile(n) == other.col_profile(n))
    }
}

/// Regularity classes of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixFlags {
    pub row_finite: bool,
    pub col_finite: bool,
    pub rcfm: bool,
    pub fsm: bool,
}

pub fn row_family(m: &SymbolicMatrix) -> LineFamilySet {
    Layout::of_matrix(m).row_family()
}

pub fn col_family(m: &SymbolicMatrix) -> LineFamilySet {
    Layout::of_matrix(&m.transpose()).row_family()
}

pub fn classify_matrix(m: &SymbolicMatrix) -> MatrixFlags {
    Lines::of_matrix(m).flags()
}

/// Length of row `i`: last nonzero column, 0 for a zero row, `None` if the row is infinite.
pub fn length(m: &SymbolicMatrix, i: usize) -> Option<usize> {
    profile::row_profile(m, i).length()
}

/// Support of the entries of the family along a fixed position, as lines go to infinity.
pub(crate) fn position_support(family: &LineFamilySet, position: usize) -> SupportProfile {
    let start = family.regime_start();
    let step = family.modulus();
    let mut bound = start;
    for t in &family.generic {
        if let Some(root) = t.position_value(position).root() {
            bound = bound.max(root);
        }
    }
    // lines past `position + W` are in the stretch where the affine form applies
    let reach = bound.max(position + family.generic.first().map_or(0, |t| t.width())) + step;
    let transient = (1..=reach).filter(|&n| !family.line(n).value(position).is_zero()).collect();
    let residues =
        family.generic.iter().filter(|t| !t.position_value(position).is_zero()).map(|t| t.start % step).collect();
    SupportProfile::new(reach, transient, step, residues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Primitive;

    fn mat(terms: impl IntoIterator<Item = Primitive>) -> SymbolicMatrix {
        SymbolicMatrix::new(terms).unwrap()
    }

    fn upper_ones() -> SymbolicMatrix {
        mat([Primitive::upper_cone(0, 1, 1)])
    }

    fn bidiagonal() -> SymbolicMatrix {
        mat([Primitive::diag(0, 1, 1), Primitive::diag(1, 1, -1)])
    }

    fn connector() -> SymbolicMatrix {
        mat([
            Primitive::row_prog(1, 1, 1, 1),
            Primitive::col_prog(1, 1, 1, 1),
            Primitive::cell(2, 2, 1),
            Primitive::cell(1, 1, -1),
        ])
    }

    #[test]
    fn layout_reproduces_entries() {
        for m in [
            upper_ones(),
            bidiagonal(),
            connector(),
            mat([Primitive::lower_cone(-2, 3, 2), Primitive::col_prog(2, 1, 3, 1)]),
        ] {
            let l = Layout::of_matrix(&m);
            for i in 1..30 {
                for k in 1..30 {
                    assert_eq!(l.entry(i, k), m.entry(i, k), "{m} at ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn layout_transpose_matches_transposed_matrix() {
        let m = mat([Primitive::diag(-2, 3, 5), Primitive::upper_cone(1, 2, 1), Primitive::row_prog(2, 1, 2, 3)]);
        let l = Layout::of_matrix(&m).transpose();
        let mt = m.transpose();
        for i in 1..25 {
            for k in 1..25 {
                assert_eq!(l.entry(i, k), mt.entry(i, k));
            }
        }
    }

    #[test]
    fn upper_ones_has_single_generic_family() {
        let f = row_family(&upper_ones());
        assert!(f.exceptional.is_empty());
        assert_eq!(f.generic.len(), 1);
        let t = &f.generic[0];
        assert_eq!((t.start, t.step), (1, 1));
        for n in 1..6 {
            assert_eq!(t.instantiate(n).support(), SupportProfile::ray(n));
        }
    }

    #[test]
    fn unit_rows_family() {
        let f = row_family(&SymbolicMatrix::unit(2, 2));
        assert!(f.exceptional.contains_key(&2));
        assert!(f.exceptional.keys().all(|&n| n <= 2));
        assert_eq!(f.generic.len(), 1);
        assert!(f.generic[0].instantiate(f.generic[0].start).support().is_empty());
    }

    #[test]
    fn connector_columns() {
        let f = col_family(&connector());
        assert_eq!(f.exceptional.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(f.generic.len(), 1);
        let t = &f.generic[0];
        assert_eq!(t.start, 3);
        for k in 3..8 {
            assert_eq!(t.instantiate(k).support(), SupportProfile::finite([1]));
        }
    }

    #[test]
    fn flags() {
        let all = MatrixFlags { row_finite: true, col_finite: true, rcfm: true, fsm: true };
        assert_eq!(classify_matrix(&bidiagonal()), MatrixFlags { fsm: false, ..all });
        assert_eq!(
            classify_matrix(&upper_ones()),
            MatrixFlags { row_finite: false, col_finite: true, rcfm: false, fsm: false }
        );
        assert_eq!(classify_matrix(&SymbolicMatrix::unit(1, 1)), all);
        assert_eq!(classify_matrix(&SymbolicMatrix::zero()), all);
    }

    #[test]
    fn lengths() {
        assert_eq!(length(&bidiagonal(), 1), Some(2));
        assert_eq!(length(&SymbolicMatrix::zero(), 4), Some(0));
        assert_eq!(length(&upper_ones(), 1), None);
    }

    #[test]
    fn position_support_of_ones_column_rows() {
        let c = mat([Primitive::col_prog(1, 1, 2, 1)]);
        let f = row_family(&c);
        let s = position_support(&f, 1);
        for n in 1..20 {
            assert_eq!(s.contains(n), n % 2 == 1);
        }
        assert!(position_support(&f, 2).is_empty());
    }
}
