//! Region primitives and symbolic matrices.
//!
//! A [`SymbolicMatrix`] is a finite sum of constant-valued regions of
//! `Z+ x Z+`. Indices are 1-based throughout. Overlapping regions are allowed
//! and their values add.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The region covered by a primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// The single position `(i, j)`.
    Cell { i: usize, j: usize },
    /// `{(row, from + step*t) : t >= 0}`.
    RowProg { row: usize, from: usize, step: usize },
    /// `{(from + step*t, col) : t >= 0}`.
    ColProg { col: usize, from: usize, step: usize },
    /// `{(i, i + offset) : i >= from}`.
    Diag { offset: i64, from: usize },
    /// `{(i, j) : i >= from, j - i >= offset}`.
    UpperCone { offset: i64, from: usize },
    /// `{(i, j) : j >= from, i - j >= offset}`.
    LowerCone { offset: i64, from: usize },
}

/// The intersection of a shape with a single row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trace {
    Empty,
    Point(usize),
    /// `{from + step*t}`
    Prog {
        from: usize,
        step: usize,
    },
    /// `{lo..=hi}`, possibly empty.
    Interval {
        lo: usize,
        hi: usize,
    },
    /// `{from..}`
    Ray {
        from: usize,
    },
}

impl Trace {
    pub fn contains(&self, j: usize) -> bool {
        match *self {
            Trace::Empty => false,
            Trace::Point(p) => j == p,
            Trace::Prog { from, step } => j >= from && (j - from).is_multiple_of(step),
            Trace::Interval { lo, hi } => lo <= j && j <= hi,
            Trace::Ray { from } => j >= from,
        }
    }

    /// Position after which membership is periodic, and that period.
    pub fn regime(&self) -> (usize, usize) {
        match *self {
            Trace::Empty => (0, 1),
            Trace::Point(p) => (p, 1),
            Trace::Prog { from, step } => (from, step),
            Trace::Interval { hi, .. } => (hi, 1),
            Trace::Ray { from } => (from, 1),
        }
    }
}

fn clamp_pos(x: i64) -> usize {
    x.max(1) as usize
}

impl Shape {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let ok = match *self {
            Shape::Cell { i, j } => i >= 1 && j >= 1,
            Shape::RowProg { row, from, step } | Shape::ColProg { col: row, from, step } => {
                row >= 1 && from >= 1 && step >= 1
            }
            Shape::Diag { offset, from } => from >= 1 && from as i64 + offset >= 1,
            Shape::UpperCone { from, .. } | Shape::LowerCone { from, .. } => from >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(match self {
                Shape::Diag { .. } => "requires from >= 1 and from + d >= 1".to_string(),
                Shape::RowProg { .. } | Shape::ColProg { .. } => "requires indices >= 1 and step >= 1".to_string(),
                _ => "requires indices >= 1".to_string(),
            })
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let (ii, jj) = (i as i64, j as i64);
        match *self {
            Shape::Cell { i: a, j: b } => i == a && j == b,
            Shape::RowProg { row, from, step } => i == row && j >= from && (j - from).is_multiple_of(step),
            Shape::ColProg { col, from, step } => j == col && i >= from && (i - from).is_multiple_of(step),
            Shape::Diag { offset, from } => i >= from && jj - ii == offset,
            Shape::UpperCone { offset, from } => i >= from && jj - ii >= offset,
            Shape::LowerCone { offset, from } => j >= from && ii - jj >= offset,
        }
    }

    /// Intersection with row `i`.
    pub fn row_trace(&self, i: usize) -> Trace {
        let ii = i as i64;
        match *self {
            Shape::Cell { i: a, j } if a == i => Trace::Point(j),
            Shape::RowProg { row, from, step } if row == i => Trace::Prog { from, step },
            Shape::ColProg { col, from, step } if i >= from && (i - from).is_multiple_of(step) => Trace::Point(col),
            Shape::Diag { offset, from } if i >= from => Trace::Point((ii + offset) as usize),
            Shape::UpperCone { offset, from } if i >= from => Trace::Ray { from: clamp_pos(ii + offset) },
            Shape::LowerCone { offset, from } if ii - offset >= from as i64 => {
                Trace::Interval { lo: from, hi: (ii - offset) as usize }
            }
            _ => Trace::Empty,
        }
    }

    pub fn transpose(&self) -> Shape {
        match *self {
            Shape::Cell { i, j } => Shape::Cell { i: j, j: i },
            Shape::RowProg { row, from, step } => Shape::ColProg { col: row, from, step },
            Shape::ColProg { col, from, step } => Shape::RowProg { row: col, from, step },
            Shape::Diag { offset, from } => Shape::Diag { offset: -offset, from: (from as i64 + offset) as usize },
            Shape::UpperCone { offset, from } => Shape::LowerCone { offset, from },
            Shape::LowerCone { offset, from } => Shape::UpperCone { offset, from },
        }
    }

    /// Smallest `t` such that inside `{i > t, j > t}` the shape depends only on `j - i`.
    pub fn corner_threshold(&self) -> usize {
        match *self {
            Shape::Cell { i, j } => i.max(j),
            Shape::RowProg { row, .. } => row,
            Shape::ColProg { col, .. } => col,
            Shape::Diag { from, .. } | Shape::UpperCone { from, .. } | Shape::LowerCone { from, .. } => from - 1,
        }
    }

    pub fn offset(&self) -> Option<i64> {
        match *self {
            Shape::Diag { offset, .. } | Shape::UpperCone { offset, .. } | Shape::LowerCone { offset, .. } => {
                Some(offset)
            }
            _ => None,
        }
    }

    /// Whether the corner part of the shape contains diagonal offset `delta = j - i`.
    fn corner_contains(&self, delta: i64) -> bool {
        match *self {
            Shape::Diag { offset, .. } => delta == offset,
            Shape::UpperCone { offset, .. } => delta >= offset,
            Shape::LowerCone { offset, .. } => -delta >= offset,
            _ => false,
        }
    }
}

/// A region shape carrying a nonzero value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Primitive {
    pub shape: Shape,
    pub value: Scalar,
}

impl Primitive {
    pub fn new(shape: Shape, value: impl Into<Scalar>) -> Self {
        Primitive { shape, value: value.into() }
    }

    pub fn cell(i: usize, j: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::Cell { i, j }, value)
    }

    pub fn row_prog(row: usize, from: usize, step: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::RowProg { row, from, step }, value)
    }

    pub fn col_prog(col: usize, from: usize, step: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::ColProg { col, from, step }, value)
    }

    pub fn diag(offset: i64, from: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::Diag { offset, from }, value)
    }

    pub fn upper_cone(offset: i64, from: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::UpperCone { offset, from }, value)
    }

    pub fn lower_cone(offset: i64, from: usize, value: impl Into<Scalar>) -> Self {
        Self::new(Shape::LowerCone { offset, from }, value)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.value;
        match self.shape {
            Shape::Cell { i, j } => write!(f, "cell i={i} j={j} value={v}"),
            Shape::RowProg { row, from, step } => write!(f, "row_prog i={row} from={from} step={step} value={v}"),
            Shape::ColProg { col, from, step } => write!(f, "col_prog j={col} from={from} step={step} value={v}"),
            Shape::Diag { offset, from } => write!(f, "diag d={offset} from={from} value={v}"),
            Shape::UpperCone { offset, from } => write!(f, "upper_cone d={offset} from={from} value={v}"),
            Shape::LowerCone { offset, from } => write!(f, "lower_cone d={offset} from={from} value={v}"),
        }
    }
}

/// An infinite matrix given as a finite sum of primitives.
///
/// Terms are kept sorted by shape with identical shapes merged, so equal
/// term multisets produce identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicMatrix {
    terms: Vec<Primitive>,
}

impl SymbolicMatrix {
    pub fn new(terms: impl IntoIterator<Item = Primitive>) -> Result<Self> {
        let terms: Vec<Primitive> = terms.into_iter().collect();
        for p in &terms {
            p.shape.validate().map_err(|reason| Error::InvalidPrimitive { primitive: p.to_string(), reason })?;
        }
        Ok(Self::normalized(terms))
    }

    fn normalized(terms: Vec<Primitive>) -> Self {
        let mut merged: BTreeMap<Shape, Scalar> = BTreeMap::new();
        for p in terms {
            *merged.entry(p.shape).or_default() += p.value;
        }
        let terms =
            merged.into_iter().filter(|(_, v)| !v.is_zero()).map(|(shape, value)| Primitive { shape, value }).collect();
        SymbolicMatrix { terms }
    }

    pub fn zero() -> Self {
        SymbolicMatrix::default()
    }

    pub fn identity() -> Self {
        Self::normalized(vec![Primitive::diag(0, 1, 1)])
    }

    /// The matrix unit `E_ab`. Panics on a zero index.
    pub fn unit(a: usize, b: usize) -> Self {
        assert!(a >= 1 && b >= 1, "indices are 1-based");
        Self::normalized(vec![Primitive::cell(a, b, 1)])
    }

    pub fn terms(&self) -> &[Primitive] {
        &self.terms
    }

    pub fn is_zero_repr(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact entry at `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for p in &self.terms {
            if p.shape.contains(i, j) {
                acc += &p.value;
            }
        }
        acc
    }

    pub fn add(&self, other: &SymbolicMatrix) -> SymbolicMatrix {
        Self::normalized(self.terms.iter().chain(other.terms.iter()).cloned().collect())
    }

    pub fn scale(&self, lambda: &Scalar) -> SymbolicMatrix {
        if lambda.is_zero() {
            return SymbolicMatrix::zero();
        }
        Self::normalized(self.terms.iter().map(|p| Primitive { shape: p.shape, value: &p.value * lambda }).collect())
    }

    pub fn sub(&self, other: &SymbolicMatrix) -> SymbolicMatrix {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn transpose(&self) -> SymbolicMatrix {
        Self::normalized(
            self.terms.iter().map(|p| Primitive { shape: p.shape.transpose(), value: p.value.clone() }).collect(),
        )
    }

    /// Traces of every term on row `i`, with their values.
    pub fn row_traces(&self, i: usize) -> impl Iterator<Item = (Trace, &Scalar)> + '_ {
        self.terms.iter().map(move |p| (p.shape.row_trace(i), &p.value)).filter(|(t, _)| *t != Trace::Empty)
    }

    pub(crate) fn corner_threshold(&self) -> usize {
        self.terms.iter().map(|p| p.shape.corner_threshold()).max().unwrap_or(0)
    }

    pub(crate) fn corner_width(&self) -> usize {
        self.terms.iter().filter_map(|p| p.shape.offset()).map(|d| d.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Entry at diagonal offset `delta` deep inside the corner.
    pub(crate) fn corner_value(&self, delta: i64) -> Scalar {
        self.terms.iter().filter(|p| p.shape.corner_contains(delta)).map(|p| p.value.clone()).sum()
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, p) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, "  ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper_ones() -> SymbolicMatrix {
        SymbolicMatrix::new([Primitive::upper_cone(0, 1, 1)]).unwrap()
    }

    fn bidiagonal() -> SymbolicMatrix {
        SymbolicMatrix::new([Primitive::diag(0, 1, 1), Primitive::diag(1, 1, -1)]).unwrap()
    }

    #[test]
    fn upper_ones_entries() {
        let v = upper_ones();
        assert_eq!(v.entry(2, 5), Scalar::one());
        assert_eq!(v.entry(5, 2), Scalar::zero());
    }

    #[test]
    fn bidiagonal_entries() {
        let u = bidiagonal();
        assert_eq!(u.entry(1, 1), Scalar::one());
        assert_eq!(u.entry(1, 2), Scalar::from_int(-1));
        assert_eq!(u.entry(1, 3), Scalar::zero());
    }

    #[test]
    fn empty_sum_is_zero() {
        let z = SymbolicMatrix::new([]).unwrap();
        assert_eq!(z.entry(7, 7), Scalar::zero());
        assert!(z.is_zero_repr());
    }

    #[test]
    fn overlap_corrected_by_negative_cell() {
        let b = SymbolicMatrix::new([
            Primitive::row_prog(1, 1, 1, 1),
            Primitive::col_prog(1, 1, 1, 1),
            Primitive::cell(2, 2, 1),
            Primitive::cell(1, 1, -1),
        ])
        .unwrap();
        assert_eq!(b.entry(1, 1), Scalar::one());
        assert_eq!(b.entry(1, 9), Scalar::one());
        assert_eq!(b.entry(9, 1), Scalar::one());
        assert_eq!(b.entry(2, 2), Scalar::one());
        assert_eq!(b.entry(2, 3), Scalar::zero());
    }

    #[test]
    fn rejects_diagonal_leaving_the_quadrant() {
        let err = SymbolicMatrix::new([Primitive::diag(-3, 2, 1)]).unwrap_err();
        assert!(err.to_string().contains("diag d=-3 from=2"), "{err}");
        assert!(SymbolicMatrix::new([Primitive::row_prog(1, 1, 0, 1)]).is_err());
        assert!(SymbolicMatrix::new([Primitive::cell(0, 1, 1)]).is_err());
    }

    #[test]
    fn zero_values_dropped_and_terms_merged() {
        let m = SymbolicMatrix::new([Primitive::cell(1, 1, 0), Primitive::diag(0, 1, 2), Primitive::diag(0, 1, -2)])
            .unwrap();
        assert!(m.is_zero_repr());
    }

    #[test]
    fn additive_inverse_is_zero() {
        let u = bidiagonal();
        assert!(u.add(&u.scale(&Scalar::from_int(-1))).is_zero_repr());
        assert!(u.scale(&Scalar::zero()).is_zero_repr());
        let two = SymbolicMatrix::unit(1, 1).scale(&Scalar::from_int(2));
        assert_eq!(two.entry(1, 1), Scalar::from_int(2));
    }

    #[test]
    fn bidiagonal_is_sum_of_two_diagonals() {
        let d0 = SymbolicMatrix::new([Primitive::diag(0, 1, 1)]).unwrap();
        let d1 = SymbolicMatrix::new([Primitive::diag(1, 1, -1)]).unwrap();
        assert_eq!(d0.add(&d1), bidiagonal());
    }

    #[test]
    fn transpose_maps_shapes() {
        assert_eq!(upper_ones().transpose(), SymbolicMatrix::new([Primitive::lower_cone(0, 1, 1)]).unwrap());
        assert_eq!(bidiagonal().transpose().transpose(), bidiagonal());
        let t = SymbolicMatrix::unit(3, 1).transpose();
        assert_eq!(t.entry(1, 3), Scalar::one());
        for shape in [
            Shape::Diag { offset: -2, from: 3 },
            Shape::Diag { offset: 2, from: 1 },
            Shape::UpperCone { offset: -1, from: 2 },
            Shape::LowerCone { offset: 2, from: 3 },
            Shape::RowProg { row: 2, from: 1, step: 3 },
        ] {
            let t = shape.transpose();
            for i in 1..12 {
                for j in 1..12 {
                    assert_eq!(shape.contains(i, j), t.contains(j, i), "{shape:?} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn matrix_unit() {
        let e = SymbolicMatrix::unit(2, 2);
        assert_eq!(e.entry(2, 2), Scalar::one());
        assert_eq!(e.entry(2, 3), Scalar::zero());
    }

    #[test]
    fn ones_column_realizes_unit_sum() {
        // sum over j of E_{j,1}
        let c = SymbolicMatrix::new([Primitive::col_prog(1, 1, 1, 1)]).unwrap();
        for i in 1..20 {
            assert_eq!(c.entry(i, 1), Scalar::one());
            assert_eq!(c.entry(i, 2), Scalar::zero());
        }
    }

    #[test]
    fn row_trace_matches_membership() {
        let shapes = [
            Shape::Cell { i: 3, j: 2 },
            Shape::RowProg { row: 3, from: 2, step: 3 },
            Shape::ColProg { col: 4, from: 1, step: 2 },
            Shape::Diag { offset: -2, from: 4 },
            Shape::UpperCone { offset: -3, from: 2 },
            Shape::LowerCone { offset: -1, from: 2 },
        ];
        for s in shapes {
            for i in 1..15 {
                let t = s.row_trace(i);
                for j in 1..30 {
                    assert_eq!(t.contains(j), s.contains(i, j), "{s:?} row {i} col {j}");
                }
            }
        }
    }
}
