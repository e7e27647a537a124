//! Exact descriptions of single rows and columns.
//!
//! A [`ValueProfile`] describes a function `n -> Scalar` on `Z+` that is
//! explicit up to a bound and quasi-affine afterwards: for `n > bound` the
//! value is `slope_r * n + offset_r` with `r = n mod period`. Plain matrices
//! only produce constant tails; affine tails arise on product lines.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SymbolicMatrix;
use crate::scalar::Scalar;

/// `slope * n + offset`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Affine {
    pub slope: Scalar,
    pub offset: Scalar,
}

impl Affine {
    pub fn constant(c: Scalar) -> Self {
        Affine { slope: Scalar::zero(), offset: c }
    }

    pub fn zero() -> Self {
        Affine::default()
    }

    pub fn at(&self, n: usize) -> Scalar {
        if self.slope.is_zero() {
            return self.offset.clone();
        }
        &(&self.slope * &Scalar::from(n)) + &self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.slope.is_zero() && self.offset.is_zero()
    }

    /// The unique positive integer root, if there is one.
    pub fn root(&self) -> Option<usize> {
        if self.slope.is_zero() {
            return None;
        }
        let r = -(&self.offset / &self.slope);
        match r.to_i64() {
            Some(v) if v >= 1 => Some(v as usize),
            _ => None,
        }
    }

    /// Fit through `(n1, v1)` and `(n2, v2)`.
    pub fn through(n1: usize, v1: &Scalar, n2: usize, v2: &Scalar) -> Self {
        let slope = &(v2 - v1) / &Scalar::from(n2 as i64 - n1 as i64);
        let offset = v1 - &(&slope * &Scalar::from(n1));
        Affine { slope, offset }
    }
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            write!(f, "{}", self.offset)
        } else {
            write!(f, "{}*n+{}", self.slope, self.offset)
        }
    }
}

/// `a * i + b * k + c` over two indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Affine2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl Affine2 {
    pub fn constant(c: Scalar) -> Self {
        Affine2 { a: Scalar::zero(), b: Scalar::zero(), c }
    }

    pub fn at(&self, i: usize, k: usize) -> Scalar {
        let mut v = self.c.clone();
        if !self.a.is_zero() {
            v += &self.a * &Scalar::from(i);
        }
        if !self.b.is_zero() {
            v += &self.b * &Scalar::from(k);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// Swap the roles of the two indices.
    pub fn swapped(&self) -> Self {
        Affine2 { a: self.b.clone(), b: self.a.clone(), c: self.c.clone() }
    }

    /// Restrict to a fixed first index, leaving a function of the second.
    pub fn fix_first(&self, i: usize) -> Affine {
        Affine { slope: self.b.clone(), offset: &self.c + &(&self.a * &Scalar::from(i)) }
    }

    /// Restrict to a fixed second index, leaving a function of the first.
    pub fn fix_second(&self, k: usize) -> Affine {
        Affine { slope: self.a.clone(), offset: &self.c + &(&self.b * &Scalar::from(k)) }
    }
}

/// An arithmetic progression `{start + step*t : t >= 0}` with `step >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
}

impl Progression {
    pub fn nth(&self, t: usize) -> usize {
        self.start + self.step * t
    }

    pub fn take(&self, count: usize) -> impl Iterator<Item = usize> + '_ {
        (0..count).map(move |t| self.nth(t))
    }
}

fn divisors(p: usize) -> impl Iterator<Item = usize> {
    (1..=p).filter(move |d| p.is_multiple_of(*d))
}

/// Exact eventually quasi-affine description of one line.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ValueProfile {
    bound: usize,
    transient: Vec<Scalar>,
    period: usize,
    tail: Vec<Affine>,
}

impl fmt::Debug for ValueProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile[{:?} | p={} tail={:?}]", self.transient, self.period, self.tail)
    }
}

impl ValueProfile {
    /// Build and canonicalize. `transient[n-1]` is the value at `n <= transient.len()`;
    /// beyond that, the value at `n` is `tail[n % tail.len()].at(n)`.
    pub fn new(mut transient: Vec<Scalar>, tail: Vec<Affine>) -> Self {
        assert!(!tail.is_empty(), "period must be at least 1");
        if transient.is_empty() {
            let v = tail[1 % tail.len()].at(1);
            transient.push(v);
        }
        let mut p = ValueProfile { bound: transient.len(), transient, period: tail.len(), tail };
        p.canonicalize();
        p
    }

    /// Constant-tailed profile from explicit values, `values[n-1]` at `n`, with
    /// `tail_values[n % period]` beyond.
    pub fn from_periodic(values: Vec<Scalar>, tail_values: Vec<Scalar>) -> Self {
        Self::new(values, tail_values.into_iter().map(Affine::constant).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![Scalar::zero()], vec![Affine::zero()])
    }

    fn canonicalize(&mut self) {
        let p = self.period;
        if let Some(d) = divisors(p).find(|&d| (0..p).all(|r| self.tail[r] == self.tail[r % d])) {
            self.tail.truncate(d);
            self.period = d;
        }
        while self.bound > 1 {
            let n = self.bound;
            if self.transient[n - 1] == self.tail[n % self.period].at(n) {
                self.transient.pop();
                self.bound -= 1;
            } else {
                break;
            }
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn transient(&self) -> &[Scalar] {
        &self.transient
    }

    pub fn tail(&self) -> &[Affine] {
        &self.tail
    }

    pub fn value(&self, n: usize) -> Scalar {
        assert!(n >= 1, "indices are 1-based");
        if n <= self.bound {
            self.transient[n - 1].clone()
        } else {
            self.tail[n % self.period].at(n)
        }
    }

    /// Largest tail slope degree present: 0 for constant tails, 1 for affine.
    pub fn is_constant_tailed(&self) -> bool {
        self.tail.iter().all(|a| a.slope.is_zero())
    }

    pub fn has_tail(&self) -> bool {
        self.tail.iter().any(|a| !a.is_zero())
    }

    /// Exact support of the line.
    pub fn support(&self) -> SupportProfile {
        let p = self.period;
        let mut bound = self.bound;
        for (r, a) in self.tail.iter().enumerate() {
            if let Some(root) = a.root() {
                if root > self.bound && root % p == r {
                    bound = bound.max(root);
                }
            }
        }
        let transient = (1..=bound).filter(|&n| !self.value(n).is_zero()).collect();
        let residues = (0..p).filter(|&r| !self.tail[r].is_zero()).collect();
        SupportProfile::new(bound, transient, p, residues)
    }

    /// Length of the line: the last nonzero position, 0 for a zero line,
    /// `None` if the support is infinite.
    pub fn length(&self) -> Option<usize> {
        self.support().max_element().map(|m| m.unwrap_or(0))
    }
}

/// Exact eventually periodic subset of `Z+`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SupportProfile {
    bound: usize,
    transient: BTreeSet<usize>,
    period: usize,
    residues: BTreeSet<usize>,
}

impl fmt::Debug for SupportProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Support[{:?} <= {} | mod {} in {:?}]", self.transient, self.bound, self.period, self.residues)
    }
}

impl SupportProfile {
    /// Build and canonicalize: minimal period, then minimal bound (at least 1).
    pub fn new(bound: usize, transient: BTreeSet<usize>, period: usize, residues: BTreeSet<usize>) -> Self {
        assert!(period >= 1);
        let mut s = SupportProfile { bound: bound.max(1), transient, period, residues };
        s.transient.retain(|&n| n >= 1 && n <= s.bound);
        s.canonicalize();
        s
    }

    pub fn finite(elements: impl IntoIterator<Item = usize>) -> Self {
        let transient: BTreeSet<usize> = elements.into_iter().collect();
        let bound = transient.iter().copied().max().unwrap_or(1);
        Self::new(bound, transient, 1, BTreeSet::new())
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    /// `{from..}`
    pub fn ray(from: usize) -> Self {
        let bound = from.max(1);
        Self::new(bound, (from..=bound).collect(), 1, [0].into())
    }

    fn canonicalize(&mut self) {
        let p = self.period;
        if let Some(d) =
            divisors(p).find(|&d| (0..p).all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d))))
        {
            self.residues = self.residues.iter().map(|r| r % d).collect();
            self.period = d;
        }
        while self.bound > 1 {
            let n = self.bound;
            if self.transient.contains(&n) == self.residues.contains(&(n % self.period)) {
                self.transient.remove(&n);
                self.bound -= 1;
            } else {
                break;
            }
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn transient(&self) -> &BTreeSet<usize> {
        &self.transient
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn contains(&self, n: usize) -> bool {
        if n <= self.bound {
            self.transient.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.transient.is_empty()
    }

    /// `Some(max)` for finite supports (`None` inside when empty); `None` if infinite.
    pub fn max_element(&self) -> Option<Option<usize>> {
        if self.is_finite() {
            Some(self.transient.iter().next_back().copied())
        } else {
            None
        }
    }

    pub fn min_element(&self) -> Option<usize> {
        if let Some(&m) = self.transient.iter().next() {
            return Some(m);
        }
        (self.bound + 1..=self.bound + self.period).find(|&n| self.contains(n))
    }

    /// Smallest common element of two supports.
    pub fn first_common(&self, other: &SupportProfile) -> Option<usize> {
        let limit = self.bound.max(other.bound) + self.period.lcm(&other.period);
        (1..=limit).find(|&n| self.contains(n) && other.contains(n))
    }

    /// If the intersection is infinite, the progression of common elements
    /// beyond both bounds with the smallest start.
    pub fn tail_meet(&self, other: &SupportProfile) -> Option<Progression> {
        if self.is_finite() || other.is_finite() {
            return None;
        }
        let from = self.bound.max(other.bound);
        let step = self.period.lcm(&other.period);
        (from + 1..=from + step)
            .find(|&n| self.contains(n) && other.contains(n))
            .map(|start| Progression { start, step })
    }

    /// Last element of the finite part of the intersection, used as a summation bound.
    /// `None` when the intersection is infinite.
    pub fn meet_bound(&self, other: &SupportProfile) -> Option<usize> {
        if self.tail_meet(other).is_some() {
            return None;
        }
        let limit = self.bound.max(other.bound);
        Some((1..=limit).rev().find(|&n| self.contains(n) && other.contains(n)).unwrap_or(0))
    }

    pub fn elements_up_to(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=n).filter(move |&m| self.contains(m))
    }
}

/// Fit an eventually quasi-affine profile to `f`, assuming the quasi-affine
/// regime starts after `bound` with a period dividing `period`.
///
/// Two samples per residue class determine each tail; further samples are
/// checked and a mismatch is reported as [`Error::ProfileDegreeOverflow`].
pub fn fit_profile(bound: usize, period: usize, mut f: impl FnMut(usize) -> Scalar) -> Result<ValueProfile> {
    let period = period.max(1);
    let bound = bound.max(1);
    let transient: Vec<Scalar> = (1..=bound).map(&mut f).collect();
    let mut tail = vec![Affine::zero(); period];
    for n1 in bound + 1..=bound + period {
        let n2 = n1 + period;
        let (v1, v2) = (f(n1), f(n2));
        let a = Affine::through(n1, &v1, n2, &v2);
        for extra in [n1 + 2 * period, n1 + 3 * period, n1 + 5 * period] {
            if a.at(extra) != f(extra) {
                return Err(Error::ProfileDegreeOverflow(format!(
                    "line value at {extra} departs from the affine tail fitted at {n1},{n2}"
                )));
            }
        }
        tail[n1 % period] = a;
    }
    Ok(ValueProfile::new(transient, tail))
}

/// Exact profile of row `i` of a symbolic matrix, built from the traces of its primitives.
pub fn row_profile(m: &SymbolicMatrix, i: usize) -> ValueProfile {
    let mut bound = 1;
    let mut period = 1;
    let traces: Vec<_> = m.row_traces(i).collect();
    for (t, _) in &traces {
        let (b, p) = t.regime();
        bound = bound.max(b);
        period = period.lcm(&p);
    }
    let value = |j: usize| -> Scalar { traces.iter().filter(|(t, _)| t.contains(j)).map(|(_, v)| (*v).clone()).sum() };
    let transient = (1..=bound).map(value).collect();
    let tail = (0..period)
        .map(|r| {
            // the representative of residue r just past the bound
            let n = bound + 1 + (r + period - (bound + 1) % period) % period;
            Affine::constant(value(n))
        })
        .collect();
    ValueProfile::new(transient, tail)
}

/// Exact profile of column `j`.
pub fn col_profile(m: &SymbolicMatrix, j: usize) -> ValueProfile {
    row_profile(&m.transpose(), j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Primitive;

    fn mat(terms: impl IntoIterator<Item = Primitive>) -> SymbolicMatrix {
        SymbolicMatrix::new(terms).unwrap()
    }

    #[test]
    fn upper_ones_row_three() {
        let v = mat([Primitive::upper_cone(0, 1, 1)]);
        let p = row_profile(&v, 3);
        assert_eq!(p.bound(), 2);
        assert_eq!(p.period(), 1);
        assert_eq!(p.tail()[0], Affine::constant(Scalar::one()));
        let s = p.support();
        assert_eq!(s.bound(), 2);
        assert!(s.transient().is_empty());
        assert_eq!(s.residues(), &BTreeSet::from([0]));
    }

    #[test]
    fn bidiagonal_row_one_is_finite() {
        let u = mat([Primitive::diag(0, 1, 1), Primitive::diag(1, 1, -1)]);
        let p = row_profile(&u, 1);
        assert_eq!(p.support(), SupportProfile::finite([1, 2]));
        assert_eq!(p.value(1), Scalar::one());
        assert_eq!(p.value(2), Scalar::from_int(-1));
        assert_eq!(p.length(), Some(2));
    }

    #[test]
    fn tail_cancellation_is_resolved() {
        let m = mat([Primitive::upper_cone(0, 1, 1), Primitive::upper_cone(1, 1, -1)]);
        let p = row_profile(&m, 5);
        assert_eq!(p.support(), SupportProfile::finite([5]));
        for j in 1..=12 {
            assert_eq!(p.value(j), m.entry(5, j));
        }
    }

    #[test]
    fn progression_tail_period() {
        let m = mat([Primitive::row_prog(2, 3, 3, 1), Primitive::row_prog(2, 4, 6, 1)]);
        let p = row_profile(&m, 2);
        assert_eq!(p.period(), 6);
        for j in 1..40 {
            assert_eq!(p.value(j), m.entry(2, j), "j={j}");
        }
        let s = p.support();
        assert_eq!(s.period(), 6);
        assert_eq!(s.residues(), &BTreeSet::from([0, 3, 4]));
    }

    #[test]
    fn affine_root_extends_support_bound() {
        // value n - 7 on every n: zero exactly at 7
        let p = ValueProfile::new(
            vec![Scalar::from_int(-6)],
            vec![Affine { slope: Scalar::one(), offset: Scalar::from_int(-7) }],
        );
        let s = p.support();
        assert!(!s.contains(7));
        assert!(s.contains(8) && s.contains(6));
        assert!(!s.is_finite());
    }

    #[test]
    fn fit_recovers_affine_tails() {
        let p = fit_profile(3, 2, |n| if n % 2 == 0 { Scalar::from(n) } else { Scalar::from_int(4) }).unwrap();
        for n in 1..30 {
            let expect = if n % 2 == 0 { Scalar::from(n) } else { Scalar::from_int(4) };
            assert_eq!(p.value(n), expect);
        }
        assert!(!p.is_constant_tailed());
    }

    #[test]
    fn fit_rejects_quadratic_lines() {
        let err = fit_profile(2, 1, |n| Scalar::from(n * n)).unwrap_err();
        assert!(matches!(err, Error::ProfileDegreeOverflow(_)));
    }

    #[test]
    fn tail_meet_and_bounds() {
        let evens = SupportProfile::new(1, BTreeSet::new(), 2, [0].into());
        let odds = SupportProfile::new(1, [1].into(), 2, [1].into());
        assert_eq!(evens.tail_meet(&odds), None);
        assert_eq!(evens.meet_bound(&odds), Some(0));
        let threes = SupportProfile::new(1, BTreeSet::new(), 3, [0].into());
        assert_eq!(evens.tail_meet(&threes), Some(Progression { start: 6, step: 6 }));
        let ray = SupportProfile::ray(1);
        assert_eq!(ray.bound(), 1);
        assert_eq!(ray.tail_meet(&ray), Some(Progression { start: 2, step: 1 }));
    }
}
