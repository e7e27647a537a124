//! Condition (D), the link classifier for triples and the non-membership
//! witness constructions.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::layout::{LineFamilySet, Lines};
use crate::matrix::{Primitive, SymbolicMatrix};
use crate::product::{decide_defined, line_dot, product, Decision};
use crate::profile::{Progression, SupportProfile};
use crate::scalar::Scalar;

/// An infinite set of index pairs `(j, k)` on which `b_jk` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberFamily {
    /// Fixed `j`, `k` running through a progression.
    Row { j: usize, k: Progression },
    /// Fixed `k`, `j` running through a progression.
    Column { k: usize, j: Progression },
    /// `k = j + offset`, `j` running through a progression.
    Diagonal { offset: i64, j: Progression },
}

impl FiberFamily {
    pub fn pairs(&self, count: usize) -> Vec<(usize, usize)> {
        match self {
            FiberFamily::Row { j, k } => k.take(count).map(|k| (*j, k)).collect(),
            FiberFamily::Column { k, j } => j.take(count).map(|j| (j, *k)).collect(),
            FiberFamily::Diagonal { offset, j } => j.take(count).map(|j| (j, (j as i64 + offset) as usize)).collect(),
        }
    }

    fn transposed(self) -> Self {
        match self {
            FiberFamily::Row { j, k } => FiberFamily::Column { k: j, j: k },
            FiberFamily::Column { k, j } => FiberFamily::Row { j: k, k: j },
            FiberFamily::Diagonal { offset, j } => FiberFamily::Diagonal {
                offset: -offset,
                j: Progression { start: (j.start as i64 + offset) as usize, step: j.step },
            },
        }
    }
}

/// Row `i` of the left factor and column `l` of the right factor together with
/// infinitely many `(j, k)` such that `a_ij b_jk c_kl != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondDWitness {
    pub i: usize,
    pub l: usize,
    pub family: FiberFamily,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondDCertificate {
    pub holds: bool,
    pub witness: Option<CondDWitness>,
}

/// Normal forms of a triple plus the middle factor's line families.
struct Triple {
    a: Lines,
    b: Lines,
    c: Lines,
    b_rows: LineFamilySet,
    b_cols: LineFamilySet,
}

impl Triple {
    fn new(a: Lines, b: Lines, c: Lines) -> Self {
        let b_rows = b.row_family();
        let b_cols = b.col_family();
        Triple { a, b, c, b_rows, b_cols }
    }

    fn transposed(&self) -> Self {
        Triple::new(self.c.transposed(), self.b.transposed(), self.a.transposed())
    }

    /// Some `j` in `js` whose row of `b` meets `ks` infinitely, with the smallest such `j`.
    fn row_fiber(&self, js: &SupportProfile, ks: &SupportProfile) -> Option<FiberFamily> {
        let mut best: Option<(usize, Progression)> = None;
        for (&j, p) in &self.b_rows.exceptional {
            if js.contains(j) && best.as_ref().is_none_or(|(b, _)| j < *b) {
                if let Some(k) = p.support().tail_meet(ks) {
                    best = Some((j, k));
                }
            }
        }
        for t in &self.b_rows.generic {
            if t.instantiate(t.start).support().tail_meet(ks).is_none() {
                continue;
            }
            let limit = js.bound().max(t.start) + js.period().lcm(&t.step);
            let found = (t.start..=limit).step_by(t.step).find(|&j| js.contains(j));
            if let Some(j) = found {
                if best.as_ref().is_none_or(|(b, _)| j < *b) {
                    let k = t.instantiate(j).support().tail_meet(ks).expect("family members share their tail");
                    best = Some((j, k));
                }
            }
        }
        best.map(|(j, k)| FiberFamily::Row { j, k })
    }

    /// A band diagonal of `b` carrying infinitely many nonzero `(j, k)` with `j` in `js`, `k` in `ks`.
    fn diagonal_fiber(&self, js: &SupportProfile, ks: &SupportProfile) -> Option<FiberFamily> {
        if js.is_finite() || ks.is_finite() {
            return None;
        }
        let layout = self.b.layout();
        let w = layout.width() as i64;
        let step = js.period().lcm(&ks.period()).lcm(&layout.modulus());
        let from = js.bound().max(ks.bound()).max(layout.threshold()) + layout.width() + 1;
        for offset in -w..=w {
            let hit = (from..from + step).find(|&j| {
                let k = (j as i64 + offset) as usize;
                js.contains(j)
                    && ks.contains(k)
                    && !self.b.entry(j, k).is_zero()
                    && !self.b.entry(j + step, k + step).is_zero()
            });
            if let Some(start) = hit {
                return Some(FiberFamily::Diagonal { offset, j: Progression { start, step } });
            }
        }
        None
    }

    /// Exact test for an infinite fiber `{(j, k) in js x ks : b_jk != 0}`.
    ///
    /// An infinite set of pairs either repeats some `j`, repeats some `k`, or
    /// has both coordinates unbounded. In the last case all but finitely many
    /// pairs lie beyond the exceptional lines of `b`; off the band those pairs
    /// also give a repeated `j` (take any one of them and run `k` along the
    /// cone), so only the band diagonals remain.
    fn fiber(&self, js: &SupportProfile, ks: &SupportProfile, transposed: &Triple) -> Option<FiberFamily> {
        if js.is_empty() || ks.is_empty() || (js.is_finite() && ks.is_finite()) {
            return None;
        }
        self.row_fiber(js, ks)
            .or_else(|| transposed.row_fiber(ks, js).map(FiberFamily::transposed))
            .or_else(|| self.diagonal_fiber(js, ks))
    }

    fn a_col_nonzero(&self, j: usize) -> bool {
        !self.a.col_profile(j).support().is_empty()
    }

    /// Some `j` with a nonzero column of `a` whose row of `b` meets a column of `c` infinitely.
    fn fails_on_fixed_row(&self) -> bool {
        let ks: Vec<SupportProfile> = self
            .c
            .col_family()
            .representatives()
            .into_iter()
            .map(|(_, p)| p.support())
            .filter(|s| !s.is_finite())
            .collect();
        if ks.is_empty() {
            return false;
        }
        let meets = |s: &SupportProfile| ks.iter().any(|k| s.tail_meet(k).is_some());
        if self.b_rows.exceptional.iter().any(|(&j, p)| meets(&p.support()) && self.a_col_nonzero(j)) {
            return true;
        }
        let a_cols = self.a.col_family();
        self.b_rows.generic.iter().any(|t| {
            if !meets(&t.instantiate(t.start).support()) {
                return false;
            }
            let limit = a_cols.regime_start().max(t.start) + 2 * t.step.lcm(&a_cols.modulus());
            (t.start..=limit).step_by(t.step).any(|j| self.a_col_nonzero(j))
        })
    }

    fn fails_on_diagonal(&self) -> bool {
        let infinite = |fam: LineFamilySet| -> Vec<SupportProfile> {
            fam.representatives().into_iter().map(|(_, p)| p.support()).filter(|s| !s.is_finite()).collect()
        };
        let js = infinite(self.a.row_family());
        let ks = infinite(self.c.col_family());
        js.iter().any(|j| ks.iter().any(|k| self.diagonal_fiber(j, k).is_some()))
    }

    /// Scan bound for the lexicographically smallest failing `(i, l)`.
    ///
    /// Whether `(i, l)` fails is eventually periodic in each index; this
    /// covers every threshold and several periods of all involved families.
    fn scan_bound(&self) -> usize {
        let fams = [self.a.row_family(), self.a.col_family(), self.c.row_family(), self.c.col_family()];
        let start: usize = fams.iter().map(LineFamilySet::regime_start).sum::<usize>()
            + self.b_rows.regime_start()
            + self.b_cols.regime_start();
        let width = self.a.layout().width() + self.b.layout().width() + self.c.layout().width();
        let period = fams.iter().chain([&self.b_rows, &self.b_cols]).fold(1usize, |acc, f| acc.lcm(&f.modulus()));
        start + 2 * width + 4 * period + 4
    }
}

fn condition_d_lines(a: Lines, b: Lines, c: Lines) -> CondDCertificate {
    let triple = Triple::new(a, b, c);
    let transposed = triple.transposed();
    let fails = triple.fails_on_fixed_row() || transposed.fails_on_fixed_row() || triple.fails_on_diagonal();
    if !fails {
        return CondDCertificate { holds: true, witness: None };
    }
    let mut bound = triple.scan_bound();
    let mut rows: HashMap<usize, SupportProfile> = HashMap::new();
    let mut cols: HashMap<usize, SupportProfile> = HashMap::new();
    for _ in 0..4 {
        for i in 1..=bound {
            let js = rows.entry(i).or_insert_with(|| triple.a.row_profile(i).support()).clone();
            if js.is_empty() {
                continue;
            }
            for l in 1..=bound {
                let ks = cols.entry(l).or_insert_with(|| triple.c.col_profile(l).support());
                if let Some(family) = triple.fiber(&js, ks, &transposed) {
                    return CondDCertificate { holds: false, witness: Some(CondDWitness { i, l, family }) };
                }
            }
        }
        bound *= 2;
    }
    CondDCertificate { holds: false, witness: None }
}

/// Decide whether `{a_ij b_jk c_kl : j, k}` has finite support for every `(i, l)`.
pub fn condition_d(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix) -> CondDCertificate {
    condition_d_lines(Lines::of_matrix(a), Lines::of_matrix(b), Lines::of_matrix(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "NOT_G2")]
    NotG2,
    #[serde(rename = "G2_NOT_G4")]
    G2NotG4,
    #[serde(rename = "G4_NOT_G5")]
    G4NotG5,
    #[serde(rename = "G5")]
    G5,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotG2 => "NOT_G2",
            Verdict::G2NotG4 => "G2_NOT_G4",
            Verdict::G4NotG5 => "G4_NOT_G5",
            Verdict::G5 => "G5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `product` is `"AB"` or `"BC"`.
    Pairwise {
        product: &'static str,
        decision: Decision,
    },
    /// `product` is `"A(BC)"` or `"(AB)C"`; the sum for entry `(i, l)` has infinitely many
    /// nonzero terms along `family`.
    Depth2 {
        product: &'static str,
        i: usize,
        l: usize,
        family: Progression,
    },
    /// `lhs` is the `(i, l)` entry of `A(BC)`, `rhs` that of `(AB)C`.
    Inequality {
        i: usize,
        l: usize,
        lhs: Scalar,
        rhs: Scalar,
    },
    CondD {
        certificate: CondDCertificate,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleClass {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// The conditions of each layer, each computed on its own.
#[derive(Clone, Debug)]
pub struct Layers {
    pub ab: Decision,
    pub bc: Decision,
    /// Depth-two decisions, present when both pairwise products are defined.
    pub a_bc: Option<Decision>,
    pub ab_c: Option<Decision>,
    pub cond_d: CondDCertificate,
}

impl Layers {
    pub fn g2(&self) -> bool {
        self.ab.defined && self.bc.defined
    }

    pub fn g4(&self) -> bool {
        self.g2() && self.a_bc.as_ref().is_some_and(|d| d.defined) && self.ab_c.as_ref().is_some_and(|d| d.defined)
    }

    pub fn g5(&self) -> bool {
        self.g2() && self.cond_d.holds
    }
}

struct Factors {
    a: Lines,
    b: Lines,
    c: Lines,
}

fn layers_of(
    m: &Factors,
    am: &SymbolicMatrix,
    bm: &SymbolicMatrix,
    cm: &SymbolicMatrix,
) -> Result<(Layers, Option<(Lines, Lines)>)> {
    let ab = decide_defined(&m.a, &m.b);
    let bc = decide_defined(&m.b, &m.c);
    let cond_d = condition_d_lines(m.a.clone(), m.b.clone(), m.c.clone());
    let mut layers = Layers { ab, bc, a_bc: None, ab_c: None, cond_d };
    if !layers.g2() {
        return Ok((layers, None));
    }
    let ab_lines = product(am, bm)?.lines()?.clone();
    let bc_lines = product(bm, cm)?.lines()?.clone();
    layers.a_bc = Some(decide_defined(&m.a, &bc_lines));
    layers.ab_c = Some(decide_defined(&ab_lines, &m.c));
    Ok((layers, Some((ab_lines, bc_lines))))
}

/// Compute all layer conditions for a triple.
pub fn layers(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix) -> Result<Layers> {
    let f = Factors { a: Lines::of_matrix(a), b: Lines::of_matrix(b), c: Lines::of_matrix(c) };
    Ok(layers_of(&f, a, b, c)?.0)
}

/// Largest window searched for an inequality witness.
pub const SEARCH_CAP: usize = 256;

/// Place `B` in the link hierarchy between `A` and `C`.
///
/// Membership in the top layer is decided by pairwise definedness plus
/// condition (D), never by comparing the two triple products.
pub fn classify_triple(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix) -> Result<TripleClass> {
    let f = Factors { a: Lines::of_matrix(a), b: Lines::of_matrix(b), c: Lines::of_matrix(c) };
    let (layers, products) = layers_of(&f, a, b, c)?;
    if !layers.ab.defined {
        return Ok(TripleClass {
            verdict: Verdict::NotG2,
            evidence: Evidence::Pairwise { product: "AB", decision: layers.ab },
        });
    }
    if !layers.bc.defined {
        return Ok(TripleClass {
            verdict: Verdict::NotG2,
            evidence: Evidence::Pairwise { product: "BC", decision: layers.bc },
        });
    }
    let (ab_lines, bc_lines) = products.expect("computed when both pairwise products are defined");
    if layers.cond_d.holds {
        if !layers.g4() {
            return Err(Error::Invariant("condition (D) holds but a depth-two product is undefined".into()));
        }
        return Ok(TripleClass { verdict: Verdict::G5, evidence: Evidence::CondD { certificate: layers.cond_d } });
    }
    for (name, decision) in [("A(BC)", &layers.a_bc), ("(AB)C", &layers.ab_c)] {
        let decision = decision.as_ref().expect("computed when both pairwise products are defined");
        if let Some(w) = &decision.witness {
            return Ok(TripleClass {
                verdict: Verdict::G2NotG4,
                evidence: Evidence::Depth2 { product: name, i: w.i, l: w.k, family: w.family },
            });
        }
    }
    let mut n = 8;
    let mut rows = HashMap::new();
    let mut cols = HashMap::new();
    while n <= SEARCH_CAP {
        for i in 1..=n {
            for l in 1..=n {
                let (ar, abr) = rows.entry(i).or_insert_with(|| (f.a.row_profile(i), ab_lines.row_profile(i)));
                let (bcc, cc) = cols.entry(l).or_insert_with(|| (bc_lines.col_profile(l), f.c.col_profile(l)));
                let lhs = line_dot(ar, bcc).ok_or_else(|| Error::Invariant(format!("A(BC) undefined at ({i},{l})")))?;
                let rhs = line_dot(abr, cc).ok_or_else(|| Error::Invariant(format!("(AB)C undefined at ({i},{l})")))?;
                if lhs != rhs {
                    return Ok(TripleClass {
                        verdict: Verdict::G4NotG5,
                        evidence: Evidence::Inequality { i, l, lhs, rhs },
                    });
                }
            }
        }
        n *= 2;
    }
    Err(Error::WitnessSearchExhausted(SEARCH_CAP))
}

fn ones_first_row() -> SymbolicMatrix {
    SymbolicMatrix::new([Primitive::row_prog(1, 1, 1, 1)]).expect("valid primitive")
}

fn ones_first_col() -> SymbolicMatrix {
    SymbolicMatrix::new([Primitive::col_prog(1, 1, 1, 1)]).expect("valid primitive")
}

fn expect_class(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix, want: Verdict) -> Result<()> {
    let got = classify_triple(a, b, c)?.verdict;
    if got == want {
        Ok(())
    } else {
        Err(Error::Invariant(format!("constructed witness classifies {} instead of {}", got.as_str(), want.as_str())))
    }
}

/// Factors `(A, C)` with `B` outside the links between them, or `None` when
/// `B` is row and column finite (and so a link between any two matrices it can multiply).
pub fn witness_not_link(b: &SymbolicMatrix) -> Result<Option<(SymbolicMatrix, SymbolicMatrix)>> {
    let flags = Lines::of_matrix(b).flags();
    let pair = if !flags.row_finite {
        (SymbolicMatrix::identity(), ones_first_col())
    } else if !flags.col_finite {
        (ones_first_row(), SymbolicMatrix::identity())
    } else {
        return Ok(None);
    };
    expect_class(&pair.0, b, &pair.1, Verdict::NotG2)?;
    Ok(Some(pair))
}

/// Factors `(A, C)` with `B` outside the strong links between them, or `None`
/// when `B` has finitely many nonzero entries.
///
/// Matrices that are not row and column finite get the [`witness_not_link`]
/// pair. Otherwise `B` has a nonzero band diagonal beyond its exceptional
/// lines; `C` picks one nonzero entry from each of a sparse progression of
/// rows, spaced past the band so that no two picks share a row of `B`. Then
/// `BC` has infinitely many nonzero entries in column 1 and the ones row `A`
/// cannot multiply it.
pub fn witness_not_strong(b: &SymbolicMatrix) -> Result<Option<(SymbolicMatrix, SymbolicMatrix)>> {
    let lines = Lines::of_matrix(b);
    let flags = lines.flags();
    if flags.fsm {
        return Ok(None);
    }
    if !flags.rcfm {
        let pair = witness_not_link(b)?.ok_or_else(|| Error::Invariant("not row and column finite".into()))?;
        return Ok(Some(pair));
    }
    let layout = lines.layout();
    let (t, w, q) = (layout.threshold(), layout.width(), layout.modulus());
    let step = (2 * w + 1).div_ceil(q) * q;
    let from = t + w + 1;
    let pick = (from..from + q).find_map(|j| {
        (-(w as i64)..=w as i64).find_map(|d| {
            let k = (j as i64 + d) as usize;
            let on_family = (0..3).all(|m| !lines.entry(j + m * step, k + m * step).is_zero());
            on_family.then_some(k)
        })
    });
    let k0 = pick.ok_or_else(|| {
        Error::WitnessInexpressible("no nonzero band diagonal in a matrix with infinitely many nonzero entries".into())
    })?;
    let c = SymbolicMatrix::new([Primitive::col_prog(1, k0, step, 1)])?;
    let a = ones_first_row();
    expect_class(&a, b, &c, Verdict::G2NotG4)?;
    Ok(Some((a, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(terms: impl IntoIterator<Item = Primitive>) -> SymbolicMatrix {
        SymbolicMatrix::new(terms).unwrap()
    }

    fn brute_d(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix, n: usize, reach: usize) -> Vec<usize> {
        let mut counts = Vec::new();
        for i in 1..=n {
            for l in 1..=n {
                let mut count = 0;
                for j in 1..=reach {
                    if a.entry(i, j).is_zero() {
                        continue;
                    }
                    for k in 1..=reach {
                        if !b.entry(j, k).is_zero() && !c.entry(k, l).is_zero() {
                            count += 1;
                        }
                    }
                }
                counts.push(count);
            }
        }
        counts
    }

    #[test]
    fn identity_triple_satisfies_d() {
        let i = SymbolicMatrix::identity();
        assert!(condition_d(&i, &i, &i).holds);
        let c = classify_triple(&i, &i, &i).unwrap();
        assert_eq!(c.verdict, Verdict::G5);
    }

    #[test]
    fn ones_row_identity_ones_col_fails_on_diagonal() {
        let a = ones_first_row();
        let c = ones_first_col();
        let cert = condition_d(&a, &SymbolicMatrix::identity(), &c);
        assert!(!cert.holds);
        let w = cert.witness.unwrap();
        assert_eq!((w.i, w.l), (1, 1));
        assert!(matches!(w.family, FiberFamily::Diagonal { offset: 0, .. }));
        let counts = brute_d(&a, &SymbolicMatrix::identity(), &c, 1, 20);
        assert_eq!(counts, vec![20]);
    }

    #[test]
    fn fixed_row_fiber_found_through_column_of_a() {
        // a has a single nonzero column 2; row 2 of b is all ones; c is the identity.
        let a = mat([Primitive::cell(3, 2, 1)]);
        let b = mat([Primitive::row_prog(2, 1, 1, 1)]);
        let c = ones_first_col();
        let cert = condition_d(&a, &b, &c);
        let w = cert.witness.unwrap();
        assert_eq!((w.i, w.l), (3, 1));
        assert_eq!(w.family, FiberFamily::Row { j: 2, k: Progression { start: 2, step: 1 } });
        let c = SymbolicMatrix::identity();
        assert!(condition_d(&a, &b, &c).holds);
    }

    #[test]
    fn not_strong_witness_for_identity() {
        let (a, c) = witness_not_strong(&SymbolicMatrix::identity()).unwrap().unwrap();
        assert_eq!(a, ones_first_row());
        assert_eq!(c, ones_first_col());
        assert!(witness_not_strong(&SymbolicMatrix::unit(1, 1)).unwrap().is_none());
    }
}
