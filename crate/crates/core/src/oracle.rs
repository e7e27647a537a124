//! Brute-force truncation windows, differential checks against the decision
//! procedures, and seeded random instances.
//!
//! Values here come from primitive entries only. Profiles are consulted for
//! summation bounds, and every bound is double-checked by summing further.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assoc::{classify_triple, condition_d, Evidence, Verdict};
use crate::error::{Error, Result};
use crate::layout::{classify_matrix, Lines, MatrixFlags};
use crate::matrix::{Primitive, Shape, SymbolicMatrix};
use crate::product::{product, Decision, ProductExpr};
use crate::profile::Progression;
use crate::scalar::Scalar;

/// An `n x n` block of exact values, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub n: usize,
    pub grid: Vec<Vec<Scalar>>,
    /// False when summing past the certified bound changed some entry.
    pub stable: bool,
}

impl Window {
    pub fn at(&self, i: usize, k: usize) -> &Scalar {
        &self.grid[i - 1][k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.grid.iter().flatten().all(Scalar::is_zero)
    }

    fn build(n: usize, mut f: impl FnMut(usize, usize) -> (Scalar, bool)) -> Self {
        let mut stable = true;
        let grid = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|k| {
                        let (v, ok) = f(i, k);
                        stable &= ok;
                        v
                    })
                    .collect()
            })
            .collect();
        Window { n, grid, stable }
    }
}

/// `sum_{j <= upto} a_ij * b_jk` straight from the primitives.
pub fn brute_sum(a: &SymbolicMatrix, b: &SymbolicMatrix, i: usize, k: usize, upto: usize) -> Scalar {
    (1..=upto)
        .filter_map(|j| {
            let x = a.entry(i, j);
            if x.is_zero() {
                return None;
            }
            let y = b.entry(j, k);
            (!y.is_zero()).then(|| &x * &y)
        })
        .sum()
}

/// Number of `j <= upto` with `a_ij * b_jk != 0`.
pub fn nonzero_terms(a: &SymbolicMatrix, b: &SymbolicMatrix, i: usize, k: usize, upto: usize) -> usize {
    (1..=upto).filter(|&j| !a.entry(i, j).is_zero() && !b.entry(j, k).is_zero()).count()
}

pub fn window_matrix(m: &SymbolicMatrix, n: usize) -> Window {
    Window::build(n, |i, k| (m.entry(i, k), true))
}

/// Window of a product, each entry summed to its certified bound and checked against twice that reach.
pub fn window_product(p: &ProductExpr, n: usize) -> Window {
    Window::build(n, |i, k| {
        let bound = p.summation_bound(i, k);
        let v = brute_sum(p.left(), p.right(), i, k, bound);
        let further = brute_sum(p.left(), p.right(), i, k, 2 * bound.max(n));
        let ok = v == further;
        (v, ok)
    })
}

/// Both parenthesizations of a triple product, evaluated by brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleWindow {
    /// `A(BC)`
    pub left: Window,
    /// `(AB)C`
    pub right: Window,
}

/// Brute-force depth-two evaluator with memoised inner sums.
struct Depth2<'a> {
    a: &'a SymbolicMatrix,
    b: &'a SymbolicMatrix,
    c: &'a SymbolicMatrix,
    ab: ProductExpr,
    bc: ProductExpr,
    bc_memo: HashMap<(usize, usize), Scalar>,
    ab_memo: HashMap<(usize, usize), Scalar>,
}

impl<'a> Depth2<'a> {
    fn new(a: &'a SymbolicMatrix, b: &'a SymbolicMatrix, c: &'a SymbolicMatrix) -> Result<Self> {
        Ok(Depth2 { a, b, c, ab: product(a, b)?, bc: product(b, c)?, bc_memo: HashMap::new(), ab_memo: HashMap::new() })
    }

    fn bc_entry(&mut self, j: usize, l: usize) -> Scalar {
        let (b, c, bc) = (self.b, self.c, &self.bc);
        self.bc_memo.entry((j, l)).or_insert_with(|| brute_sum(b, c, j, l, bc.summation_bound(j, l))).clone()
    }

    fn ab_entry(&mut self, i: usize, k: usize) -> Scalar {
        let (a, b, ab) = (self.a, self.b, &self.ab);
        self.ab_memo.entry((i, k)).or_insert_with(|| brute_sum(a, b, i, k, ab.summation_bound(i, k))).clone()
    }

    /// `sum_{j <= upto} a_ij (BC)_jl`
    fn lhs_to(&mut self, i: usize, l: usize, upto: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for j in 1..=upto {
            let x = self.a.entry(i, j);
            if !x.is_zero() {
                acc += &x * &self.bc_entry(j, l);
            }
        }
        acc
    }

    /// `sum_{k <= upto} (AB)_ik c_kl`
    fn rhs_to(&mut self, i: usize, l: usize, upto: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 1..=upto {
            let y = self.c.entry(k, l);
            if !y.is_zero() {
                acc += &self.ab_entry(i, k) * &y;
            }
        }
        acc
    }

    fn lhs_terms(&mut self, i: usize, l: usize, upto: usize) -> usize {
        (1..=upto).filter(|&j| !self.a.entry(i, j).is_zero() && !self.bc_entry(j, l).is_zero()).count()
    }

    fn rhs_terms(&mut self, i: usize, l: usize, upto: usize) -> usize {
        (1..=upto).filter(|&k| !self.c.entry(k, l).is_zero() && !self.ab_entry(i, k).is_zero()).count()
    }
}

/// Window of both triple products, summed to `reach` and checked at twice that.
/// Needs every pairwise and depth-two sum over `j, k <= 2 * reach` to be finite.
fn triple_window(d: &mut Depth2, n: usize, reach: usize) -> TripleWindow {
    let left = Window::build(n, |i, l| {
        let v = d.lhs_to(i, l, reach);
        let ok = v == d.lhs_to(i, l, 2 * reach);
        (v, ok)
    });
    let right = Window::build(n, |i, l| {
        let v = d.rhs_to(i, l, reach);
        let ok = v == d.rhs_to(i, l, 2 * reach);
        (v, ok)
    });
    TripleWindow { left, right }
}

/// Both triple products on `n x n`. Fails with [`Error::UndefinedProduct`] when `AB` or `BC` is undefined.
pub fn window_triple(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix, n: usize) -> Result<TripleWindow> {
    let mut d = Depth2::new(a, b, c)?;
    Ok(triple_window(&mut d, n, 2 * n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub verdict: Verdict,
    pub cond_d: bool,
    pub n: usize,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

impl CrossCheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn line(checks: &mut Vec<CheckLine>, name: &str, pass: bool, detail: String) {
    checks.push(CheckLine { name: name.to_string(), pass, detail });
}

/// Reach that covers the first eight members of `family` and at least `n`.
fn reach(family: &Progression, n: usize) -> usize {
    family.nth(7).max(n)
}

fn check_pairwise(
    checks: &mut Vec<CheckLine>,
    name: &str,
    x: &SymbolicMatrix,
    y: &SymbolicMatrix,
    decision: &Decision,
    n: usize,
) -> Result<()> {
    match &decision.witness {
        None => {
            let w = window_product(&product(x, y)?, n);
            line(checks, &format!("{name} stabilizes"), w.stable, format!("{n}x{n} window"));
        }
        Some(w) => {
            let members: Vec<usize> = w.family.take(8).collect();
            let all = members.iter().all(|&j| !x.entry(w.i, j).is_zero() && !y.entry(j, w.k).is_zero());
            line(
                checks,
                &format!("{name} witness terms nonzero"),
                all,
                format!("({},{}) along {:?}", w.i, w.k, members),
            );
            let r = reach(&w.family, n);
            let (c1, c2) = (nonzero_terms(x, y, w.i, w.k, r), nonzero_terms(x, y, w.i, w.k, 2 * r));
            line(checks, &format!("{name} terms grow"), c2 > c1, format!("{c1} terms up to {r}, {c2} up to {}", 2 * r));
        }
    }
    Ok(())
}

/// Number of `(j, k)` with `j, k <= upto` and `a_ij b_jk c_kl != 0`.
pub fn triple_terms(
    a: &SymbolicMatrix,
    b: &SymbolicMatrix,
    c: &SymbolicMatrix,
    i: usize,
    l: usize,
    upto: usize,
) -> usize {
    let ks: Vec<usize> = (1..=upto).filter(|&k| !c.entry(k, l).is_zero()).collect();
    (1..=upto)
        .filter(|&j| !a.entry(i, j).is_zero())
        .map(|j| ks.iter().filter(|&&k| !b.entry(j, k).is_zero()).count())
        .sum()
}

/// Compare the classifier and condition (D) with brute-force evidence on windows of size `n`.
pub fn cross_check(a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix, n: usize) -> Result<CrossCheckReport> {
    let class = classify_triple(a, b, c)?;
    let cert = condition_d(a, b, c);
    let mut checks = Vec::new();
    let ab = crate::product::is_defined(a, b);
    let bc = crate::product::is_defined(b, c);
    check_pairwise(&mut checks, "AB", a, b, &ab, n)?;
    check_pairwise(&mut checks, "BC", b, c, &bc, n)?;

    match &cert.witness {
        None if cert.holds => {
            let small = n.min(4);
            let mut grows = Vec::new();
            for i in 1..=small {
                for l in 1..=small {
                    let (c1, c2) = (triple_terms(a, b, c, i, l, n), triple_terms(a, b, c, i, l, 2 * n));
                    if c1 != c2 {
                        grows.push((i, l, c1, c2));
                    }
                }
            }
            line(&mut checks, "condition (D) support bounded", grows.is_empty(), format!("growing at {grows:?}"));
        }
        None => line(&mut checks, "condition (D) witness present", false, "negative verdict without witness".into()),
        Some(w) => {
            let pairs = w.family.pairs(8);
            let all = pairs.iter().all(|&(j, k)| !(&(&a.entry(w.i, j) * &b.entry(j, k)) * &c.entry(k, w.l)).is_zero());
            line(&mut checks, "condition (D) witness terms nonzero", all, format!("({},{}) along {pairs:?}", w.i, w.l));
            let r = pairs.iter().map(|&(j, k)| j.max(k)).max().unwrap_or(0).max(n);
            let (c1, c2) = (triple_terms(a, b, c, w.i, w.l, r), triple_terms(a, b, c, w.i, w.l, 2 * r));
            line(
                &mut checks,
                "condition (D) witness terms grow",
                c2 > c1,
                format!("{c1} up to {r}, {c2} up to {}", 2 * r),
            );
        }
    }

    let g5_agrees = (ab.defined && bc.defined && cert.holds) == (class.verdict == Verdict::G5);
    line(&mut checks, "G5 iff pairwise defined and (D)", g5_agrees, class.verdict.as_str().into());

    match &class.evidence {
        Evidence::CondD { .. } => {
            let mut d = Depth2::new(a, b, c)?;
            let tw = triple_window(&mut d, n, 2 * n);
            line(&mut checks, "triple windows stable", tw.left.stable && tw.right.stable, String::new());
            line(&mut checks, "A(BC) = (AB)C on window", tw.left == tw.right, format!("{n}x{n}"));
        }
        Evidence::Inequality { i, l, lhs, rhs } => {
            let mut d = Depth2::new(a, b, c)?;
            let (i, l) = (*i, *l);
            let lb = Lines::of_matrix(a).row_profile(i).support();
            let bcl = d.bc.col_profile(l)?.support();
            let outer = lb.meet_bound(&bcl).ok_or_else(|| Error::Invariant("A(BC) undefined at witness".into()))?;
            let abr = d.ab.row_profile(i)?.support();
            let cl = Lines::of_matrix(c).col_profile(l).support();
            let outer2 = abr.meet_bound(&cl).ok_or_else(|| Error::Invariant("(AB)C undefined at witness".into()))?;
            let bl = d.lhs_to(i, l, outer.max(n));
            let br = d.rhs_to(i, l, outer2.max(n));
            let stable = bl == d.lhs_to(i, l, 2 * outer.max(n)) && br == d.rhs_to(i, l, 2 * outer2.max(n));
            line(
                &mut checks,
                "inequality witness confirmed",
                stable && &bl == lhs && &br == rhs && bl != br,
                format!("({i},{l}): brute {bl} vs {br}, reported {lhs} vs {rhs}"),
            );
        }
        Evidence::Depth2 { product: which, i, l, family } => {
            let mut d = Depth2::new(a, b, c)?;
            let (i, l) = (*i, *l);
            let members: Vec<usize> = family.take(8).collect();
            let r = reach(family, n);
            let (all, c1, c2) = if *which == "A(BC)" {
                let all = members.iter().all(|&j| !d.a.entry(i, j).is_zero() && !d.bc_entry(j, l).is_zero());
                (all, d.lhs_terms(i, l, r), d.lhs_terms(i, l, 2 * r))
            } else {
                let all = members.iter().all(|&k| !d.ab_entry(i, k).is_zero() && !d.c.entry(k, l).is_zero());
                (all, d.rhs_terms(i, l, r), d.rhs_terms(i, l, 2 * r))
            };
            line(&mut checks, &format!("{which} witness terms nonzero"), all, format!("({i},{l}) along {members:?}"));
            line(&mut checks, &format!("{which} terms grow"), c2 > c1, format!("{c1} up to {r}, {c2} up to {}", 2 * r));
        }
        Evidence::Pairwise { .. } => {}
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(CrossCheckReport { verdict: class.verdict, cond_d: cert.holds, n, checks, pass })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ShapeKind {
    Cell,
    RowProg,
    ColProg,
    Diag,
    UpperCone,
    LowerCone,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 6] = [
        ShapeKind::Cell,
        ShapeKind::RowProg,
        ShapeKind::ColProg,
        ShapeKind::Diag,
        ShapeKind::UpperCone,
        ShapeKind::LowerCone,
    ];
}

/// Flags a generated matrix must have; `None` leaves a flag free.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlagRequirements {
    pub row_finite: Option<bool>,
    pub col_finite: Option<bool>,
    pub rcfm: Option<bool>,
    pub fsm: Option<bool>,
}

impl FlagRequirements {
    pub fn accepts(&self, f: &MatrixFlags) -> bool {
        let ok = |want: Option<bool>, got: bool| want.is_none_or(|w| w == got);
        ok(self.row_finite, f.row_finite)
            && ok(self.col_finite, f.col_finite)
            && ok(self.rcfm, f.rcfm)
            && ok(self.fsm, f.fsm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub shapes: Vec<ShapeKind>,
    /// Diagonal and cone offsets are drawn from `-max_offset..=max_offset`.
    pub max_offset: i64,
    /// Cell indices, progression lines and starts are drawn from `1..=max_anchor`.
    pub max_anchor: usize,
    pub max_step: usize,
    /// Values are nonzero integers in `-max_value..=max_value`.
    pub max_value: i64,
    /// Number of primitives is drawn from `1..=max_terms`.
    pub max_terms: usize,
    pub require: FlagRequirements,
    pub seed: u64,
}

/// Attempts before [`random_instance`] gives up.
pub const MAX_REJECTIONS: usize = 1000;

impl InstanceSpec {
    pub fn new(seed: u64) -> Self {
        InstanceSpec {
            shapes: ShapeKind::ALL.to_vec(),
            max_offset: 4,
            max_anchor: 6,
            max_step: 3,
            max_value: 2,
            max_terms: 5,
            require: FlagRequirements::default(),
            seed,
        }
    }

    pub fn shapes(mut self, shapes: &[ShapeKind]) -> Self {
        self.shapes = shapes.to_vec();
        self
    }

    pub fn require(mut self, require: FlagRequirements) -> Self {
        self.require = require;
        self
    }

    pub fn max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.shapes.is_empty()
            || self.max_anchor == 0
            || self.max_step == 0
            || self.max_value <= 0
            || self.max_terms == 0
        {
            return Err(Error::Invariant(format!("invalid instance spec {self:?}")));
        }
        Ok(())
    }
}

fn random_primitive(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Primitive {
    let anchor = |rng: &mut ChaCha8Rng| rng.gen_range(1..=spec.max_anchor);
    let offset = |rng: &mut ChaCha8Rng| rng.gen_range(-spec.max_offset..=spec.max_offset);
    let shape = match spec.shapes.choose(rng).expect("shapes are nonempty") {
        ShapeKind::Cell => Shape::Cell { i: anchor(rng), j: anchor(rng) },
        ShapeKind::RowProg => {
            Shape::RowProg { row: anchor(rng), from: anchor(rng), step: rng.gen_range(1..=spec.max_step) }
        }
        ShapeKind::ColProg => {
            Shape::ColProg { col: anchor(rng), from: anchor(rng), step: rng.gen_range(1..=spec.max_step) }
        }
        ShapeKind::Diag => {
            let d = offset(rng);
            let from = anchor(rng).max((1 - d).max(1) as usize);
            Shape::Diag { offset: d, from }
        }
        ShapeKind::UpperCone => Shape::UpperCone { offset: offset(rng), from: anchor(rng) },
        ShapeKind::LowerCone => Shape::LowerCone { offset: offset(rng), from: anchor(rng) },
    };
    let mut value = 0;
    while value == 0 {
        value = rng.gen_range(-spec.max_value..=spec.max_value);
    }
    Primitive::new(shape, value)
}

/// A matrix drawn from `spec`, deterministic in the seed, rejection-sampled
/// until it has the required flags.
pub fn random_instance(spec: &InstanceSpec) -> Result<SymbolicMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_REJECTIONS {
        let count = rng.gen_range(1..=spec.max_terms);
        let terms: Vec<Primitive> = (0..count).map(|_| random_primitive(spec, &mut rng)).collect();
        let m = SymbolicMatrix::new(terms)?;
        if spec.require.accepts(&classify_matrix(&m)) {
            return Ok(m);
        }
    }
    Err(Error::SpecUnsatisfiable(MAX_REJECTIONS))
}
