//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line.

use std::process::{Command, ExitCode};

use infmat::assoc::{classify_triple, condition_d, layers, witness_not_link, witness_not_strong, Evidence, Verdict};
use infmat::corpus::{self, TRIPLES};
use infmat::dsl::{parse_dsl, print_matrix, Workspace};
use infmat::layout::classify_matrix;
use infmat::matrix::SymbolicMatrix;
use infmat::oracle::{
    cross_check, random_instance, window_product, window_triple, FlagRequirements, InstanceSpec, ShapeKind,
};
use infmat::product::{is_defined, left_defined, product, right_defined};
use infmat::scalar::Scalar;
use infmat::solve::validate_transform;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SUITE: u64 = 200;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn ok<T>(r: infmat::error::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn require(row_finite: Option<bool>, col_finite: Option<bool>) -> FlagRequirements {
    FlagRequirements { row_finite, col_finite, ..Default::default() }
}

fn gen(seed: u64, req: FlagRequirements) -> Result<SymbolicMatrix, String> {
    ok(random_instance(&InstanceSpec::new(seed).require(req)))
}

fn any() -> FlagRequirements {
    FlagRequirements::default()
}

fn intro_corpus() -> Outcome {
    let (v, u, a, b) = (corpus::elim_v(), corpus::elim_u(), corpus::elim_a(), corpus::elim_b());
    let i = SymbolicMatrix::identity();
    check(ok(ok(product(&u, &a))?.equals(&i))?, || "UA != I".into())?;
    check(ok(ok(product(&v, &u))?.equals(&i))?, || "VU != I".into())?;
    let ub = window_product(&ok(product(&u, &b))?, 8);
    check(ub.is_zero() && ub.stable, || "Ub window is not zero".into())?;
    let class = ok(classify_triple(&v, &u, &a))?;
    check(class.verdict == Verdict::G4NotG5, || format!("V,U,A classified {}", class.verdict.as_str()))?;
    let Evidence::Inequality { i: wi, l: wl, lhs, rhs } = &class.evidence else {
        return Err("missing inequality witness".into());
    };
    let tw = ok(window_triple(&v, &u, &a, (*wi).max(*wl)))?;
    check(tw.left.at(*wi, *wl) == lhs && tw.right.at(*wi, *wl) == rhs && lhs != rhs, || {
        format!("witness ({wi},{wl}) not confirmed by brute force")
    })?;
    let r = ok(validate_transform(&v, &u, &a))?;
    check(!r.accepted() && r.reason.as_deref() == Some("V not row finite"), || format!("transform report {r:?}"))?;
    Ok(format!("UA = VU = I, Ub = 0, V(UA) {lhs} vs (VU)A {rhs} at ({wi},{wl}), transform rejected"))
}

fn tridiagonal_corpus() -> Outcome {
    let (a, c) = (corpus::ones_row(), corpus::ones_col());
    let (b, b2) = (corpus::skew_tridiag(), corpus::tridiag());
    let acb = ok(classify_triple(&a, &c, &b))?;
    check(acb.verdict == Verdict::NotG2, || format!("(A,C,B) classified {}", acb.verdict.as_str()))?;
    check(matches!(acb.evidence, Evidence::Pairwise { product: "AB", .. }), || "AC not reported".into())?;
    let abc = ok(classify_triple(&a, &b, &c))?;
    let expected = Evidence::Inequality { i: 1, l: 1, lhs: Scalar::one(), rhs: Scalar::from(-1) };
    check(abc.verdict == Verdict::G4NotG5 && abc.evidence == expected, || format!("(A,B,C) gave {abc:?}"))?;
    let tw = ok(window_triple(&a, &b, &c, 2))?;
    check(tw.left.at(1, 1) == &Scalar::one() && tw.right.at(1, 1) == &Scalar::from(-1), || {
        "brute force disagrees at (1,1)".into()
    })?;
    let ab2c = ok(classify_triple(&a, &b2, &c))?;
    check(ab2c.verdict == Verdict::G2NotG4, || format!("(A,B',C) classified {}", ab2c.verdict.as_str()))?;
    Ok("NOT_G2, G4_NOT_G5 with +1 vs -1 at (1,1), G2_NOT_G4".into())
}

fn connector_corpus() -> Outcome {
    let (a, b, c) = (corpus::shifted_row(), corpus::connector(), corpus::shifted_col());
    let ab = is_defined(&a, &b);
    let bc = is_defined(&b, &c);
    check(!ab.defined && !bc.defined, || "a pairwise product is defined".into())?;
    let cert = condition_d(&a, &b, &c);
    check(cert.holds, || format!("condition (D) fails: {cert:?}"))?;
    Ok("AB and BC undefined, condition (D) holds".into())
}

/// Runs `f` on seeds `base..base + SUITE`, returning the first failure.
fn suite(name: &str, base: u64, mut f: impl FnMut(u64) -> Result<bool, String>) -> Result<String, String> {
    let mut applicable = 0;
    for seed in base..base + SUITE {
        match f(seed) {
            Ok(true) => applicable += 1,
            Ok(false) => {}
            Err(e) => return Err(format!("{name}, seed {seed}: {e}")),
        }
    }
    Ok(format!("{name} {applicable}/{SUITE}"))
}

fn law_suites() -> Outcome {
    let mut done = Vec::new();
    done.push(suite("equivalence", 10_000, |s| {
        let (a, b) = (gen(2 * s, any())?, gen(2 * s + 1, any())?);
        let d = is_defined(&a, &b).defined;
        check(d == left_defined(&a, &b) && d == right_defined(&a, &b), || "criteria disagree".into())?;
        check(d == is_defined(&b.transpose(), &a.transpose()).defined, || "transpose duality".into())?;
        Ok(true)
    })?);
    done.push(suite("row/column finite factors", 20_000, |s| {
        let a = gen(3 * s, require(Some(true), None))?;
        let m = gen(3 * s + 1, any())?;
        let c = gen(3 * s + 2, require(None, Some(true)))?;
        check(is_defined(&a, &m).defined, || "row finite left factor".into())?;
        check(is_defined(&m, &c).defined, || "column finite right factor".into())?;
        Ok(true)
    })?);
    let g5 = |a: &SymbolicMatrix, b: &SymbolicMatrix, c: &SymbolicMatrix| -> Result<bool, String> {
        let v = ok(classify_triple(a, b, c))?.verdict;
        check(v == Verdict::G5, || format!("classified {}", v.as_str()))?;
        Ok(true)
    };
    done.push(suite("row finite A, column finite C", 30_000, |s| {
        g5(
            &gen(3 * s, require(Some(true), None))?,
            &gen(3 * s + 1, any())?,
            &gen(3 * s + 2, require(None, Some(true)))?,
        )
    })?);
    done.push(suite("finitely supported B", 40_000, |s| {
        let fsm = FlagRequirements { fsm: Some(true), ..Default::default() };
        g5(&gen(3 * s, any())?, &gen(3 * s + 1, fsm)?, &gen(3 * s + 2, any())?)
    })?);
    done.push(suite("A and B row finite", 50_000, |s| {
        let rf = require(Some(true), None);
        g5(&gen(3 * s, rf)?, &gen(3 * s + 1, rf)?, &gen(3 * s + 2, any())?)
    })?);
    done.push(suite("B and C column finite", 55_000, |s| {
        let cf = require(None, Some(true));
        g5(&gen(3 * s, any())?, &gen(3 * s + 1, cf)?, &gen(3 * s + 2, cf)?)
    })?);
    done.push(suite("BC defined, A row finite", 60_000, |s| {
        let a = gen(3 * s, require(Some(true), None))?;
        let (b, c) = (gen(3 * s + 1, any())?, gen(3 * s + 2, any())?);
        if !is_defined(&b, &c).defined {
            return Ok(false);
        }
        g5(&a, &b, &c)
    })?);
    done.push(suite("G5 implies (D); agreeing products imply (D)", 70_000, |s| {
        let (a, b, c) = mixed_triple(s)?;
        let l = ok(layers(&a, &b, &c))?;
        let class = ok(classify_triple(&a, &b, &c))?;
        if class.verdict == Verdict::G5 {
            check(l.cond_d.holds, || "G5 without (D)".into())?;
        }
        if !l.g4() {
            return Ok(false);
        }
        let tw = ok(window_triple(&a, &b, &c, 16))?;
        if tw.left == tw.right {
            check(l.cond_d.holds, || "products agree on the window but (D) fails".into())?;
        }
        Ok(true)
    })?);
    done.push(suite("hierarchy", 80_000, |s| {
        let (a, b, c) = mixed_triple(s)?;
        let l = ok(layers(&a, &b, &c))?;
        check(!l.g5() || l.g4(), || "G5 without G4 conditions".into())?;
        check(!l.g4() || l.g2(), || "G4 without G2 conditions".into())?;
        Ok(true)
    })?);
    done.push(suite("subspace closure", 90_000, |s| {
        let (a, b1, c) = mixed_triple(s)?;
        let b2 = gen(7 * s + 1_000_000, if s % 2 == 0 { require(Some(true), Some(true)) } else { any() })?;
        let level = |b: &SymbolicMatrix| ok(classify_triple(&a, b, &c)).map(|t| t.verdict);
        let (l1, l2) = (level(&b1)?, level(&b2)?);
        let floor = l1.min(l2);
        if floor == Verdict::NotG2 {
            return Ok(false);
        }
        let sum = level(&b1.add(&b2))?;
        check(sum >= floor, || format!("B1 {} + B2 {} gave {}", l1.as_str(), l2.as_str(), sum.as_str()))?;
        let scaled = level(&b1.scale(&Scalar::new(-3, 2)))?;
        check(scaled >= l1, || format!("scaling lowered {} to {}", l1.as_str(), scaled.as_str()))?;
        Ok(true)
    })?);
    Ok(done.join(", "))
}

/// A triple drawn from a rotating mix of regularity requirements, so that
/// every verdict occurs.
fn mixed_triple(s: u64) -> Result<(SymbolicMatrix, SymbolicMatrix, SymbolicMatrix), String> {
    let rcfm = FlagRequirements { rcfm: Some(true), ..Default::default() };
    let (ra, rb, rc) = match s % 4 {
        0 => (any(), any(), any()),
        1 => (any(), rcfm, any()),
        2 => (require(Some(true), None), any(), any()),
        _ => (any(), rcfm, require(None, Some(true))),
    };
    Ok((gen(3 * s, ra)?, gen(3 * s + 1, rb)?, gen(3 * s + 2, rc)?))
}

fn witness_validation() -> Outcome {
    let mut link = 0;
    let mut seed = 100_000;
    while link < 100 {
        let b = gen(seed, FlagRequirements { rcfm: Some(false), ..Default::default() })?;
        seed += 1;
        let (a, c) = ok(witness_not_link(&b))?.ok_or_else(|| format!("no not-link witness for seed {}", seed - 1))?;
        let v = ok(classify_triple(&a, &b, &c))?.verdict;
        check(v == Verdict::NotG2, || format!("not-link witness for seed {} classified {}", seed - 1, v.as_str()))?;
        link += 1;
    }
    let mut strong = 0;
    let spec = |seed| {
        InstanceSpec::new(seed).shapes(&[ShapeKind::Cell, ShapeKind::Diag]).require(FlagRequirements {
            rcfm: Some(true),
            fsm: Some(false),
            ..Default::default()
        })
    };
    let mut seed = 200_000;
    while strong < 100 {
        let b = ok(random_instance(&spec(seed)))?;
        seed += 1;
        let flags = classify_matrix(&b);
        check(flags.rcfm && !flags.fsm, || "generator ignored flags".into())?;
        let (a, c) =
            ok(witness_not_strong(&b))?.ok_or_else(|| format!("no not-strong witness for seed {}", seed - 1))?;
        let v = ok(classify_triple(&a, &b, &c))?.verdict;
        check(v == Verdict::G2NotG4, || format!("not-strong witness for seed {} classified {}", seed - 1, v.as_str()))?;
        strong += 1;
    }
    Ok(format!("{link} not-link and {strong} not-strong witnesses validated"))
}

fn differential() -> Outcome {
    let ws = corpus::workspace();
    let mut verdicts = std::collections::BTreeMap::new();
    for names in TRIPLES {
        let [a, b, c] = names.map(|n| ws.get(n).expect("corpus name").clone());
        let r = ok(cross_check(&a, &b, &c, 16))?;
        if !r.pass {
            return Err(format!("{names:?}: {:?}", r.failures().collect::<Vec<_>>()));
        }
        *verdicts.entry(r.verdict.as_str()).or_insert(0) += 1;
    }
    for s in 0..SUITE {
        let (a, b, c) = mixed_triple(300_000 + s)?;
        let r = ok(cross_check(&a, &b, &c, 16))?;
        if !r.pass {
            return Err(format!("seed {s}: {:?}\n{a:?}\n{b:?}\n{c:?}", r.failures().collect::<Vec<_>>()));
        }
        *verdicts.entry(r.verdict.as_str()).or_insert(0) += 1;
    }
    Ok(format!("{} triples, verdicts {verdicts:?}", TRIPLES.len() as u64 + SUITE))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus.imx");
    let out = Command::new(env!("CARGO_BIN_EXE_infmat"))
        .arg("--file")
        .arg(file)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || format!("{args:?} exited with {}", out.status))?;
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let mut commands: Vec<Vec<&str>> = vec![
        vec!["eval", "V", "--rows", "1..6", "--cols", "1..6"],
        vec!["defined", "ones_row", "ones_col"],
        vec!["witness", "not-link", "V"],
        vec!["witness", "not-strong", "skew_tridiag"],
        vec!["witness", "not-strong", "E11"],
        vec!["solve-check", "--v", "V", "--u", "U", "--a", "A"],
        vec!["cross-check", "--seed", "7"],
    ];
    for t in TRIPLES.iter() {
        commands.push(vec!["classify", t[0], t[1], t[2]]);
        commands.push(vec!["cond-d", t[0], t[1], t[2]]);
        commands.push(vec!["cross-check", t[0], t[1], t[2], "--n", "8"]);
    }
    for cmd in &commands {
        let (first, second) = (run_cli(cmd)?, run_cli(cmd)?);
        check(first == second, || format!("{cmd:?} differs between runs"))?;
    }
    let ws = corpus::workspace();
    let again = ok(parse_dsl(&ws.to_string()))?;
    check(ws.iter().eq(again.iter()), || "corpus round trip".into())?;
    for s in 0..SUITE {
        let mut ws = Workspace::new();
        for k in 0..3 {
            ok(ws.insert(&format!("M{k}"), gen(400_000 + 3 * s + k, any())?))?;
        }
        let text = ws.to_string();
        let again = ok(parse_dsl(&text))?;
        check(ws.iter().eq(again.iter()) && again.to_string() == text, || format!("round trip for seed {s}:\n{text}"))?;
        for (name, m) in ws.iter() {
            let single = ok(parse_dsl(&print_matrix(name, m)))?;
            check(single.get(name).ok() == Some(m), || format!("single block {name}"))?;
        }
    }
    Ok(format!("{} commands byte-identical across runs, round trips exact", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("elimination corpus", intro_corpus),
        ("tridiagonal corpus", tridiagonal_corpus),
        ("connector corpus", connector_corpus),
        ("hierarchy law suites", law_suites),
        ("witness self-validation", witness_validation),
        ("differential oracle", differential),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail} [{:.1?}]", n + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e} [{:.1?}]", n + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
