//! JSON reports for the command-line front end.
//!
//! Objects come out with sorted keys and rationals as strings, so identical
//! inputs give byte-identical output.

use serde_json::{json, Value};

use crate::assoc::{classify_triple, condition_d, witness_not_link, witness_not_strong};
use crate::dsl::{print_matrix, Workspace};
use crate::error::{Error, Result};
use crate::matrix::SymbolicMatrix;
use crate::oracle::{cross_check, random_instance, window_matrix, InstanceSpec};
use crate::product::is_defined;
use crate::solve::validate_transform;

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Invariant(format!("serialization failed: {e}")))
}

/// Parse an inclusive range `a..b` of 1-based indices.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse { line: 1, column: 1, message: format!("expected a range like 1..4, found `{s}`") };
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn eval(ws: &Workspace, name: &str, rows: (usize, usize), cols: (usize, usize)) -> Result<Value> {
    let m = ws.get(name)?;
    let grid: Vec<Vec<String>> =
        (rows.0..=rows.1).map(|i| (cols.0..=cols.1).map(|k| m.entry(i, k).to_string()).collect()).collect();
    Ok(json!({ "grid": grid }))
}

pub fn defined(ws: &Workspace, a: &str, b: &str) -> Result<Value> {
    to_value(&is_defined(ws.get(a)?, ws.get(b)?))
}

pub fn cond_d(ws: &Workspace, a: &str, b: &str, c: &str) -> Result<Value> {
    to_value(&condition_d(ws.get(a)?, ws.get(b)?, ws.get(c)?))
}

pub fn classify(ws: &Workspace, a: &str, b: &str, c: &str) -> Result<Value> {
    let class = classify_triple(ws.get(a)?, ws.get(b)?, ws.get(c)?)?;
    Ok(json!({ "class": class.verdict.as_str(), "evidence": to_value(&class.evidence)? }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    NotLink,
    NotStrong,
}

pub fn witness(ws: &Workspace, kind: WitnessKind, b: &str) -> Result<Value> {
    let m = ws.get(b)?;
    let (found, none) = match kind {
        WitnessKind::NotLink => (witness_not_link(m)?, "row and column finite"),
        WitnessKind::NotStrong => (witness_not_strong(m)?, "finitely many nonzero entries"),
    };
    Ok(match found {
        Some((a, c)) => json!({ "A": print_matrix("A", &a), "C": print_matrix("C", &c) }),
        None => json!({ "none": none }),
    })
}

pub fn solve_check(ws: &Workspace, v: &str, u: &str, a: &str) -> Result<Value> {
    to_value(&validate_transform(ws.get(v)?, ws.get(u)?, ws.get(a)?)?)
}

/// Cross-check a named triple, or with no names a random triple drawn from `seed`.
pub fn cross_check_report(ws: &Workspace, names: Option<[&str; 3]>, n: usize, seed: u64) -> Result<Value> {
    let triple: [SymbolicMatrix; 3] = match names {
        Some(names) => [ws.get(names[0])?.clone(), ws.get(names[1])?.clone(), ws.get(names[2])?.clone()],
        None => [
            random_instance(&InstanceSpec::new(seed.wrapping_mul(3)))?,
            random_instance(&InstanceSpec::new(seed.wrapping_mul(3).wrapping_add(1)))?,
            random_instance(&InstanceSpec::new(seed.wrapping_mul(3).wrapping_add(2)))?,
        ],
    };
    let report = cross_check(&triple[0], &triple[1], &triple[2], n)?;
    let mut value = to_value(&report)?;
    if names.is_none() {
        value["triple"] = json!({
            "A": print_matrix("A", &triple[0]),
            "B": print_matrix("B", &triple[1]),
            "C": print_matrix("C", &triple[2]),
        });
    }
    Ok(value)
}

/// Window of a single matrix as a report, mainly for debugging workspaces.
pub fn window(ws: &Workspace, name: &str, n: usize) -> Result<Value> {
    to_value(&window_matrix(ws.get(name)?, n))
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}
