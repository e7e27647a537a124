//! Validate left-multiplication of a system by a transform and check solutions.

use infmat::corpus;
use infmat::matrix::SymbolicMatrix;
use infmat::solve::{check_solution, validate_transform};

fn main() -> infmat::error::Result<()> {
    let (v, u, a) = (corpus::elim_v(), corpus::elim_u(), corpus::elim_a());
    let r = validate_transform(&v, &u, &a)?;
    println!("V, U, A: {} ({})", r.verdict, r.reason.as_deref().unwrap_or("-"));
    println!("{}", serde_json::to_string_pretty(&r.checks).unwrap());

    let r = validate_transform(&corpus::lower_ones(), &corpus::bidiag(), &v)?;
    println!("lower_ones, bidiag, V: {}", r.verdict);

    // The ones column solves U x = 0, so U has a nontrivial kernel.
    let ones = corpus::ones_col();
    println!("U * ones_col = 0: {}", check_solution(&u, &ones, &SymbolicMatrix::zero())?);
    let e11 = SymbolicMatrix::unit(1, 1);
    println!("bidiag * ones_col = E11: {}", check_solution(&corpus::bidiag(), &ones, &e11)?);
    println!("U * E11 = ones_col: {}", check_solution(&u, &e11, &ones)?);
    Ok(())
}
