//! Build matrices from primitives and read their entries and flags.

use infmat::layout::classify_matrix;
use infmat::matrix::{Primitive, SymbolicMatrix};
use infmat::scalar::Scalar;

fn main() -> infmat::error::Result<()> {
    // Identity minus the superdiagonal.
    let u = SymbolicMatrix::new([Primitive::diag(0, 1, 1), Primitive::diag(1, 1, -1)])?;
    // Upper triangle of ones.
    let v = SymbolicMatrix::new([Primitive::upper_cone(0, 1, 1)])?;
    let half = SymbolicMatrix::new([Primitive::row_prog(2, 1, 2, Scalar::new(1, 2)), Primitive::cell(1, 1, 3)])?;

    for (name, m) in [("U", &u), ("V", &v), ("half", &half)] {
        println!("{name}:\n{m}");
        for i in 1..=4 {
            let row: Vec<String> = (1..=6).map(|j| m.entry(i, j).to_string()).collect();
            println!("  {}", row.join(" "));
        }
        println!("  flags {:?}", classify_matrix(m));
    }

    let sum = u.add(&v.scale(&Scalar::from_int(2)));
    println!("U + 2V, row 1: {:?}", (1..=5).map(|j| sum.entry(1, j).to_string()).collect::<Vec<_>>());
    println!("transpose of V has (3, 1) = {}", v.transpose().entry(3, 1));

    match SymbolicMatrix::new([Primitive::diag(-2, 1, 1)]) {
        Ok(_) => println!("accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
