//! Lazy products: entries, summation bounds, profiles and symbolic equality.

use infmat::corpus;
use infmat::matrix::SymbolicMatrix;
use infmat::product::product;

fn main() -> infmat::error::Result<()> {
    let (v, u, a) = (corpus::elim_v(), corpus::elim_u(), corpus::elim_a());

    let vu = product(&v, &u)?;
    println!("VU equals I: {}", vu.equals(&SymbolicMatrix::identity())?);

    let ua = product(&u, &a)?;
    for i in 1..=3 {
        let row: Vec<String> = (1..=5).map(|k| ua.entry(i, k).to_string()).collect();
        println!("UA row {i}: {}  (sum stops at j = {})", row.join(" "), ua.summation_bound(i, 1));
    }
    let p = ua.row_profile(2)?;
    println!("UA row 2 profile: bound {} period {}", p.bound(), p.period());
    println!("UA column family modulus {}", ua.col_family()?.modulus());

    let t = product(&corpus::lower_ones(), &corpus::bidiag())?;
    println!("lower_ones * bidiag equals I: {}", t.equals(&SymbolicMatrix::identity())?);

    match product(&corpus::ones_row(), &corpus::ones_col()) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("ones_row * ones_col: {e}"),
    }
    Ok(())
}
