//! Compare symbolic decisions against brute-force finite windows.

use infmat::corpus;
use infmat::oracle::{brute_sum, cross_check, nonzero_terms, window_triple};
use infmat::product::product;

fn main() -> infmat::error::Result<()> {
    let (v, u, a) = (corpus::elim_v(), corpus::elim_u(), corpus::elim_a());
    for upto in [4, 8, 16] {
        println!(
            "(VU)_(1,1) summed to {upto}: {} with {} nonzero terms",
            brute_sum(&v, &u, 1, 1, upto),
            nonzero_terms(&v, &u, 1, 1, upto)
        );
    }
    let p = product(&v, &u)?;
    println!("symbolic (VU)_(1,1) = {}", p.entry(1, 1));

    let w = window_triple(&v, &u, &a, 6)?;
    println!("V(UA) and (VU)A windows stable: left {} right {}", w.left.stable, w.right.stable);
    println!("V(UA)_(1,1) = {}, (VU)A_(1,1) = {}", w.left.at(1, 1), w.right.at(1, 1));

    let report = cross_check(&v, &u, &a, 12)?;
    for line in &report.checks {
        println!("{} {}: {}", if line.pass { "ok  " } else { "FAIL" }, line.name, line.detail);
    }
    println!("verdict {} pass {}", report.verdict.as_str(), report.pass);
    Ok(())
}
