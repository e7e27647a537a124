//! Decide whether a product is defined and inspect the witness when it is not.

use infmat::corpus;
use infmat::product::{is_defined, left_defined, right_defined};

fn main() {
    let cases = [
        ("ones_row * ones_col", corpus::ones_row(), corpus::ones_col()),
        ("ones_col * ones_row", corpus::ones_col(), corpus::ones_row()),
        ("V * U", corpus::elim_v(), corpus::elim_u()),
        ("U * V", corpus::elim_u(), corpus::elim_v()),
        ("lower_ones * V", corpus::lower_ones(), corpus::elim_v()),
    ];
    for (name, a, b) in &cases {
        let d = is_defined(a, b);
        print!("{name}: defined {}", d.defined);
        if let Some(w) = &d.witness {
            let js: Vec<usize> = w.family.take(5).collect();
            print!(" (entry ({}, {}) sums nonzero terms at j = {js:?} ...)", w.i, w.k);
        }
        println!();
        assert_eq!(d.defined, left_defined(a, b));
        assert_eq!(d.defined, right_defined(a, b));
    }
}
