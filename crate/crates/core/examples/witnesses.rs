//! Construct outer factors showing a matrix fails to be a link or a strong link.

use infmat::assoc::{classify_triple, witness_not_link, witness_not_strong};
use infmat::corpus;

fn main() -> infmat::error::Result<()> {
    let ws = corpus::workspace();
    for name in ["V", "U", "tridiag", "skew_tridiag", "ones_col"] {
        let b = ws.get(name)?;
        for (kind, w) in [("not-link", witness_not_link(b)?), ("not-strong", witness_not_strong(b)?)] {
            match w {
                None => println!("{name} {kind}: none"),
                Some((a, c)) => {
                    let v = classify_triple(&a, b, &c)?.verdict;
                    println!("{name} {kind}: {}", v.as_str());
                    print!("{}", infmat::dsl::print_matrix("A", &a));
                    print!("{}", infmat::dsl::print_matrix("C", &c));
                }
            }
        }
    }
    Ok(())
}
