//! Row and column profiles, line families and the layout normal form.

use infmat::corpus;
use infmat::layout::{length, Layout, Lines};
use infmat::profile::{col_profile, row_profile};

fn main() {
    let m = corpus::connector();
    println!("{m}");

    for i in 1..=3 {
        let p = row_profile(&m, i);
        println!(
            "row {i}: bound {} period {} transient {:?} length {:?}",
            p.bound(),
            p.period(),
            p.transient().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            length(&m, i)
        );
        let s = p.support();
        println!("  support first elements {:?}", s.elements_up_to(12).collect::<Vec<_>>());
    }
    let c = col_profile(&m, 4);
    println!("column 4 length {:?}", c.length());

    let layout = Layout::of_matrix(&m);
    println!("layout: threshold {} width {} modulus {}", layout.threshold(), layout.width(), layout.modulus());

    let lines = Lines::of_matrix(&m);
    let rows = lines.row_family();
    println!("row family: regime starts at {}, modulus {}", rows.regime_start(), rows.modulus());
    for (n, p) in rows.representatives() {
        println!("  representative row {n}: has tail {}", p.has_tail());
    }
    println!("flags {:?}", lines.flags());
}
