//! Parse a workspace, print it back and produce the JSON reports the CLI emits.

use infmat::dsl::parse_dsl;
use infmat::report;

const TEXT: &str = "\
matrix S {
  diag d=1 from=1 value=1
}
matrix T {
  diag d=-1 from=2 value=1
}
matrix e {
  cell i=1 j=1 value=1/2
}
";

fn main() -> infmat::error::Result<()> {
    let ws = parse_dsl(TEXT)?;
    print!("{ws}");
    println!(
        "{}",
        report::render(&report::eval(&ws, "S", report::parse_range("1..3")?, report::parse_range("1..3")?)?)
    );
    println!("{}", report::render(&report::classify(&ws, "S", "T", "e")?));

    match parse_dsl("matrix X {\n  cone d=0 value=1\n}\n") {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("parse error {e}"),
    }
    match report::defined(&ws, "S", "Q") {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
