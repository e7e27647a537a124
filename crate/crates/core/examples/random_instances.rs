//! Generate seeded random matrices with prescribed flags and cross-check triples.

use infmat::layout::classify_matrix;
use infmat::oracle::{cross_check, random_instance, FlagRequirements, InstanceSpec, ShapeKind};

fn main() -> infmat::error::Result<()> {
    let rcfm = FlagRequirements { rcfm: Some(true), ..Default::default() };
    let spec = InstanceSpec::new(7).shapes(&[ShapeKind::Diag, ShapeKind::Cell]).require(rcfm).max_terms(3);
    let m = random_instance(&spec)?;
    println!("{m}\nflags {:?}", classify_matrix(&m));

    for seed in 0..5 {
        let [a, b, c] = [seed * 3, seed * 3 + 1, seed * 3 + 2].map(|s| random_instance(&InstanceSpec::new(s)));
        let report = cross_check(&a?, &b?, &c?, 12)?;
        println!("seed {seed}: {} pass {}", report.verdict.as_str(), report.pass);
    }
    Ok(())
}
