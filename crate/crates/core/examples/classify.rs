//! Place the middle factor of each corpus triple in the link hierarchy.

use infmat::assoc::{classify_triple, layers};
use infmat::corpus;

fn main() -> infmat::error::Result<()> {
    let ws = corpus::workspace();
    for [a, b, c] in corpus::TRIPLES {
        let (ma, mb, mc) = (ws.get(a)?, ws.get(b)?, ws.get(c)?);
        let class = classify_triple(ma, mb, mc)?;
        let l = layers(ma, mb, mc)?;
        println!("{a:>10} {b:>12} {c:>11}  {:<10} g2 {} g4 {} g5 {}", class.verdict.as_str(), l.g2(), l.g4(), l.g5());
        println!("{:>36}{}", "", serde_json::to_string(&class.evidence).unwrap());
    }
    Ok(())
}
