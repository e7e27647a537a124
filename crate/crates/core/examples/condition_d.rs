//! Decide the finiteness condition on triples and walk a failing fiber.

use infmat::assoc::condition_d;
use infmat::corpus;

fn main() {
    let ws = corpus::workspace();
    for [a, b, c] in corpus::TRIPLES {
        let cert = condition_d(ws.get(a).unwrap(), ws.get(b).unwrap(), ws.get(c).unwrap());
        match &cert.witness {
            None => println!("{a} {b} {c}: holds"),
            Some(w) => {
                let pairs = w.family.pairs(4);
                println!("{a} {b} {c}: fails at (i, l) = ({}, {}), nonzero (j, k) include {pairs:?}", w.i, w.l);
            }
        }
    }
}
