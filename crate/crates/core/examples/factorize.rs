//! Parse an expression against a set of declared primes and print its
//! prime factorization.
//!
//!     cargo run --example factorize -- "B*tau-(k#l)*A*tauM(P#Q)"

use thetakit::algebra::{PrimesManifest, Registry};
use thetakit::expr::{parse, Value};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "B*tau-(k#l)*A*tauM(P#Q)".into());
    let registry = Registry::from_manifest(&PrimesManifest {
        theta: vec!["A".into(), "B".into()],
        knot: vec!["k".into(), "l".into()],
        manifold: vec!["P".into(), "Q".into()],
    })
    .expect("valid names");

    let expr = match parse(&text, &registry) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let value = expr.evaluate();
    println!("{} {value}", value.sort_name());

    match value {
        Value::Theta(t) => match t.prime_factorization() {
            Ok(factors) => {
                for (i, f) in factors.iter().enumerate() {
                    println!("  {:>2}. {f}", i + 1);
                }
            }
            Err(e) => println!("  {e}"),
        },
        Value::Knot(k) => {
            for f in k.prime_factors() {
                println!("  {f}");
            }
        }
        Value::Manifold(m) => {
            for p in m.summands.elements() {
                println!("  {p}");
            }
        }
    }
}
