//! The expression language: sorts, printing and parse errors.

use thetakit::algebra::{PrimesManifest, Registry};
use thetakit::expr::parse;
use thetakit::oracle::{oracle_equal, word_of};

fn main() {
    let manifest: PrimesManifest =
        serde_json::from_str(r#"{"theta":["A","B"],"knot":["k","l"],"manifold":["P"]}"#).unwrap();
    let registry = Registry::from_manifest(&manifest).unwrap();

    for text in [
        "A * tau0(k # l) * B",
        "(A*B)*tauM(P#S3)",
        "k # flat(P) # unknot",
        "P # S3",
        "tau+(flat(P))",
        "A * k",
        "tau0(Z)",
        "A * (B",
    ] {
        match parse(text, &registry) {
            Ok(e) => println!("{text:<22} => {e:<24} = {}", e.evaluate()),
            Err(err) => println!("{text:<22} => error: {err}"),
        }
    }

    // Equality by search over legal commutations, compared with normal forms.
    let lhs = parse("A*tau0(k)*B*tauM(P)", &registry).unwrap();
    let rhs = parse("tauM(P)*A*B*tau0(k)", &registry).unwrap();
    let (w1, w2) = (word_of(&lhs).unwrap(), word_of(&rhs).unwrap());
    println!("[{w1}] ~ [{w2}] : {}", oracle_equal(&w1, &w2).unwrap());
    println!("normal forms equal : {}", lhs.evaluate() == rhs.evaluate());
}
