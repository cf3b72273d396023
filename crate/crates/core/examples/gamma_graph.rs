//! Build the reduction graph below a theta-curve, check that it has a
//! single root, and write it out as DOT.
//!
//!     cargo run --example gamma_graph > gamma.dot

use thetakit::algebra::{tau_label, KnotNF, Label, ThetaNF, UElement};
use thetakit::gamma::{expected_root, potential_c, verify_unique_root, GammaVertex, DEFAULT_VERTEX_CAP};

fn main() {
    // A * tau0(k) * B
    let theta = ThetaNF::hat_prime("A")
        .vertex_product(&tau_label(Label::Zero, &KnotNF::prime("k")))
        .vertex_product(&ThetaNF::hat_prime("B"));
    let start = GammaVertex::single(UElement::Theta(theta));

    let (gamma, report) = verify_unique_root(&start, DEFAULT_VERTEX_CAP).expect("unique root");
    eprintln!("{} vertices, {} edges", report.vertices, report.edges);
    for (id, v) in gamma.vertices.iter().enumerate() {
        let out: Vec<usize> = gamma.graph.successors(id).collect();
        eprintln!("  {id:>2} c={:<3} {v}  -> {out:?}", potential_c(v));
    }
    eprintln!("root      {}", report.root);
    eprintln!("expected  {}", expected_root(&start));
    eprintln!("(F) {}  (EE) {}  descent {}", report.f_holds, report.ee_holds, report.descent_holds);
    print!("{}", gamma.to_dot());
}
