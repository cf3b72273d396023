//! Knot factorization read off the root of Γ. Flat summands come back as
//! separate manifold terms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thetakit::algebra::{flat_knot, Label, UElement};
use thetakit::gamma::{build_gamma, GammaVertex, DEFAULT_VERTEX_CAP};
use thetakit::sample::Pool;

fn main() {
    let pool = Pool::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let k = pool.knot(&mut rng, 4);
        let gamma = build_gamma(&GammaVertex::single(UElement::LabeledKnot(Label::Minus, k.clone())), DEFAULT_VERTEX_CAP)
            .expect("within cap");
        let roots = gamma.terminal_ids();
        let root = &gamma.vertices[roots[0]];
        let mut pieces: Vec<String> = root.knots().iter().map(|lk| lk.knot.to_string()).collect();
        pieces.extend(root.manifolds().iter().map(|m| flat_knot(m).to_string()));
        println!(
            "{k:<28} |Γ| = {:>4}  roots = {}  factors: {}",
            gamma.vertices.len(),
            roots.len(),
            pieces.join(", ")
        );
    }
}
