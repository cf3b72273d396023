//! Products in the theta-curve semigroup: the hat part is ordered, knots
//! and manifolds inserted by `tau` are central.
//!
//!     cargo run --example semigroup

use thetakit::algebra::{tau_label, tau_manifold, KnotNF, Label, ManifoldNF, ThetaNF};

fn main() {
    let a = ThetaNF::hat_prime("A");
    let b = ThetaNF::hat_prime("B");
    let k = KnotNF::prime("k");
    let l = KnotNF::prime("l");
    let t0k = tau_label(Label::Zero, &k);

    println!("A * B           = {}", a.vertex_product(&b));
    println!("B * A           = {}", b.vertex_product(&a));
    println!("A * B == B * A  : {}", a.vertex_product(&b) == b.vertex_product(&a));

    // tau0(k) slides past the hat primes.
    let left = t0k.vertex_product(&a).vertex_product(&b);
    let right = a.vertex_product(&b).vertex_product(&t0k);
    println!("tau0(k)*A*B == A*B*tau0(k) : {}", left == right);

    // tau_i is a homomorphism from the knot semigroup.
    let sum = k.connected_sum(&l);
    let lhs = tau_label(Label::Plus, &sum);
    let rhs = tau_label(Label::Plus, &k).vertex_product(&tau_label(Label::Plus, &l));
    println!("tau+(k # l)     = {lhs}");
    println!("tau+(k)*tau+(l) = {rhs}");

    // The label matters for knotted edges, not for flat knots.
    println!("tau-(k) == tau+(k) : {}", tau_label(Label::Minus, &k) == tau_label(Label::Plus, &k));
    let p = ManifoldNF::prime("P");
    let flat = thetakit::algebra::flat_knot(&p);
    println!("tau-(flat P) == tauM(P) : {}", tau_label(Label::Minus, &flat) == tau_manifold(&p));

    let t = a.vertex_product(&t0k).vertex_product(&tau_manifold(&p));
    println!("JSON: {}", serde_json::to_string(&t).unwrap());
}
