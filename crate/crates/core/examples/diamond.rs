//! Root analysis of small abstract reduction graphs: a fork fails (EE) and
//! has two roots, a diamond passes and has one.
//!
//!     cargo run --example diamond

use thetakit::roots::{fuzz, verify_diamond, ReductionGraph};

fn graph(edges: &[(&str, &str)]) -> ReductionGraph {
    let mut g = ReductionGraph::new();
    for (a, b) in edges {
        for v in [a, b] {
            if g.id(v).is_none() {
                g.add_vertex(*v).unwrap();
            }
        }
        g.add_named_edge(a, b).unwrap();
    }
    g
}

fn show(name: &str, g: &ReductionGraph) {
    let report = verify_diamond(g).unwrap();
    println!("{name}: (F) {}  (EE) {}", report.f_holds, report.ee_holds);
    for (v, roots) in &report.per_vertex_roots {
        println!("  roots({v}) = {roots:?}");
    }
}

fn main() {
    show("fork", &graph(&[("a", "b"), ("a", "c")]));
    show("diamond", &graph(&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]));
    println!("{}", graph(&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).to_dot());

    let summary = fuzz(2000, 12, 0.3, 42).unwrap();
    println!(
        "fuzz: {} graphs, {} with (EE), {} with a non-unique root, {} counterexamples",
        summary.graphs,
        summary.ee_pass,
        summary.non_unique,
        summary.counterexamples.len()
    );
}
