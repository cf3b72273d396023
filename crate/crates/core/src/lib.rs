//! Symbolic model of the semigroups of theta-curves, knots and 3-manifolds
//! on free prime generators.
//!
//! * [`algebra`]: normal forms, products, insertion maps `τ_i` and `τ`,
//!   primality and canonical prime factorization.
//! * [`oracle`]: brute-force word equality up to knot-like commutation,
//!   used to certify the normal forms.
//! * [`roots`]: subordinates, roots and properties (F) and (EE) on finite
//!   oriented graphs, with a random-DAG fuzzer for the unique-root theorem.
//! * [`gamma`]: the graph Γ of essential spherical reductions, built from a
//!   symbolic element, and its unique root.
//! * [`expr`] and [`cli`]: a small expression language and the batch tool
//!   built on it.

pub mod algebra;
pub mod cli;
pub mod expr;
pub mod gamma;
pub mod oracle;
pub mod roots;
pub mod sample;
pub mod selftest;

pub use algebra::{
    GeneratorKind, KnotNF, Label, ManifoldNF, Multiset, PrimeGenerator, Registry, ThetaNF,
    UElement,
};
pub use expr::{parse, Expression, Value};
pub use gamma::{GammaVertex, DEFAULT_VERTEX_CAP};
pub use roots::ReductionGraph;
