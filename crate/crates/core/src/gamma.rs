//! The reduction graph Γ on finite sequences of elements of `U`.
//!
//! A vertex is a sequence of theta-curves, labelled knots and manifolds,
//! taken up to three moves: knots and manifolds may be permuted freely,
//! adjacent theta-curves may be swapped when one of them is knot-like, and
//! trivial terms may be inserted or deleted. [`GammaVertex`] stores the
//! canonical representative of that class.
//!
//! Edges are essential spherical reductions of a single term. In the free
//! model a reduction is a way of writing the term as a product of two
//! nontrivial pieces along a sphere meeting the graph in 3, 2 or 0 points:
//!
//! | term    | sphere | result                                            |
//! |---------|--------|---------------------------------------------------|
//! | theta   | 3 pts  | `θ = θ₁ ∘ θ₂`, both nontrivial, `θ₁` holds the leg |
//! | theta   | 2 pts  | `θ = θ' ∘ τ_i(k)`, `k` nontrivial                  |
//! | theta   | 0 pts  | `θ = θ' ∘ τ(m)`, `m ≠ S³`                          |
//! | knot    | 2 pts  | `k = k₁ # k₂`, both nontrivial                     |
//! | knot    | 0 pts  | `k = k' # flat(m)` with `m ≠ S³` split off         |
//! | manifold| 0 pts  | `m = m₁ # m₂`, both `≠ S³`                         |

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    tau_label, tau_manifold, KnotCenter, KnotNF, Label, ManifoldNF, Multiset, ThetaNF, UElement,
};
use crate::roots::{check_f, ReductionGraph, RootIndex};

pub const DEFAULT_VERTEX_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("reduction graph exceeds the cap of {cap} vertices ({explored} explored so far)")]
    CapExceeded { cap: usize, explored: usize },
    #[error("vertex has {} roots, expected exactly one", .roots.len())]
    NonUniqueRoot { roots: Vec<GammaVertex> },
    #[error("unique root {found} differs from the normal-form root {expected}")]
    RootMismatch {
        found: Box<GammaVertex>,
        expected: Box<GammaVertex>,
    },
}

/// Canonical representative of a vertex of Γ.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, from = "VertexDoc")]
pub struct GammaVertex {
    /// Non-knot-like theta-curves, in sequence order.
    thetas: Vec<ThetaNF>,
    /// Knot-like theta-curves, sorted.
    knot_like_thetas: Vec<ThetaNF>,
    knots: Vec<LabeledKnot>,
    manifolds: Vec<ManifoldNF>,
}

// Deserialized vertices are re-canonicalized.
#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct VertexDoc {
    #[serde(default)]
    thetas: Vec<ThetaNF>,
    #[serde(default)]
    knot_like_thetas: Vec<ThetaNF>,
    #[serde(default)]
    knots: Vec<LabeledKnot>,
    #[serde(default)]
    manifolds: Vec<ManifoldNF>,
}

impl From<VertexDoc> for GammaVertex {
    fn from(doc: VertexDoc) -> Self {
        let terms = doc
            .thetas
            .into_iter()
            .chain(doc.knot_like_thetas)
            .map(UElement::Theta)
            .chain(
                doc.knots
                    .into_iter()
                    .map(|k| UElement::LabeledKnot(k.label, k.knot)),
            )
            .chain(doc.manifolds.into_iter().map(UElement::Manifold));
        GammaVertex::from_terms(terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledKnot {
    pub label: Label,
    pub knot: KnotNF,
}

/// Canonicalizes a sequence of terms: trivial terms are dropped, knot-like
/// theta-curves, knots and manifolds are collected into sorted multisets,
/// and the remaining theta-curves keep their relative order.
pub fn canonical_vertex(terms: &[UElement]) -> GammaVertex {
    GammaVertex::from_terms(terms.iter().cloned())
}

impl GammaVertex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(term: UElement) -> Self {
        Self::from_terms([term])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = UElement>) -> Self {
        let mut v = GammaVertex::default();
        for term in terms {
            if term.is_trivial() {
                continue;
            }
            match term {
                UElement::Theta(t) if t.is_knot_like() => v.knot_like_thetas.push(t),
                UElement::Theta(t) => v.thetas.push(t),
                UElement::LabeledKnot(label, knot) => v.knots.push(LabeledKnot { label, knot }),
                UElement::Manifold(m) => v.manifolds.push(m),
            }
        }
        v.knot_like_thetas.sort();
        v.knots.sort();
        v.manifolds.sort();
        v
    }

    pub fn thetas(&self) -> &[ThetaNF] {
        &self.thetas
    }

    pub fn knot_like_thetas(&self) -> &[ThetaNF] {
        &self.knot_like_thetas
    }

    pub fn knots(&self) -> &[LabeledKnot] {
        &self.knots
    }

    pub fn manifolds(&self) -> &[ManifoldNF] {
        &self.manifolds
    }

    pub fn is_empty(&self) -> bool {
        self.term_count() == 0
    }

    pub fn term_count(&self) -> usize {
        self.thetas.len() + self.knot_like_thetas.len() + self.knots.len() + self.manifolds.len()
    }

    /// A representative sequence: ordered thetas, knot-like thetas, knots,
    /// manifolds.
    pub fn terms(&self) -> Vec<UElement> {
        let mut out = Vec::with_capacity(self.term_count());
        out.extend(self.thetas.iter().cloned().map(UElement::Theta));
        out.extend(self.knot_like_thetas.iter().cloned().map(UElement::Theta));
        out.extend(
            self.knots
                .iter()
                .map(|k| UElement::LabeledKnot(k.label, k.knot.clone())),
        );
        out.extend(self.manifolds.iter().cloned().map(UElement::Manifold));
        out
    }

    /// Theta-hat primes read across the ordered theta-curves.
    pub fn hat_word(&self) -> Vec<String> {
        self.thetas.iter().flat_map(|t| t.hat.iter().cloned()).collect()
    }

    /// Every prime generator occurring in the vertex, with theta-hat order
    /// forgotten. Knot primes carry their label.
    pub fn prime_content(&self) -> PrimeContent {
        let mut c = PrimeContent::default();
        for t in self.thetas.iter().chain(&self.knot_like_thetas) {
            for n in &t.hat {
                c.hat.insert(n, 1);
            }
            for l in Label::ALL {
                *c.knots.get_mut(l) = c.knots.get(l).union(t.knot_center.get(l));
            }
            c.manifolds = c.manifolds.union(&t.manifold_center.summands);
        }
        for k in &self.knots {
            *c.knots.get_mut(k.label) = c.knots.get(k.label).union(&k.knot.knot_part);
            c.manifolds = c.manifolds.union(&k.knot.manifold_part.summands);
        }
        for m in &self.manifolds {
            c.manifolds = c.manifolds.union(&m.summands);
        }
        c
    }
}

impl fmt::Display for GammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .thetas
            .iter()
            .chain(&self.knot_like_thetas)
            .map(|t| format!("θ[{t}]"))
            .chain(self.knots.iter().map(|k| format!("K{}[{}]", k.label, k.knot)))
            .chain(self.manifolds.iter().map(|m| format!("M[{m}]")))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrimeContent {
    pub hat: Multiset,
    pub knots: KnotCenter,
    pub manifolds: Multiset,
}

/// Integer potential that drops along every edge of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PotentialWeights {
    pub per_count: usize,
    pub theta_offset: usize,
    pub knot_offset: usize,
    pub manifold_offset: usize,
}

impl Default for PotentialWeights {
    fn default() -> Self {
        Self {
            per_count: 4,
            theta_offset: 1,
            knot_offset: 2,
            manifold_offset: 3,
        }
    }
}

impl PotentialWeights {
    pub fn is_valid(&self) -> bool {
        self.manifold_offset > self.knot_offset
            && self.knot_offset > self.theta_offset
            && self.theta_offset > 0
            && self.per_count > self.manifold_offset
    }

    pub fn potential(&self, v: &GammaVertex) -> usize {
        let theta: usize = v
            .thetas
            .iter()
            .chain(&v.knot_like_thetas)
            .map(|t| self.per_count * t.prime_count() - self.theta_offset)
            .sum();
        let knots: usize = v
            .knots
            .iter()
            .map(|k| self.per_count * k.knot.prime_count() - self.knot_offset)
            .sum();
        let manifolds: usize = v
            .manifolds
            .iter()
            .map(|m| self.per_count * m.prime_count() - self.manifold_offset)
            .sum();
        theta + knots + manifolds
    }
}

/// `Σ (4·primes − offset)` with offsets 1, 2, 3 for theta, knot and
/// manifold terms.
pub fn potential_c(v: &GammaVertex) -> usize {
    PotentialWeights::default().potential(v)
}

/// Ordered splits `t = t₁ ∘ t₂` with both pieces nontrivial.
fn theta_splits(t: &ThetaNF) -> Vec<(ThetaNF, ThetaNF)> {
    let knot_choices: Vec<Vec<Multiset>> = Label::ALL
        .iter()
        .map(|&l| t.knot_center.get(l).submultisets())
        .collect();
    let manifold_choices = t.manifold_center.summands.submultisets();
    let mut out = Vec::new();
    for cut in 0..=t.hat.len() {
        for km in &knot_choices[0] {
            for kz in &knot_choices[1] {
                for kp in &knot_choices[2] {
                    for mm in &manifold_choices {
                        let mut left = ThetaNF::from_hat(&t.hat[..cut]);
                        *left.knot_center.get_mut(Label::Minus) = km.clone();
                        *left.knot_center.get_mut(Label::Zero) = kz.clone();
                        *left.knot_center.get_mut(Label::Plus) = kp.clone();
                        left.manifold_center = ManifoldNF::from_summands(mm.clone());
                        let right = remainder(t, &left, cut);
                        if !left.is_trivial() && !right.is_trivial() {
                            out.push((left, right));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `t` with the central part of `piece` removed and the hat word cut after
/// position `cut`.
fn remainder(t: &ThetaNF, piece: &ThetaNF, cut: usize) -> ThetaNF {
    let mut rest = ThetaNF::from_hat(&t.hat[cut..]);
    for l in Label::ALL {
        *rest.knot_center.get_mut(l) = t
            .knot_center
            .get(l)
            .difference(piece.knot_center.get(l))
            .expect("piece is drawn from t");
    }
    rest.manifold_center = ManifoldNF::from_summands(
        t.manifold_center
            .summands
            .difference(&piece.manifold_center.summands)
            .expect("piece is drawn from t"),
    );
    rest
}

/// Nontrivial knots `k` with `t = t' ∘ τ_i(k)`, paired with `t'`.
fn knot_extractions(t: &ThetaNF, label: Label) -> Vec<(ThetaNF, KnotNF)> {
    let manifold_choices = t.manifold_center.summands.submultisets();
    let mut out = Vec::new();
    for kp in t.knot_center.get(label).submultisets() {
        for mp in &manifold_choices {
            let k = KnotNF::new(kp.clone(), ManifoldNF::from_summands(mp.clone()));
            if k.is_trivial() {
                continue;
            }
            let rest = remainder(t, &tau_label(label, &k), 0);
            out.push((rest, k));
        }
    }
    out
}

/// Nonempty submultisets `m` with `t = t' ∘ τ(m)`, paired with `t'`.
fn manifold_extractions(t: &ThetaNF) -> Vec<(ThetaNF, ManifoldNF)> {
    t.manifold_center
        .summands
        .submultisets()
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|m| {
            let m = ManifoldNF::from_summands(m);
            (remainder(t, &tau_manifold(&m), 0), m)
        })
        .collect()
}

fn theta_pieces(t: &ThetaNF) -> Vec<Vec<UElement>> {
    let mut out: Vec<Vec<UElement>> = theta_splits(t)
        .into_iter()
        .map(|(a, b)| vec![UElement::Theta(a), UElement::Theta(b)])
        .collect();
    for label in Label::ALL {
        for (rest, k) in knot_extractions(t, label) {
            out.push(vec![UElement::Theta(rest), UElement::LabeledKnot(label, k)]);
        }
    }
    for (rest, m) in manifold_extractions(t) {
        out.push(vec![UElement::Theta(rest), UElement::Manifold(m)]);
    }
    out
}

fn knot_pieces(label: Label, k: &KnotNF) -> Vec<Vec<UElement>> {
    let mut out = Vec::new();
    let manifold_choices = k.manifold_part.summands.submultisets();
    for kp in k.knot_part.submultisets() {
        for mp in &manifold_choices {
            let a = KnotNF::new(kp.clone(), ManifoldNF::from_summands(mp.clone()));
            let b = KnotNF::new(
                k.knot_part.difference(&kp).expect("submultiset"),
                ManifoldNF::from_summands(
                    k.manifold_part.summands.difference(mp).expect("submultiset"),
                ),
            );
            if !a.is_trivial() && !b.is_trivial() {
                out.push(vec![
                    UElement::LabeledKnot(label, a),
                    UElement::LabeledKnot(label, b),
                ]);
            }
        }
    }
    for mp in manifold_choices.into_iter().filter(|m| !m.is_empty()) {
        let rest = KnotNF::new(
            k.knot_part.clone(),
            ManifoldNF::from_summands(k.manifold_part.summands.difference(&mp).expect("submultiset")),
        );
        out.push(vec![
            UElement::LabeledKnot(label, rest),
            UElement::Manifold(ManifoldNF::from_summands(mp)),
        ]);
    }
    out
}

fn manifold_pieces(m: &ManifoldNF) -> Vec<Vec<UElement>> {
    m.summands
        .submultisets()
        .into_iter()
        .filter_map(|a| {
            let b = m.summands.difference(&a).expect("submultiset");
            (!a.is_empty() && !b.is_empty()).then(|| {
                vec![
                    UElement::Manifold(ManifoldNF::from_summands(a)),
                    UElement::Manifold(ManifoldNF::from_summands(b)),
                ]
            })
        })
        .collect()
}

/// All vertices reachable from `v` by one essential spherical reduction of
/// one term.
pub fn reductions_of(v: &GammaVertex) -> BTreeSet<GammaVertex> {
    let terms = v.terms();
    let mut out = BTreeSet::new();
    for (i, term) in terms.iter().enumerate() {
        let replacements = match term {
            UElement::Theta(t) => theta_pieces(t),
            UElement::LabeledKnot(label, k) => knot_pieces(*label, k),
            UElement::Manifold(m) => manifold_pieces(m),
        };
        for pieces in replacements {
            let seq = terms[..i]
                .iter()
                .cloned()
                .chain(pieces)
                .chain(terms[i + 1..].iter().cloned());
            out.insert(GammaVertex::from_terms(seq));
        }
    }
    out
}

/// Γ restricted to the subordinates of one vertex. Vertex `i` of the graph
/// is named `"i"` and holds `vertices[i]`; vertex 0 is the start.
#[derive(Debug, Clone)]
pub struct Gamma {
    pub graph: ReductionGraph,
    pub vertices: Vec<GammaVertex>,
}

impl Gamma {
    /// Ids of vertices without outgoing edges.
    pub fn terminal_ids(&self) -> Vec<usize> {
        self.graph
            .vertices()
            .filter(|&v| self.graph.is_terminal(v))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let terminals: BTreeSet<usize> = self.terminal_ids().into_iter().collect();
        self.graph
            .to_dot_with(|v| Some(self.vertices[v].to_string()), &terminals)
    }

    pub fn to_json_doc(&self) -> GammaDoc {
        GammaDoc {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, value)| GammaDocVertex {
                    id,
                    value: value.clone(),
                })
                .collect(),
            edges: self.graph.edges().collect(),
            root: self.terminal_ids(),
        }
    }
}

/// `{"vertices":[{"id":0,"value":..}],"edges":[[0,1]],"root":[id]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaDoc {
    pub vertices: Vec<GammaDocVertex>,
    pub edges: Vec<(usize, usize)>,
    pub root: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaDocVertex {
    pub id: usize,
    pub value: GammaVertex,
}

/// Breadth-first closure of [`reductions_of`] from `start`. Ids follow
/// first discovery; successors are visited in canonical order.
pub fn build_gamma(start: &GammaVertex, vertex_cap: usize) -> Result<Gamma, GammaError> {
    let mut ids: HashMap<GammaVertex, usize> = HashMap::new();
    let mut vertices = vec![start.clone()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    ids.insert(start.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    if vertex_cap == 0 {
        return Err(GammaError::CapExceeded {
            cap: 0,
            explored: 0,
        });
    }
    while let Some(v) = queue.pop_front() {
        for w in reductions_of(&vertices[v]) {
            let id = match ids.get(&w) {
                Some(&id) => id,
                None => {
                    if vertices.len() == vertex_cap {
                        return Err(GammaError::CapExceeded {
                            cap: vertex_cap,
                            explored: vertices.len(),
                        });
                    }
                    let id = vertices.len();
                    ids.insert(w.clone(), id);
                    vertices.push(w);
                    queue.push_back(id);
                    id
                }
            };
            edges.push((v, id));
        }
    }
    let mut graph = ReductionGraph::new();
    for i in 0..vertices.len() {
        graph.add_vertex(i.to_string()).expect("fresh names");
    }
    for (v, w) in edges {
        graph.add_edge(v, w);
    }
    Ok(Gamma { graph, vertices })
}

/// How [`root_of_gamma`] picks among the available reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Smallest successor in canonical order.
    First,
    /// Largest successor in canonical order.
    Last,
    /// Uniformly random successor from a seeded generator.
    Seeded(u64),
}

/// Follows one reduction path to a terminal vertex.
pub fn root_of_gamma(start: &GammaVertex, strategy: Strategy) -> GammaVertex {
    let mut rng = match strategy {
        Strategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut current = start.clone();
    loop {
        let next = reductions_of(&current);
        let chosen = match strategy {
            Strategy::First => next.into_iter().next(),
            Strategy::Last => next.into_iter().next_back(),
            Strategy::Seeded(_) => next
                .into_iter()
                .choose(rng.as_mut().expect("seeded strategy")),
        };
        match chosen {
            Some(w) => current = w,
            None => return current,
        }
    }
}

/// The root read off the normal forms: every generator becomes its own
/// term, theta-hat primes in order.
pub fn expected_root(start: &GammaVertex) -> GammaVertex {
    let mut terms = Vec::new();
    let mut central = Vec::new();
    let push_knot = |out: &mut Vec<UElement>, label: Label, k: &KnotNF| {
        for name in k.knot_part.elements() {
            out.push(UElement::LabeledKnot(label, KnotNF::prime(name)));
        }
        for name in k.manifold_part.summands.elements() {
            out.push(UElement::Manifold(ManifoldNF::prime(name)));
        }
    };
    for t in start.thetas.iter().chain(&start.knot_like_thetas) {
        terms.extend(t.hat.iter().map(|n| UElement::Theta(ThetaNF::hat_prime(n))));
        for label in Label::ALL {
            push_knot(
                &mut central,
                label,
                &KnotNF::new(t.knot_center.get(label).clone(), ManifoldNF::s3()),
            );
        }
        push_knot(
            &mut central,
            Label::Zero,
            &KnotNF::new(Multiset::new(), t.manifold_center.clone()),
        );
    }
    for k in &start.knots {
        push_knot(&mut central, k.label, &k.knot);
    }
    for m in &start.manifolds {
        central.extend(
            m.summands
                .elements()
                .map(|n| UElement::Manifold(ManifoldNF::prime(n))),
        );
    }
    terms.extend(central);
    GammaVertex::from_terms(terms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UniqueRootReport {
    pub vertices: usize,
    pub edges: usize,
    pub root: GammaVertex,
    pub f_holds: bool,
    pub ee_holds: bool,
    /// Potential strictly decreases along every edge.
    pub descent_holds: bool,
}

impl UniqueRootReport {
    pub fn all_hold(&self) -> bool {
        self.f_holds && self.ee_holds && self.descent_holds
    }
}

/// Builds Γ from `start` and checks that it has exactly one terminal
/// vertex, equal to [`expected_root`]. Also reports (F), (EE) and
/// potential descent on the built graph.
pub fn verify_unique_root(
    start: &GammaVertex,
    vertex_cap: usize,
) -> Result<(Gamma, UniqueRootReport), GammaError> {
    let gamma = build_gamma(start, vertex_cap)?;
    let report = report_for(&gamma, start)?;
    Ok((gamma, report))
}

fn report_for(gamma: &Gamma, start: &GammaVertex) -> Result<UniqueRootReport, GammaError> {
    let terminals = gamma.terminal_ids();
    if terminals.len() != 1 {
        return Err(GammaError::NonUniqueRoot {
            roots: terminals
                .iter()
                .map(|&v| gamma.vertices[v].clone())
                .collect(),
        });
    }
    let root = gamma.vertices[terminals[0]].clone();
    let expected = expected_root(start);
    if root != expected {
        return Err(GammaError::RootMismatch {
            found: Box::new(root),
            expected: Box::new(expected),
        });
    }
    let g = &gamma.graph;
    let potentials: Vec<usize> = gamma.vertices.iter().map(potential_c).collect();
    Ok(UniqueRootReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        root,
        f_holds: check_f(g).is_some(),
        ee_holds: RootIndex::new(g).check_ee().holds,
        descent_holds: g.edges().all(|(v, w)| potentials[v] > potentials[w]),
    })
}
