//! Roots of finite oriented graphs.
//!
//! A vertex `W` is subordinate to `V` when `W = V` or a directed path leads
//! from `V` to `W`; a root of `V` is a subordinate with no outgoing edges.
//! On a finite graph, property (F) (bounded path length from every vertex)
//! is the absence of directed cycles. Property (EE) asks that all edges
//! leaving a vertex be chained together by "heads share a root". With both,
//! every vertex has exactly one root.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootsError {
    #[error("vertex `{0}` is declared twice")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not a declared vertex")]
    UnknownVertex(String),
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("a graph needs at least one vertex")]
    EmptyGraph,
    #[error("vertex `{vertex}` has {roots} roots although (F) and (EE) hold")]
    Inconsistent { vertex: String, roots: usize },
}

/// Finite simple directed graph with named vertices. Parallel edges are
/// collapsed on insertion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    succ: Vec<BTreeSet<VertexId>>,
    edge_count: usize,
}

impl ReductionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, RootsError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(RootsError::DuplicateVertex(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.succ.push(BTreeSet::new());
        Ok(id)
    }

    /// Inserts `from → to`; returns false if the edge was already present.
    pub fn add_edge(&mut self, from: VertexId, to: VertexId) -> bool {
        assert!(from < self.names.len() && to < self.names.len(), "edge endpoint out of range");
        let fresh = self.succ[from].insert(to);
        if fresh {
            self.edge_count += 1;
        }
        fresh
    }

    pub fn add_named_edge(&mut self, from: &str, to: &str) -> Result<bool, RootsError> {
        let f = self.id(from).ok_or_else(|| RootsError::UnknownVertex(from.to_string()))?;
        let t = self.id(to).ok_or_else(|| RootsError::UnknownVertex(to.to_string()))?;
        Ok(self.add_edge(f, t))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.succ[v].iter().copied()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.succ[v].len()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.succ[v].is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(v, s)| s.iter().map(move |&w| (v, w)))
    }

    pub fn from_json_doc(doc: &GraphDoc) -> Result<Self, RootsError> {
        let mut g = ReductionGraph::new();
        for v in &doc.vertices {
            g.add_vertex(v.clone())?;
        }
        for (from, to) in &doc.edges {
            g.add_named_edge(from, to)?;
        }
        Ok(g)
    }

    pub fn to_json_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .map(|(v, w)| (self.names[v].clone(), self.names[w].clone()))
                .collect(),
        }
    }

    /// Graphviz rendering; terminal vertices are double circles.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|_| None, &BTreeSet::new())
    }

    /// Graphviz rendering with optional per-vertex labels and a set of
    /// highlighted vertices.
    pub fn to_dot_with(
        &self,
        label: impl Fn(VertexId) -> Option<String>,
        highlight: &BTreeSet<VertexId>,
    ) -> String {
        let mut out = String::from("digraph G {\n");
        for v in self.vertices() {
            let shape = if self.is_terminal(v) { "doublecircle" } else { "circle" };
            let text = label(v).unwrap_or_else(|| self.names[v].clone());
            let _ = write!(
                out,
                "  \"{}\" [label=\"{}\", shape={}",
                escape(&self.names[v]),
                escape(&text),
                shape
            );
            if highlight.contains(&v) {
                out.push_str(", style=filled, fillcolor=\"#ffd27f\"");
            }
            out.push_str("];\n");
        }
        for (v, w) in self.edges() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                escape(&self.names[v]),
                escape(&self.names[w])
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// JSON form `{"vertices":["v0","v1"],"edges":[["v0","v1"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

pub fn subordinates(g: &ReductionGraph, v: VertexId) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for y in g.successors(x) {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

pub fn roots_of(g: &ReductionGraph, v: VertexId) -> BTreeSet<VertexId> {
    subordinates(g, v)
        .into_iter()
        .filter(|&w| g.is_terminal(w))
        .collect()
}

/// Vertices in an order where every edge goes forward, or a directed cycle.
fn topological_order(g: &ReductionGraph) -> Result<Vec<VertexId>, Vec<VertexId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = g.vertex_count();
    let mut mark = vec![Mark::New; n];
    let mut post = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for start in g.vertices() {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack: Vec<(VertexId, Vec<VertexId>)> =
            vec![(start, g.successors(start).collect())];
        mark[start] = Mark::Open;
        while let Some((v, pending)) = stack.last_mut() {
            let v = *v;
            match pending.pop() {
                Some(w) => match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        parent[w] = v;
                        stack.push((w, g.successors(w).collect()));
                    }
                    Mark::Open => {
                        let mut cycle = vec![w];
                        let mut x = v;
                        while x != w {
                            cycle.push(x);
                            x = parent[x];
                        }
                        cycle.reverse();
                        cycle.rotate_right(1);
                        return Err(cycle);
                    }
                    Mark::Done => {}
                },
                None => {
                    mark[v] = Mark::Done;
                    post.push(v);
                    stack.pop();
                }
            }
        }
    }
    post.reverse();
    Ok(post)
}

/// Property (F). On success, `c[v]` is the number of edges on a longest
/// path starting at `v`, so `c[v] > c[w]` on every edge.
pub fn check_f(g: &ReductionGraph) -> Option<Vec<usize>> {
    let order = topological_order(g).ok()?;
    let mut c = vec![0usize; g.vertex_count()];
    for &v in order.iter().rev() {
        c[v] = g.successors(v).map(|w| c[w] + 1).max().unwrap_or(0);
    }
    Some(c)
}

/// Root sets of every vertex, computed in one pass.
pub fn all_roots(g: &ReductionGraph) -> Vec<BTreeSet<VertexId>> {
    match topological_order(g) {
        Ok(order) => {
            let mut roots = vec![BTreeSet::new(); g.vertex_count()];
            for &v in order.iter().rev() {
                if g.is_terminal(v) {
                    roots[v].insert(v);
                } else {
                    let mut acc = BTreeSet::new();
                    for w in g.successors(v) {
                        acc.extend(roots[w].iter().copied());
                    }
                    roots[v] = acc;
                }
            }
            roots
        }
        Err(_) => g.vertices().map(|v| roots_of(g, v)).collect(),
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn classes_with(
    g: &ReductionGraph,
    roots: &[BTreeSet<VertexId>],
    v: VertexId,
) -> Vec<Vec<(VertexId, VertexId)>> {
    let heads: Vec<VertexId> = g.successors(v).collect();
    let mut parent: Vec<usize> = (0..heads.len()).collect();
    // Union edges through each root they reach.
    let mut first_with_root: HashMap<VertexId, usize> = HashMap::new();
    for (i, &h) in heads.iter().enumerate() {
        for &r in &roots[h] {
            match first_with_root.get(&r) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    first_with_root.insert(r, i);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<(VertexId, VertexId)>> = BTreeMap::new();
    for (i, &h) in heads.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push((v, h));
    }
    let mut out: Vec<_> = classes.into_values().collect();
    out.sort();
    out
}

/// Partition of the edges leaving `v` into equivalence classes: two edges
/// are equivalent when a chain of edges out of `v` joins them, each
/// consecutive pair of heads sharing a root.
pub fn edge_classes(g: &ReductionGraph, v: VertexId) -> Vec<Vec<(VertexId, VertexId)>> {
    let mut roots = vec![BTreeSet::new(); g.vertex_count()];
    for h in g.successors(v) {
        roots[h] = roots_of(g, h);
    }
    classes_with(g, &roots, v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EeVerdict {
    pub holds: bool,
    /// First vertex (by id) whose outgoing edges split into several classes.
    pub witness: Option<VertexId>,
}

/// Precomputed root sets, reused across (EE) queries.
pub struct RootIndex<'g> {
    graph: &'g ReductionGraph,
    roots: Vec<BTreeSet<VertexId>>,
}

impl<'g> RootIndex<'g> {
    pub fn new(graph: &'g ReductionGraph) -> Self {
        Self {
            graph,
            roots: all_roots(graph),
        }
    }

    pub fn roots(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.roots[v]
    }

    pub fn into_roots(self) -> Vec<BTreeSet<VertexId>> {
        self.roots
    }

    pub fn edge_classes(&self, v: VertexId) -> Vec<Vec<(VertexId, VertexId)>> {
        classes_with(self.graph, &self.roots, v)
    }

    pub fn check_ee(&self) -> EeVerdict {
        let witness = self
            .graph
            .vertices()
            .filter(|&v| self.graph.out_degree(v) >= 2)
            .find(|&v| self.edge_classes(v).len() > 1);
        EeVerdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

pub fn check_ee(g: &ReductionGraph) -> EeVerdict {
    RootIndex::new(g).check_ee()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    /// A directed cycle, listed in path order.
    Cycle { vertices: Vec<String> },
    /// A vertex whose outgoing edges are not all equivalent.
    InequivalentEdges { vertex: String, classes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RootReport {
    pub per_vertex_roots: BTreeMap<String, BTreeSet<String>>,
    pub f_holds: bool,
    pub ee_holds: bool,
    pub c_values: Option<BTreeMap<String, usize>>,
    pub violation: Option<Violation>,
}

impl RootReport {
    pub fn all_roots_unique(&self) -> bool {
        self.per_vertex_roots.values().all(|r| r.len() == 1)
    }
}

/// Runs the full analysis. When (F) and (EE) both hold, every root set must
/// be a singleton; anything else is reported as [`RootsError::Inconsistent`].
pub fn verify_diamond(g: &ReductionGraph) -> Result<RootReport, RootsError> {
    let order = topological_order(g);
    let c = check_f(g);
    let index = RootIndex::new(g);
    let ee = index.check_ee();
    let f_holds = c.is_some();

    let violation = match (&order, ee.witness) {
        (Err(cycle), _) => Some(Violation::Cycle {
            vertices: cycle.iter().map(|&v| g.name(v).to_string()).collect(),
        }),
        (Ok(_), Some(v)) => Some(Violation::InequivalentEdges {
            vertex: g.name(v).to_string(),
            classes: index.edge_classes(v).len(),
        }),
        (Ok(_), None) => None,
    };

    if f_holds && ee.holds {
        if let Some(v) = g.vertices().find(|&v| index.roots(v).len() != 1) {
            return Err(RootsError::Inconsistent {
                vertex: g.name(v).to_string(),
                roots: index.roots(v).len(),
            });
        }
    }

    let name_set = |s: &BTreeSet<VertexId>| s.iter().map(|&w| g.name(w).to_string()).collect();
    Ok(RootReport {
        per_vertex_roots: g
            .vertices()
            .map(|v| (g.name(v).to_string(), name_set(index.roots(v))))
            .collect(),
        f_holds,
        ee_holds: ee.holds,
        c_values: c.map(|c| {
            g.vertices()
                .map(|v| (g.name(v).to_string(), c[v]))
                .collect()
        }),
        violation,
    })
}

/// Random DAG on `0..n` with each forward edge `i → j` (`i < j`) kept
/// independently with probability `p`. Deterministic in `(n, p, seed)`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Result<ReductionGraph, RootsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RootsError::BadProbability(p));
    }
    if n == 0 {
        return Err(RootsError::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ReductionGraph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}"))?;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzCounterexample {
    pub seed: u64,
    pub vertices: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzSummary {
    pub graphs: usize,
    pub ee_pass: usize,
    pub non_unique: usize,
    pub counterexamples: Vec<FuzzCounterexample>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks the unique-root theorem on `count` random DAGs. Graph `i` uses
/// seed `seed + i` and a vertex count drawn from `1..=max_vertices`.
pub fn fuzz(count: usize, max_vertices: usize, p: f64, seed: u64) -> Result<FuzzSummary, RootsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RootsError::BadProbability(p));
    }
    if max_vertices == 0 {
        return Err(RootsError::EmptyGraph);
    }
    let results: Vec<(bool, bool, Option<FuzzCounterexample>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let graph_seed = seed.wrapping_add(i);
            let n = ChaCha8Rng::seed_from_u64(graph_seed ^ 0x9e37_79b9_7f4a_7c15)
                .gen_range(1..=max_vertices);
            let g = random_dag(n, p, graph_seed).expect("validated parameters");
            let index = RootIndex::new(&g);
            let ee = index.check_ee().holds;
            let unique = g.vertices().all(|v| index.roots(v).len() == 1);
            let f = check_f(&g).is_some();
            let reason = if !f {
                Some("generated graph has a cycle".to_string())
            } else if ee && !unique {
                Some("(EE) holds but some vertex has several roots".to_string())
            } else {
                None
            };
            let cex = reason.map(|reason| FuzzCounterexample {
                seed: graph_seed,
                vertices: n,
                reason,
            });
            (ee, !unique, cex)
        })
        .collect();
    let mut summary = FuzzSummary {
        graphs: count,
        ..FuzzSummary::default()
    };
    for (ee, non_unique, cex) in results {
        summary.ee_pass += ee as usize;
        summary.non_unique += non_unique as usize;
        summary.counterexamples.extend(cex);
    }
    Ok(summary)
}
