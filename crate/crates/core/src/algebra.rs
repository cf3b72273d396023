//! Free-generator model of the semigroups of theta-curves, knots and
//! 3-manifolds.
//!
//! Every element is stored in its canonical normal form:
//!
//! * a manifold is a multiset of prime manifolds (empty = `S³`);
//! * a knot is a multiset of knot-hat primes (knots with irreducible
//!   complement) together with a manifold part (its flat summands);
//! * a theta-curve is an ordered word of theta-hat primes together with
//!   four central multisets: one knot multiset per edge label and one
//!   manifold multiset.
//!
//! The theta-hat word multiplies freely; everything else is central. Two
//! elements are equal exactly when their normal forms are equal.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Names that the expression syntax reserves for its own constructors.
pub const RESERVED_NAMES: &[&str] = &["tau", "tau0", "tauM", "flat", "unknot", "S3"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator name must not be empty")]
    EmptyName,
    #[error("`{0}` is not a valid generator name")]
    InvalidName(String),
    #[error("generator `{0}` is already declared")]
    DuplicateName(String),
    #[error("the trivial theta-curve has no prime factorization")]
    TrivialInput,
}

/// Edge label of a theta-curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Minus,
    Zero,
    Plus,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Minus, Label::Zero, Label::Plus];

    pub fn symbol(self) -> char {
        match self {
            Label::Minus => '-',
            Label::Zero => '0',
            Label::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Label> {
        match c {
            '-' => Some(Label::Minus),
            '0' => Some(Label::Zero),
            '+' => Some(Label::Plus),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Label::Minus => "-",
            Label::Zero => "0",
            Label::Plus => "+",
        })
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Label::from_symbol), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(serde::de::Error::custom(format!(
                "invalid label `{s}`, expected one of -, 0, +"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    ThetaHatPrime,
    KnotHatPrime,
    ManifoldPrime,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::ThetaHatPrime => "theta-hat prime",
            GeneratorKind::KnotHatPrime => "knot-hat prime",
            GeneratorKind::ManifoldPrime => "manifold prime",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeGenerator {
    pub name: String,
    pub kind: GeneratorKind,
}

impl PrimeGenerator {
    /// The generator as an element of its own semigroup, lifted into `U`.
    /// Knot-hat primes are given the label `0`.
    pub fn element(&self) -> UElement {
        match self.kind {
            GeneratorKind::ThetaHatPrime => UElement::Theta(ThetaNF::hat_prime(&self.name)),
            GeneratorKind::KnotHatPrime => {
                UElement::LabeledKnot(Label::Zero, KnotNF::prime(&self.name))
            }
            GeneratorKind::ManifoldPrime => UElement::Manifold(ManifoldNF::prime(&self.name)),
        }
    }
}

/// Table of declared generators. Append-only; share it by reference once
/// declaration is finished.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    kinds: BTreeMap<String, GeneratorKind>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_prime(
        &mut self,
        name: &str,
        kind: GeneratorKind,
    ) -> Result<PrimeGenerator, AlgebraError> {
        if name.is_empty() {
            return Err(AlgebraError::EmptyName);
        }
        if !is_identifier(name) || RESERVED_NAMES.contains(&name) {
            return Err(AlgebraError::InvalidName(name.to_string()));
        }
        if self.kinds.contains_key(name) {
            return Err(AlgebraError::DuplicateName(name.to_string()));
        }
        self.kinds.insert(name.to_string(), kind);
        Ok(PrimeGenerator {
            name: name.to_string(),
            kind,
        })
    }

    pub fn kind_of(&self, name: &str) -> Option<GeneratorKind> {
        self.kinds.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<PrimeGenerator> {
        self.kind_of(name).map(|kind| PrimeGenerator {
            name: name.to_string(),
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = PrimeGenerator> + '_ {
        self.kinds.iter().map(|(name, &kind)| PrimeGenerator {
            name: name.clone(),
            kind,
        })
    }

    pub fn names_of_kind(&self, kind: GeneratorKind) -> Vec<String> {
        self.kinds
            .iter()
            .filter(|(_, &k)| k == kind)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn from_manifest(manifest: &PrimesManifest) -> Result<Self, AlgebraError> {
        let mut registry = Registry::new();
        for name in &manifest.theta {
            registry.declare_prime(name, GeneratorKind::ThetaHatPrime)?;
        }
        for name in &manifest.knot {
            registry.declare_prime(name, GeneratorKind::KnotHatPrime)?;
        }
        for name in &manifest.manifold {
            registry.declare_prime(name, GeneratorKind::ManifoldPrime)?;
        }
        Ok(registry)
    }

    pub fn to_manifest(&self) -> PrimesManifest {
        PrimesManifest {
            theta: self.names_of_kind(GeneratorKind::ThetaHatPrime),
            knot: self.names_of_kind(GeneratorKind::KnotHatPrime),
            manifold: self.names_of_kind(GeneratorKind::ManifoldPrime),
        }
    }
}

/// On-disk list of primes: `{"theta":[..],"knot":[..],"manifold":[..]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimesManifest {
    #[serde(default)]
    pub theta: Vec<String>,
    #[serde(default)]
    pub knot: Vec<String>,
    #[serde(default)]
    pub manifold: Vec<String>,
}

/// Finite multiset of generator names, kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset(BTreeMap<String, u32>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(name: &str) -> Self {
        let mut m = Self::new();
        m.insert(name, 1);
        m
    }

    pub fn insert(&mut self, name: &str, count: u32) {
        if count > 0 {
            *self.0.entry(name.to_string()).or_insert(0) += count;
        }
    }

    pub fn count(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    /// Total number of elements, with multiplicity.
    pub fn total(&self) -> usize {
        self.0.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(name, multiplicity)` pairs in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.0.iter().map(|(n, &c)| (n.as_str(), c))
    }

    /// Every element, repeated by multiplicity, in name order.
    pub fn elements(&self) -> impl Iterator<Item = &str> + '_ {
        self.0
            .iter()
            .flat_map(|(n, &c)| std::iter::repeat_n(n.as_str(), c as usize))
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (name, count) in other.iter() {
            out.insert(name, count);
        }
        out
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        self.iter().all(|(n, c)| other.count(n) >= c)
    }

    /// `self − sub`; `None` unless `sub` is a submultiset of `self`.
    pub fn difference(&self, sub: &Multiset) -> Option<Multiset> {
        let mut out = self.0.clone();
        for (name, count) in sub.iter() {
            let have = out.get_mut(name)?;
            if *have < count {
                return None;
            }
            *have -= count;
            if *have == 0 {
                out.remove(name);
            }
        }
        Some(Multiset(out))
    }

    /// All submultisets, including the empty one and `self`.
    pub fn submultisets(&self) -> Vec<Multiset> {
        let mut out = vec![Multiset::new()];
        for (name, count) in self.iter() {
            let mut next = Vec::with_capacity(out.len() * (count as usize + 1));
            for base in &out {
                for c in 0..=count {
                    let mut m = base.clone();
                    m.insert(name, c);
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }
}

impl<'a> FromIterator<&'a str> for Multiset {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for name in iter {
            m.insert(name, 1);
        }
        m
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, u32>::deserialize(d)?;
        for (name, &count) in &raw {
            if name.is_empty() {
                return Err(serde::de::Error::custom("empty generator name in multiset"));
            }
            if count == 0 {
                return Err(serde::de::Error::custom(format!(
                    "multiplicity of `{name}` must be positive"
                )));
            }
        }
        Ok(Multiset(raw))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (name, count)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if count == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{count}")?;
            }
        }
        f.write_str("}")
    }
}

/// A closed 3-manifold as a connected sum of primes; empty is `S³`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManifoldNF {
    pub summands: Multiset,
}

impl ManifoldNF {
    pub fn s3() -> Self {
        Self::default()
    }

    pub fn prime(name: &str) -> Self {
        Self {
            summands: Multiset::singleton(name),
        }
    }

    pub fn from_summands(summands: Multiset) -> Self {
        Self { summands }
    }

    pub fn connected_sum(&self, other: &ManifoldNF) -> ManifoldNF {
        ManifoldNF {
            summands: self.summands.union(&other.summands),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn prime_count(&self) -> usize {
        self.summands.total()
    }
}

pub fn connected_sum_manifold(m1: &ManifoldNF, m2: &ManifoldNF) -> ManifoldNF {
    m1.connected_sum(m2)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifoldDoc {
    #[serde(default)]
    manifolds: Multiset,
}

impl Serialize for ManifoldNF {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ManifoldDoc {
            manifolds: self.summands.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ManifoldNF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(ManifoldNF::from_summands(ManifoldDoc::deserialize(d)?.manifolds))
    }
}

impl fmt::Display for ManifoldNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("S3");
        }
        join_hash(f, self.summands.elements().map(str::to_string))
    }
}

fn join_hash(f: &mut fmt::Formatter<'_>, parts: impl Iterator<Item = String>) -> fmt::Result {
    for (i, p) in parts.enumerate() {
        if i > 0 {
            f.write_str(" # ")?;
        }
        f.write_str(&p)?;
    }
    Ok(())
}

/// A knot `(Q, K)`: knot-hat primes plus the flat summands carrying `Q`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnotNF {
    pub knot_part: Multiset,
    pub manifold_part: ManifoldNF,
}

impl KnotNF {
    pub fn unknot() -> Self {
        Self::default()
    }

    pub fn prime(name: &str) -> Self {
        Self {
            knot_part: Multiset::singleton(name),
            manifold_part: ManifoldNF::s3(),
        }
    }

    pub fn new(knot_part: Multiset, manifold_part: ManifoldNF) -> Self {
        Self {
            knot_part,
            manifold_part,
        }
    }

    pub fn connected_sum(&self, other: &KnotNF) -> KnotNF {
        KnotNF {
            knot_part: self.knot_part.union(&other.knot_part),
            manifold_part: self.manifold_part.connected_sum(&other.manifold_part),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.knot_part.is_empty() && self.manifold_part.is_trivial()
    }

    /// Flat means the knot bounds a disc: no knot-hat summands.
    pub fn is_flat(&self) -> bool {
        self.knot_part.is_empty()
    }

    pub fn prime_count(&self) -> usize {
        self.knot_part.total() + self.manifold_part.prime_count()
    }

    /// Prime summands in canonical order: knot-hat primes, then flat knots
    /// in prime manifolds.
    pub fn prime_factors(&self) -> Vec<KnotNF> {
        self.knot_part
            .elements()
            .map(KnotNF::prime)
            .chain(
                self.manifold_part
                    .summands
                    .elements()
                    .map(|p| flat_knot(&ManifoldNF::prime(p))),
            )
            .collect()
    }
}

pub fn connected_sum_knot(k1: &KnotNF, k2: &KnotNF) -> KnotNF {
    k1.connected_sum(k2)
}

/// The unknot in `m`.
pub fn flat_knot(m: &ManifoldNF) -> KnotNF {
    KnotNF {
        knot_part: Multiset::new(),
        manifold_part: m.clone(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotDoc {
    #[serde(default)]
    knots: Multiset,
    #[serde(default)]
    manifolds: Multiset,
}

impl Serialize for KnotNF {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KnotDoc {
            knots: self.knot_part.clone(),
            manifolds: self.manifold_part.summands.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KnotNF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = KnotDoc::deserialize(d)?;
        Ok(KnotNF::new(doc.knots, ManifoldNF::from_summands(doc.manifolds)))
    }
}

impl fmt::Display for KnotNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("unknot");
        }
        let knots = self.knot_part.elements().map(str::to_string);
        let flats = if self.manifold_part.is_trivial() {
            None
        } else {
            Some(format!("flat({})", self.manifold_part))
        };
        join_hash(f, knots.chain(flats))
    }
}

/// Knot-hat multisets indexed by edge label.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnotCenter([Multiset; 3]);

impl KnotCenter {
    pub fn get(&self, label: Label) -> &Multiset {
        &self.0[label.index()]
    }

    pub fn get_mut(&mut self, label: Label) -> &mut Multiset {
        &mut self.0[label.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(Multiset::is_empty)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(Multiset::total).sum()
    }

    pub fn union(&self, other: &KnotCenter) -> KnotCenter {
        KnotCenter([
            self.0[0].union(&other.0[0]),
            self.0[1].union(&other.0[1]),
            self.0[2].union(&other.0[2]),
        ])
    }

    /// Labels whose multiset is nonempty.
    pub fn occupied(&self) -> impl Iterator<Item = Label> + '_ {
        Label::ALL
            .into_iter()
            .filter(move |&l| !self.get(l).is_empty())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotCenterDoc {
    #[serde(rename = "-", default)]
    minus: Multiset,
    #[serde(rename = "0", default)]
    zero: Multiset,
    #[serde(rename = "+", default)]
    plus: Multiset,
}

impl Serialize for KnotCenter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [minus, zero, plus] = self.0.clone();
        KnotCenterDoc { minus, zero, plus }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KnotCenter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = KnotCenterDoc::deserialize(d)?;
        Ok(KnotCenter([doc.minus, doc.zero, doc.plus]))
    }
}

/// A theta-curve `(M, Θ)` in normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaNF {
    pub hat: Vec<String>,
    pub knot_center: KnotCenter,
    pub manifold_center: ManifoldNF,
}

impl ThetaNF {
    /// The trivial theta-curve, unit of the vertex product.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn hat_prime(name: &str) -> Self {
        Self {
            hat: vec![name.to_string()],
            ..Self::default()
        }
    }

    pub fn from_hat<S: AsRef<str>>(names: &[S]) -> Self {
        Self {
            hat: names.iter().map(|n| n.as_ref().to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn vertex_product(&self, other: &ThetaNF) -> ThetaNF {
        let mut hat = self.hat.clone();
        hat.extend(other.hat.iter().cloned());
        ThetaNF {
            hat,
            knot_center: self.knot_center.union(&other.knot_center),
            manifold_center: self.manifold_center.connected_sum(&other.manifold_center),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.hat.is_empty() && self.knot_center.is_empty() && self.manifold_center.is_trivial()
    }

    /// In the image of some `τ_i`: no theta-hat primes and knots on at
    /// most one edge.
    pub fn is_knot_like(&self) -> bool {
        self.hat.is_empty() && self.knot_center.occupied().count() <= 1
    }

    /// For a knot-like theta-curve, a label `i` and knot `k` with
    /// `τ_i(k) = self`. When no edge is knotted the label is `0`.
    pub fn as_knot_like(&self) -> Option<(Label, KnotNF)> {
        if !self.is_knot_like() {
            return None;
        }
        let label = self.knot_center.occupied().next().unwrap_or(Label::Zero);
        Some((
            label,
            KnotNF::new(
                self.knot_center.get(label).clone(),
                self.manifold_center.clone(),
            ),
        ))
    }

    pub fn prime_count(&self) -> usize {
        self.hat.len() + self.knot_center.total() + self.manifold_center.prime_count()
    }

    /// Ordered prime factors: theta-hat primes in order, then knot-like
    /// factors by label (`-`, `0`, `+`) and name, then `τ(P)` factors.
    pub fn prime_factorization(&self) -> Result<Vec<ThetaNF>, AlgebraError> {
        if self.is_trivial() {
            return Err(AlgebraError::TrivialInput);
        }
        let mut factors: Vec<ThetaNF> = self.hat.iter().map(|n| ThetaNF::hat_prime(n)).collect();
        for label in Label::ALL {
            for name in self.knot_center.get(label).elements() {
                factors.push(tau_label(label, &KnotNF::prime(name)));
            }
        }
        for name in self.manifold_center.summands.elements() {
            factors.push(tau_manifold(&ManifoldNF::prime(name)));
        }
        Ok(factors)
    }
}

pub fn vertex_product(t1: &ThetaNF, t2: &ThetaNF) -> ThetaNF {
    t1.vertex_product(t2)
}

/// Ordered product of a sequence; the empty product is trivial.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a ThetaNF>) -> ThetaNF {
    factors
        .into_iter()
        .fold(ThetaNF::trivial(), |acc, t| acc.vertex_product(t))
}

/// `τ_i(k)`: the trivial theta-curve with `k` tied into the edge labelled `i`.
pub fn tau_label(label: Label, k: &KnotNF) -> ThetaNF {
    let mut center = KnotCenter::default();
    *center.get_mut(label) = k.knot_part.clone();
    ThetaNF {
        hat: Vec::new(),
        knot_center: center,
        manifold_center: k.manifold_part.clone(),
    }
}

/// `τ(M)`: a flat theta-curve in `M`.
pub fn tau_manifold(m: &ManifoldNF) -> ThetaNF {
    ThetaNF {
        manifold_center: m.clone(),
        ..ThetaNF::default()
    }
}

/// Knot insertion `τ_i(k) ∘ θ`.
pub fn knot_insertion(theta: &ThetaNF, label: Label, k: &KnotNF) -> ThetaNF {
    tau_label(label, k).vertex_product(theta)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaDoc {
    #[serde(default)]
    hat: Vec<String>,
    #[serde(default)]
    knots: KnotCenter,
    #[serde(default)]
    manifolds: Multiset,
}

impl Serialize for ThetaNF {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ThetaDoc {
            hat: self.hat.clone(),
            knots: self.knot_center.clone(),
            manifolds: self.manifold_center.summands.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaNF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ThetaDoc::deserialize(d)?;
        if doc.hat.iter().any(String::is_empty) {
            return Err(serde::de::Error::custom("empty generator name in hat"));
        }
        Ok(ThetaNF {
            hat: doc.hat,
            knot_center: doc.knots,
            manifold_center: ManifoldNF::from_summands(doc.manifolds),
        })
    }
}

impl fmt::Display for ThetaNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = self.hat.clone();
        for label in self.knot_center.occupied() {
            let k = KnotNF::new(self.knot_center.get(label).clone(), ManifoldNF::s3());
            parts.push(format!("tau{label}({k})"));
        }
        if !self.manifold_center.is_trivial() {
            parts.push(format!("tauM({})", self.manifold_center));
        }
        f.write_str(&parts.join(" * "))
    }
}

/// An element of `U = T ⊔ K₋ ⊔ K₀ ⊔ K₊ ⊔ M`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum UElement {
    Theta(ThetaNF),
    LabeledKnot(Label, KnotNF),
    Manifold(ManifoldNF),
}

impl UElement {
    pub fn is_trivial(&self) -> bool {
        match self {
            UElement::Theta(t) => t.is_trivial(),
            UElement::LabeledKnot(_, knot) => knot.is_trivial(),
            UElement::Manifold(m) => m.is_trivial(),
        }
    }

    pub fn prime_count(&self) -> usize {
        match self {
            UElement::Theta(t) => t.prime_count(),
            UElement::LabeledKnot(_, knot) => knot.prime_count(),
            UElement::Manifold(m) => m.prime_count(),
        }
    }

    /// Nontrivial with no factorization into two nontrivial elements. In the
    /// free model that is exactly one prime generator.
    pub fn is_prime(&self) -> bool {
        self.prime_count() == 1
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UElement::Theta(t) => write!(f, "{t}"),
            UElement::LabeledKnot(label, knot) => write!(f, "[{label}] {knot}"),
            UElement::Manifold(m) => write!(f, "{m}"),
        }
    }
}

pub fn is_trivial(u: &UElement) -> bool {
    u.is_trivial()
}

pub fn is_prime(u: &UElement) -> bool {
    u.is_prime()
}

pub fn is_knot_like(t: &ThetaNF) -> bool {
    t.is_knot_like()
}

pub fn prime_factorization(t: &ThetaNF) -> Result<Vec<ThetaNF>, AlgebraError> {
    t.prime_factorization()
}

/// Homeomorphism-class equality in the free model.
pub fn equals(u1: &UElement, u2: &UElement) -> bool {
    u1 == u2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(names: &[&str]) -> Multiset {
        names.iter().copied().collect()
    }

    fn k(name: &str) -> KnotNF {
        KnotNF::prime(name)
    }

    fn p(name: &str) -> ManifoldNF {
        ManifoldNF::prime(name)
    }

    fn a() -> ThetaNF {
        ThetaNF::hat_prime("A")
    }

    #[test]
    fn declare_prime_registers_and_rejects_duplicates() {
        let mut reg = Registry::new();
        let g = reg.declare_prime("A", GeneratorKind::ThetaHatPrime).unwrap();
        assert_eq!(g.name, "A");
        assert_eq!(g.kind, GeneratorKind::ThetaHatPrime);
        assert_eq!(
            reg.declare_prime("A", GeneratorKind::ThetaHatPrime),
            Err(AlgebraError::DuplicateName("A".into()))
        );
        // Same name with another kind is still a duplicate.
        assert!(reg.declare_prime("A", GeneratorKind::KnotHatPrime).is_err());
        let k = reg.declare_prime("k", GeneratorKind::KnotHatPrime).unwrap();
        assert_eq!(k.kind, GeneratorKind::KnotHatPrime);
        assert_eq!(reg.kind_of("k"), Some(GeneratorKind::KnotHatPrime));
        assert_eq!(reg.len(), 2);
    }

    #[test]
    fn declare_prime_rejects_bad_names() {
        let mut reg = Registry::new();
        assert_eq!(
            reg.declare_prime("", GeneratorKind::ManifoldPrime),
            Err(AlgebraError::EmptyName)
        );
        for bad in ["tau0", "S3", "flat", "1x", "a-b", "tauM"] {
            assert!(matches!(
                reg.declare_prime(bad, GeneratorKind::ManifoldPrime),
                Err(AlgebraError::InvalidName(_))
            ));
        }
    }

    #[test]
    fn manifest_round_trip() {
        let manifest: PrimesManifest = serde_json::from_str(
            r#"{"theta":["A","B"],"knot":["k","l"],"manifold":["P","Q"]}"#,
        )
        .unwrap();
        let reg = Registry::from_manifest(&manifest).unwrap();
        assert_eq!(reg.len(), 6);
        assert_eq!(reg.to_manifest(), manifest);
        let dup = PrimesManifest {
            theta: vec!["A".into()],
            knot: vec!["A".into()],
            manifold: vec![],
        };
        assert!(Registry::from_manifest(&dup).is_err());
    }

    #[test]
    fn vertex_product_examples() {
        let theta = ThetaNF::from_hat(&["A", "B"]);
        assert_eq!(ThetaNF::trivial().vertex_product(&theta), theta);
        assert_eq!(theta.vertex_product(&ThetaNF::trivial()), theta);
        assert_eq!(theta.vertex_product(&a()).hat, vec!["A", "B", "A"]);
        let t0 = tau_label(Label::Zero, &k("k"));
        assert_eq!(t0.vertex_product(&a()), a().vertex_product(&t0));
    }

    #[test]
    fn connected_sum_examples() {
        let kl = k("k").connected_sum(&k("l"));
        assert_eq!(KnotNF::unknot().connected_sum(&k("k")), k("k"));
        assert_eq!(kl, k("l").connected_sum(&k("k")));
        let sum = kl.connected_sum(&k("k"));
        assert_eq!(sum.knot_part.count("k"), 2);
        assert_eq!(sum.knot_part.count("l"), 1);

        assert_eq!(ManifoldNF::s3().connected_sum(&p("P")), p("P"));
        assert_eq!(p("P").connected_sum(&p("Q")), p("Q").connected_sum(&p("P")));
        let m = p("P").connected_sum(&p("P")).connected_sum(&p("Q"));
        assert_eq!(m.summands, ms(&["P", "P", "Q"]));
    }

    #[test]
    fn tau_examples() {
        assert!(tau_label(Label::Zero, &KnotNF::unknot()).is_trivial());
        let kl = k("k").connected_sum(&k("l"));
        assert_eq!(
            tau_label(Label::Zero, &kl),
            tau_label(Label::Zero, &k("k")).vertex_product(&tau_label(Label::Zero, &k("l")))
        );
        assert_eq!(
            tau_label(Label::Plus, &flat_knot(&p("P"))),
            tau_manifold(&p("P"))
        );
        assert!(tau_manifold(&ManifoldNF::s3()).is_trivial());
        let pq = p("P").connected_sum(&p("Q"));
        assert_eq!(
            tau_manifold(&pq),
            tau_manifold(&p("P")).vertex_product(&tau_manifold(&p("Q")))
        );
        assert!(tau_manifold(&p("P")).is_knot_like());
    }

    #[test]
    fn flat_knot_examples() {
        assert!(flat_knot(&ManifoldNF::s3()).is_trivial());
        let fp = flat_knot(&p("P"));
        assert!(!fp.is_trivial());
        assert!(fp.knot_part.is_empty());
        let pq = p("P").connected_sum(&p("Q"));
        assert_eq!(flat_knot(&pq), flat_knot(&p("P")).connected_sum(&flat_knot(&p("Q"))));
    }

    #[test]
    fn knot_insertion_examples() {
        assert_eq!(
            knot_insertion(&ThetaNF::trivial(), Label::Zero, &k("k")),
            tau_label(Label::Zero, &k("k"))
        );
        let t = knot_insertion(&a(), Label::Zero, &k("k"));
        assert_eq!(t.hat, vec!["A"]);
        assert_eq!(t.knot_center.get(Label::Zero), &ms(&["k"]));
        assert_eq!(t, a().vertex_product(&tau_label(Label::Zero, &k("k"))));
    }

    #[test]
    fn triviality_examples() {
        assert!(UElement::Theta(ThetaNF::trivial()).is_trivial());
        assert!(!UElement::Manifold(p("P")).is_trivial());
        assert!(!UElement::LabeledKnot(Label::Zero, flat_knot(&p("P"))).is_trivial());
    }

    #[test]
    fn knot_like_examples() {
        assert!(tau_label(Label::Zero, &k("k")).is_knot_like());
        let two = tau_label(Label::Minus, &k("k")).vertex_product(&tau_label(Label::Zero, &k("l")));
        assert!(!two.is_knot_like());
        assert!(tau_manifold(&p("P")).is_knot_like());
        assert!(!a().is_knot_like());
        let (label, knot) = tau_label(Label::Plus, &k("k")).as_knot_like().unwrap();
        assert_eq!((label, knot), (Label::Plus, k("k")));
    }

    /// Decides knot-likeness straight from the definition: search for a
    /// label and a knot built from the element's own generators whose image
    /// under `τ_i` is the element.
    fn knot_like_by_search(t: &ThetaNF) -> bool {
        let mut pool = Multiset::new();
        for label in Label::ALL {
            pool = pool.union(t.knot_center.get(label));
        }
        let knots: Vec<KnotNF> = pool
            .submultisets()
            .into_iter()
            .flat_map(|kp| {
                t.manifold_center
                    .summands
                    .submultisets()
                    .into_iter()
                    .map(move |mp| KnotNF::new(kp.clone(), ManifoldNF::from_summands(mp)))
            })
            .collect();
        Label::ALL
            .iter()
            .any(|&l| knots.iter().any(|kn| &tau_label(l, kn) == t))
    }

    #[test]
    fn knot_like_characterization_matches_search() {
        let samples = [
            tau_label(Label::Minus, &k("k")).vertex_product(&tau_label(Label::Zero, &k("l"))),
            tau_label(Label::Zero, &k("k").connected_sum(&flat_knot(&p("P")))),
            tau_manifold(&p("P")),
            ThetaNF::trivial(),
            a().vertex_product(&tau_label(Label::Zero, &k("k"))),
            tau_label(Label::Plus, &k("k"))
                .vertex_product(&tau_label(Label::Plus, &k("l")))
                .vertex_product(&tau_manifold(&p("Q"))),
        ];
        for t in &samples {
            assert_eq!(t.is_knot_like(), knot_like_by_search(t), "{t}");
        }
    }

    #[test]
    fn primality_examples() {
        assert!(UElement::Theta(a()).is_prime());
        let kl = k("k").connected_sum(&k("l"));
        assert!(!UElement::Theta(tau_label(Label::Zero, &kl)).is_prime());
        for knot in [k("k"), kl, flat_knot(&p("P")), KnotNF::unknot()] {
            assert_eq!(
                UElement::LabeledKnot(Label::Zero, knot.clone()).is_prime(),
                UElement::Theta(tau_label(Label::Zero, &knot)).is_prime()
            );
        }
    }

    #[test]
    fn factorization_examples() {
        let ab = ThetaNF::from_hat(&["A", "B"]);
        assert_eq!(
            ab.prime_factorization().unwrap(),
            vec![a(), ThetaNF::hat_prime("B")]
        );
        let kl = k("k").connected_sum(&k("l"));
        assert_eq!(
            tau_label(Label::Zero, &kl).prime_factorization().unwrap(),
            vec![tau_label(Label::Zero, &k("k")), tau_label(Label::Zero, &k("l"))]
        );
        let t = knot_insertion(&a(), Label::Zero, &k("k"));
        let factors = t.prime_factorization().unwrap();
        assert_eq!(factors, vec![a(), tau_label(Label::Zero, &k("k"))]);
        assert_eq!(product(&factors), t);
        assert_eq!(
            ThetaNF::trivial().prime_factorization(),
            Err(AlgebraError::TrivialInput)
        );
    }

    #[test]
    fn factorization_canonical_order() {
        let t = tau_manifold(&p("Q"))
            .vertex_product(&tau_label(Label::Plus, &k("m")))
            .vertex_product(&ThetaNF::hat_prime("B"))
            .vertex_product(&tau_label(Label::Minus, &k("l")))
            .vertex_product(&a())
            .vertex_product(&tau_label(Label::Minus, &k("k")));
        let rendered: Vec<String> = t
            .prime_factorization()
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            rendered,
            vec!["B", "A", "tau-(k)", "tau-(l)", "tau+(m)", "tauM(Q)"]
        );
    }

    #[test]
    fn equality_examples() {
        let t0 = tau_label(Label::Zero, &k("k"));
        assert!(equals(&UElement::Theta(t0.vertex_product(&a())), &UElement::Theta(a().vertex_product(&t0))));
        assert!(!equals(
            &UElement::Theta(ThetaNF::from_hat(&["A", "B"])),
            &UElement::Theta(ThetaNF::from_hat(&["B", "A"]))
        ));
        // A flat knot in P is not the manifold P.
        assert_ne!(
            UElement::LabeledKnot(Label::Zero, flat_knot(&p("P"))),
            UElement::Manifold(p("P"))
        );
    }

    #[test]
    fn json_forms() {
        let t = ThetaNF::from_hat(&["A", "B"])
            .vertex_product(&tau_label(Label::Zero, &k("k")))
            .vertex_product(&tau_manifold(&p("P").connected_sum(&p("P"))));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"hat":["A","B"],"knots":{"-":{},"0":{"k":1},"+":{}},"manifolds":{"P":2}}"#
        );
        assert_eq!(serde_json::from_str::<ThetaNF>(&json).unwrap(), t);
        assert_eq!(
            serde_json::to_string(&k("k")).unwrap(),
            r#"{"knots":{"k":1},"manifolds":{}}"#
        );
        assert_eq!(
            serde_json::to_string(&ManifoldNF::s3()).unwrap(),
            r#"{"manifolds":{}}"#
        );
        // Absent keys mean zero.
        let sparse: ThetaNF = serde_json::from_str(r#"{"hat":["A"],"knots":{"0":{"k":1}}}"#).unwrap();
        assert_eq!(sparse, knot_insertion(&a(), Label::Zero, &k("k")));
        assert!(serde_json::from_str::<KnotNF>(r#"{"knots":{"k":0},"manifolds":{}}"#).is_err());
        assert!(serde_json::from_str::<ThetaNF>(r#"{"hat":[],"knots":{"x":{}}}"#).is_err());
    }

    #[test]
    fn submultisets_enumerates_all() {
        let m = ms(&["P", "P", "Q"]);
        let subs = m.submultisets();
        assert_eq!(subs.len(), 3 * 2);
        assert!(subs.iter().all(|s| s.is_submultiset_of(&m)));
        let rest = m.difference(&ms(&["P", "Q"])).unwrap();
        assert_eq!(rest, ms(&["P"]));
        assert!(m.difference(&ms(&["Q", "Q"])).is_none());
    }
}
