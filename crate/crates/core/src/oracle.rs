//! Brute-force equality of prime words.
//!
//! A [`FactorWord`] lists prime theta-curves whose ordered vertex product
//! is the element. Two words denote the same theta-curve exactly when one
//! can be turned into the other by swapping adjacent letters, at least one
//! of which is knot-like. This module decides that by breadth-first search
//! over the permutations, independently of the normal forms in
//! [`crate::algebra`], and is meant to certify them.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algebra::{tau_label, tau_manifold, KnotNF, Label, ManifoldNF, ThetaNF};
use crate::expr::{Expression, KnotExpr, ManifoldExpr, ThetaExpr};

pub const DEFAULT_CAP: usize = 10;
/// Longest word the packed search state can hold.
pub const MAX_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("word of length {len} exceeds the search cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("search cap {0} is larger than the supported maximum {MAX_CAP}")]
    CapTooLarge(usize),
    #[error("expression denotes a {0}, not a theta-curve")]
    WrongSort(&'static str),
}

/// A prime theta-curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Hat(String),
    CentralKnot(Label, String),
    CentralManifold(String),
}

impl Letter {
    /// Knot-like letters commute with everything.
    pub fn is_central(&self) -> bool {
        !matches!(self, Letter::Hat(_))
    }

    pub fn to_theta(&self) -> ThetaNF {
        match self {
            Letter::Hat(n) => ThetaNF::hat_prime(n),
            Letter::CentralKnot(l, n) => tau_label(*l, &KnotNF::prime(n)),
            Letter::CentralManifold(n) => tau_manifold(&ManifoldNF::prime(n)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Hat(n) => f.write_str(n),
            Letter::CentralKnot(l, n) => write!(f, "tau{l}({n})"),
            Letter::CentralManifold(n) => write!(f, "tauM({n})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactorWord(pub Vec<Letter>);

impl FactorWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The ordered vertex product of the letters.
    pub fn product(&self) -> ThetaNF {
        self.0
            .iter()
            .fold(ThetaNF::trivial(), |acc, l| acc.vertex_product(&l.to_theta()))
    }

    pub fn concat(&self, other: &FactorWord) -> FactorWord {
        FactorWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// A theta expression whose flattening is this word.
    pub fn to_expr(&self) -> ThetaExpr {
        let terms: Vec<ThetaExpr> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::Hat(n) => ThetaExpr::Prime(n.clone()),
                Letter::CentralKnot(label, n) => ThetaExpr::Tau(*label, KnotExpr::Prime(n.clone())),
                Letter::CentralManifold(n) => ThetaExpr::TauManifold(ManifoldExpr::Prime(n.clone())),
            })
            .collect();
        match terms.len() {
            0 => ThetaExpr::Trivial,
            1 => terms.into_iter().next().expect("one term"),
            _ => ThetaExpr::Product(terms),
        }
    }
}

impl fmt::Display for FactorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn knot_letters(label: Label, k: &KnotExpr, out: &mut Vec<Letter>) {
    match k {
        KnotExpr::Prime(n) => out.push(Letter::CentralKnot(label, n.clone())),
        KnotExpr::Sum(items) => items.iter().for_each(|i| knot_letters(label, i, out)),
        KnotExpr::Flat(m) => manifold_letters(m, out),
        KnotExpr::Unknot => {}
    }
}

fn manifold_letters(m: &ManifoldExpr, out: &mut Vec<Letter>) {
    match m {
        ManifoldExpr::Prime(n) => out.push(Letter::CentralManifold(n.clone())),
        ManifoldExpr::Sum(items) => items.iter().for_each(|i| manifold_letters(i, out)),
        ManifoldExpr::S3 => {}
    }
}

/// Flattens a theta expression into prime letters. Products keep their
/// order; the primes inside one `tau` are listed in name order.
pub fn word_of_theta(e: &ThetaExpr) -> FactorWord {
    fn go(e: &ThetaExpr, out: &mut Vec<Letter>) {
        match e {
            ThetaExpr::Prime(n) => out.push(Letter::Hat(n.clone())),
            ThetaExpr::Product(items) => items.iter().for_each(|i| go(i, out)),
            ThetaExpr::Tau(label, k) => {
                let mut inner = Vec::new();
                knot_letters(*label, k, &mut inner);
                inner.sort();
                out.extend(inner);
            }
            ThetaExpr::TauManifold(m) => {
                let mut inner = Vec::new();
                manifold_letters(m, &mut inner);
                inner.sort();
                out.extend(inner);
            }
            ThetaExpr::Trivial => {}
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    FactorWord(out)
}

pub fn word_of(e: &Expression) -> Result<FactorWord, OracleError> {
    match e {
        Expression::Theta(t) => Ok(word_of_theta(t)),
        Expression::Knot(_) => Err(OracleError::WrongSort("knot")),
        Expression::Manifold(_) => Err(OracleError::WrongSort("manifold")),
    }
}

pub fn oracle_equal(w1: &FactorWord, w2: &FactorWord) -> Result<bool, OracleError> {
    oracle_equal_with_cap(w1, w2, DEFAULT_CAP)
}

/// True iff `w2` is reachable from `w1` by adjacent transpositions that
/// involve a central letter. Each word may hold at most `cap` letters.
pub fn oracle_equal_with_cap(
    w1: &FactorWord,
    w2: &FactorWord,
    cap: usize,
) -> Result<bool, OracleError> {
    if cap > MAX_CAP {
        return Err(OracleError::CapTooLarge(cap));
    }
    for w in [w1, w2] {
        if w.len() > cap {
            return Err(OracleError::CapExceeded { len: w.len(), cap });
        }
    }
    let mut a = w1.0.clone();
    let mut b = w2.0.clone();
    a.sort();
    b.sort();
    if a != b {
        return Ok(false);
    }

    // Letters become byte codes; a word packs into a u128.
    let mut alphabet = a;
    alphabet.dedup();
    let code = |l: &Letter| alphabet.binary_search(l).expect("letter in alphabet") as u8;
    let central: Vec<bool> = alphabet.iter().map(Letter::is_central).collect();
    let pack = |w: &[u8]| w.iter().fold(0u128, |acc, &c| (acc << 8) | c as u128);
    let n = w1.len();
    let start: Vec<u8> = w1.0.iter().map(code).collect();
    let goal = pack(&w2.0.iter().map(code).collect::<Vec<_>>());

    let mut seen = HashSet::from([pack(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(word) = queue.pop_front() {
        if pack(&word) == goal {
            return Ok(true);
        }
        for i in 0..n.saturating_sub(1) {
            let (x, y) = (word[i], word[i + 1]);
            if x == y || !(central[x as usize] || central[y as usize]) {
                continue;
            }
            let mut next = word.clone();
            next.swap(i, i + 1);
            if seen.insert(pack(&next)) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// Whether the oracle and the normal forms agree on `e1 = e2`.
pub fn oracle_consistency(e1: &Expression, e2: &Expression) -> Result<bool, OracleError> {
    let by_search = oracle_equal(&word_of(e1)?, &word_of(e2)?)?;
    let by_normal_form = e1.evaluate() == e2.evaluate();
    Ok(by_search == by_normal_form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PrimesManifest, Registry};
    use crate::expr::parse;

    fn reg() -> Registry {
        Registry::from_manifest(&PrimesManifest {
            theta: vec!["A".into(), "B".into(), "C".into()],
            knot: vec!["k".into(), "l".into()],
            manifold: vec!["P".into(), "Q".into()],
        })
        .unwrap()
    }

    fn word(s: &str) -> FactorWord {
        word_of(&parse(s, &reg()).unwrap()).unwrap()
    }

    fn hat(n: &str) -> Letter {
        Letter::Hat(n.into())
    }

    fn k0(n: &str) -> Letter {
        Letter::CentralKnot(Label::Zero, n.into())
    }

    #[test]
    fn word_of_examples() {
        assert_eq!(word("A*tau0(k)"), FactorWord(vec![hat("A"), k0("k")]));
        assert_eq!(word("tau0(l # k)"), FactorWord(vec![k0("k"), k0("l")]));
        assert!(word("1").is_empty());
        assert_eq!(
            word("tau+(k # flat(P))"),
            FactorWord(vec![
                Letter::CentralKnot(Label::Plus, "k".into()),
                Letter::CentralManifold("P".into())
            ])
        );
        assert_eq!(
            word_of(&parse("k # l", &reg()).unwrap()),
            Err(OracleError::WrongSort("knot"))
        );
        assert_eq!(word("A * tauM(Q) * tau-(l)").to_string(), "A tauM(Q) tau-(l)");
    }

    #[test]
    fn oracle_equal_examples() {
        let w = |v: Vec<Letter>| FactorWord(v);
        assert!(oracle_equal(&w(vec![hat("A"), k0("k")]), &w(vec![k0("k"), hat("A")])).unwrap());
        assert!(!oracle_equal(&w(vec![hat("A"), hat("B")]), &w(vec![hat("B"), hat("A")])).unwrap());
        assert!(oracle_equal(&w(vec![hat("A")]), &w(vec![hat("A")])).unwrap());
        // A central letter can travel across the whole word.
        assert!(oracle_equal(
            &w(vec![k0("k"), hat("A"), hat("B"), hat("C")]),
            &w(vec![hat("A"), hat("B"), hat("C"), k0("k")])
        )
        .unwrap());
        assert!(!oracle_equal(&w(vec![hat("A")]), &w(vec![hat("A"), k0("k")])).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let long = FactorWord(vec![hat("A"); 11]);
        assert_eq!(
            oracle_equal(&long, &long),
            Err(OracleError::CapExceeded { len: 11, cap: 10 })
        );
        assert!(oracle_equal_with_cap(&long, &long, 12).unwrap());
        assert_eq!(
            oracle_equal_with_cap(&long, &long, 17),
            Err(OracleError::CapTooLarge(17))
        );
    }

    #[test]
    fn consistency_examples() {
        let r = reg();
        let e = |s: &str| parse(s, &r).unwrap();
        assert!(oracle_consistency(&e("A*tau0(k)"), &e("tau0(k)*A")).unwrap());
        assert!(oracle_consistency(&e("A*B"), &e("B*A")).unwrap());
        assert!(oracle_consistency(&e("tau0(k)*tau0(l)"), &e("tau0(k#l)")).unwrap());
        assert!(oracle_consistency(&e("tau+(flat(P))"), &e("tauM(P)")).unwrap());
    }

    #[test]
    fn word_product_matches_evaluation() {
        let r = reg();
        for s in ["A * tau0(k # l) * B", "tauM(P # Q) * C * tau-(flat(P))", "1"] {
            let e = parse(s, &r).unwrap();
            let crate::expr::Value::Theta(t) = e.evaluate() else { unreachable!() };
            assert_eq!(word_of(&e).unwrap().product(), t);
            assert_eq!(word_of_theta(&word_of(&e).unwrap().to_expr()), word_of(&e).unwrap());
        }
    }
}
