//! Seeded random elements, words and expressions over a fixed pool of
//! generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{
    GeneratorKind, KnotNF, Label, ManifoldNF, Multiset, PrimesManifest, Registry, ThetaNF,
    UElement,
};
use crate::expr::{KnotExpr, ManifoldExpr, ThetaExpr};
use crate::oracle::{FactorWord, Letter};

/// Generator names to draw from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pool {
    pub theta: Vec<String>,
    pub knot: Vec<String>,
    pub manifold: Vec<String>,
}

impl Default for Pool {
    fn default() -> Self {
        let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            theta: names(&["A", "B", "C"]),
            knot: names(&["k", "l", "m"]),
            manifold: names(&["P", "Q", "R"]),
        }
    }
}

impl Pool {
    pub fn registry(&self) -> Registry {
        Registry::from_manifest(&PrimesManifest {
            theta: self.theta.clone(),
            knot: self.knot.clone(),
            manifold: self.manifold.clone(),
        })
        .expect("pool names are distinct identifiers")
    }

    pub fn from_registry(registry: &Registry) -> Self {
        Self {
            theta: registry.names_of_kind(GeneratorKind::ThetaHatPrime),
            knot: registry.names_of_kind(GeneratorKind::KnotHatPrime),
            manifold: registry.names_of_kind(GeneratorKind::ManifoldPrime),
        }
    }

    fn pick<'a, R: Rng>(names: &'a [String], rng: &mut R) -> &'a str {
        names.choose(rng).expect("nonempty pool")
    }

    pub fn label<R: Rng>(rng: &mut R) -> Label {
        Label::ALL[rng.gen_range(0..3)]
    }

    /// A manifold with exactly `primes` prime summands.
    pub fn manifold<R: Rng>(&self, rng: &mut R, primes: usize) -> ManifoldNF {
        let mut m = Multiset::new();
        for _ in 0..primes {
            m.insert(Self::pick(&self.manifold, rng), 1);
        }
        ManifoldNF::from_summands(m)
    }

    /// A knot with exactly `primes` prime summands.
    pub fn knot<R: Rng>(&self, rng: &mut R, primes: usize) -> KnotNF {
        let mut k = Multiset::new();
        let mut m = Multiset::new();
        for _ in 0..primes {
            if self.manifold.is_empty() || (!self.knot.is_empty() && rng.gen_bool(0.7)) {
                k.insert(Self::pick(&self.knot, rng), 1);
            } else {
                m.insert(Self::pick(&self.manifold, rng), 1);
            }
        }
        KnotNF::new(k, ManifoldNF::from_summands(m))
    }

    /// A theta-curve with exactly `primes` prime factors.
    pub fn theta<R: Rng>(&self, rng: &mut R, primes: usize) -> ThetaNF {
        let mut t = ThetaNF::trivial();
        for _ in 0..primes {
            let roll: f64 = rng.gen();
            let factor = if roll < 0.5 && !self.theta.is_empty() {
                ThetaNF::hat_prime(Self::pick(&self.theta, rng))
            } else if roll < 0.85 && !self.knot.is_empty() {
                crate::algebra::tau_label(Self::label(rng), &KnotNF::prime(Self::pick(&self.knot, rng)))
            } else {
                crate::algebra::tau_manifold(&ManifoldNF::prime(Self::pick(&self.manifold, rng)))
            };
            t = t.vertex_product(&factor);
        }
        t
    }

    pub fn theta_up_to<R: Rng>(&self, rng: &mut R, max_primes: usize) -> ThetaNF {
        let n = rng.gen_range(0..=max_primes);
        self.theta(rng, n)
    }

    pub fn knot_up_to<R: Rng>(&self, rng: &mut R, max_primes: usize) -> KnotNF {
        let n = rng.gen_range(0..=max_primes);
        self.knot(rng, n)
    }

    pub fn manifold_up_to<R: Rng>(&self, rng: &mut R, max_primes: usize) -> ManifoldNF {
        let n = rng.gen_range(0..=max_primes);
        self.manifold(rng, n)
    }

    /// An element of `U` with between 0 and `max_primes` primes; mostly
    /// theta-curves.
    pub fn element<R: Rng>(&self, rng: &mut R, max_primes: usize) -> UElement {
        let primes = rng.gen_range(0..=max_primes);
        match rng.gen_range(0..10) {
            0..=5 => UElement::Theta(self.theta(rng, primes)),
            6..=8 => UElement::LabeledKnot(Self::label(rng), self.knot(rng, primes)),
            _ => UElement::Manifold(self.manifold(rng, primes)),
        }
    }

    pub fn letter<R: Rng>(&self, rng: &mut R) -> Letter {
        match rng.gen_range(0..10) {
            0..=4 => Letter::Hat(Self::pick(&self.theta, rng).to_string()),
            5..=8 => Letter::CentralKnot(Self::label(rng), Self::pick(&self.knot, rng).to_string()),
            _ => Letter::CentralManifold(Self::pick(&self.manifold, rng).to_string()),
        }
    }

    pub fn word<R: Rng>(&self, rng: &mut R, len: usize) -> FactorWord {
        FactorWord((0..len).map(|_| self.letter(rng)).collect())
    }

    /// A pair of words of length `len`. Half of the time the second word is
    /// a shuffle of the first, so that both verdicts are well represented.
    pub fn word_pair<R: Rng>(&self, rng: &mut R, max_len: usize) -> (FactorWord, FactorWord) {
        let len = rng.gen_range(0..=max_len);
        let w1 = self.word(rng, len);
        let w2 = match rng.gen_range(0..4) {
            0 => self.word(rng, len),
            1 => {
                // Swap random adjacent pairs, legal or not.
                let mut v = w1.0.clone();
                for _ in 0..rng.gen_range(1..=len.max(1) * 2) {
                    if v.len() >= 2 {
                        let i = rng.gen_range(0..v.len() - 1);
                        v.swap(i, i + 1);
                    }
                }
                FactorWord(v)
            }
            _ => {
                // Move central letters only: always equal.
                let mut v = w1.0.clone();
                for _ in 0..len * 3 {
                    if v.len() >= 2 {
                        let i = rng.gen_range(0..v.len() - 1);
                        if v[i].is_central() || v[i + 1].is_central() {
                            v.swap(i, i + 1);
                        }
                    }
                }
                FactorWord(v)
            }
        };
        (w1, w2)
    }

    pub fn manifold_expr<R: Rng>(&self, rng: &mut R, depth: usize) -> ManifoldExpr {
        if depth == 0 || rng.gen_bool(0.4) {
            return if rng.gen_bool(0.15) {
                ManifoldExpr::S3
            } else {
                ManifoldExpr::Prime(Self::pick(&self.manifold, rng).to_string())
            };
        }
        let n = rng.gen_range(2..=3);
        ManifoldExpr::Sum((0..n).map(|_| self.manifold_expr(rng, depth - 1)).collect())
    }

    pub fn knot_expr<R: Rng>(&self, rng: &mut R, depth: usize) -> KnotExpr {
        if depth == 0 || rng.gen_bool(0.4) {
            return match rng.gen_range(0..10) {
                0 => KnotExpr::Unknot,
                1..=2 => KnotExpr::Flat(self.manifold_expr(rng, depth.saturating_sub(1))),
                _ => KnotExpr::Prime(Self::pick(&self.knot, rng).to_string()),
            };
        }
        let n = rng.gen_range(2..=3);
        KnotExpr::Sum((0..n).map(|_| self.knot_expr(rng, depth - 1)).collect())
    }

    pub fn theta_expr<R: Rng>(&self, rng: &mut R, depth: usize) -> ThetaExpr {
        if depth == 0 || rng.gen_bool(0.35) {
            return match rng.gen_range(0..10) {
                0 => ThetaExpr::Trivial,
                1..=2 => ThetaExpr::Tau(Self::label(rng), self.knot_expr(rng, depth.saturating_sub(1))),
                3 => ThetaExpr::TauManifold(self.manifold_expr(rng, depth.saturating_sub(1))),
                _ => ThetaExpr::Prime(Self::pick(&self.theta, rng).to_string()),
            };
        }
        let n = rng.gen_range(2..=3);
        ThetaExpr::Product((0..n).map(|_| self.theta_expr(rng, depth - 1)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_are_exact() {
        let pool = Pool::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 0..7 {
            assert_eq!(pool.theta(&mut rng, n).prime_count(), n);
            assert_eq!(pool.knot(&mut rng, n).prime_count(), n);
            assert_eq!(pool.manifold(&mut rng, n).prime_count(), n);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let pool = Pool::default();
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            (0..20).map(|_| pool.element(&mut rng, 6)).collect()
        };
        let b: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            (0..20).map(|_| pool.element(&mut rng, 6)).collect()
        };
        assert_eq!(a, b);
    }
}
