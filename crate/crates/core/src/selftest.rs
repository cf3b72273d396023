//! Seeded invariant sweep behind `thetakit selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{tau_label, tau_manifold, KnotNF, Label, ThetaNF, UElement};
use crate::expr::{parse, Expression};
use crate::gamma::{verify_unique_root, GammaVertex};
use crate::oracle::oracle_equal;
use crate::roots::fuzz;
use crate::sample::Pool;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub count: usize,
    pub max_primes: usize,
    pub seed: u64,
    pub vertex_cap: usize,
    pub fuzz_max_vertices: usize,
    pub edge_prob: f64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            count: 200,
            max_primes: 5,
            seed: 0,
            vertex_cap: crate::gamma::DEFAULT_VERTEX_CAP,
            fuzz_max_vertices: 12,
            edge_prob: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, rendered.
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn run_check<F>(name: &'static str, cfg: &SelftestConfig, salt: u64, case: F) -> CheckResult
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), String> + Sync,
{
    let outcomes: Vec<Result<(), String>> = (0..cfg.count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (salt << 40) ^ i);
            case(&mut rng)
        })
        .collect();
    let failures: Vec<&String> = outcomes.iter().filter_map(|o| o.as_ref().err()).collect();
    CheckResult {
        name,
        cases: cfg.count,
        failures: failures.len(),
        first_failure: failures.first().map(|s| s.to_string()),
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> Vec<CheckResult> {
    let pool = Pool::default();
    let registry = pool.registry();
    let n = cfg.max_primes;
    let mut results = Vec::new();

    results.push(run_check("monoid laws", cfg, 1, |rng| {
        let a = pool.theta_up_to(rng, n);
        let b = pool.theta(rng, 2);
        let c = pool.theta(rng, 1);
        let unit = ThetaNF::trivial();
        ensure(unit.vertex_product(&a) == a && a.vertex_product(&unit) == a, || format!("unit law at {a}"))?;
        ensure(
            a.vertex_product(&b).vertex_product(&c) == a.vertex_product(&b.vertex_product(&c)),
            || format!("associativity at {a}, {b}, {c}"),
        )?;
        let k = pool.knot_up_to(rng, n);
        let l = pool.knot(rng, 2);
        ensure(k.connected_sum(&l) == l.connected_sum(&k), || format!("knot sum commutes at {k}, {l}"))?;
        let p = pool.manifold(rng, 2);
        let q = pool.manifold_up_to(rng, n);
        ensure(p.connected_sum(&q) == q.connected_sum(&p), || format!("manifold sum commutes at {p}, {q}"))?;
        ensure(
            a.vertex_product(&b).is_trivial() == (a.is_trivial() && b.is_trivial())
                && k.connected_sum(&l).is_trivial() == (k.is_trivial() && l.is_trivial()),
            || "triviality of products".into(),
        )
    }));

    results.push(run_check("tau homomorphism, injectivity, centrality", cfg, 2, |rng| {
        let label = Pool::label(rng);
        let k1 = pool.knot_up_to(rng, n);
        let k2 = pool.knot_up_to(rng, n);
        let theta = pool.theta_up_to(rng, n);
        let (t1, t2) = (tau_label(label, &k1), tau_label(label, &k2));
        ensure(tau_label(label, &k1.connected_sum(&k2)) == t1.vertex_product(&t2), || {
            format!("tau{label}({k1} # {k2})")
        })?;
        ensure(t1 != t2 || k1 == k2, || format!("tau{label} not injective on {k1}, {k2}"))?;
        ensure(t1.vertex_product(&theta) == theta.vertex_product(&t1), || {
            format!("tau{label}({k1}) does not commute with {theta}")
        })?;
        let m = pool.manifold_up_to(rng, n);
        ensure(tau_manifold(&m).vertex_product(&theta) == theta.vertex_product(&tau_manifold(&m)), || {
            format!("tauM({m}) does not commute with {theta}")
        })
    }));

    results.push(run_check("primality correspondence", cfg, 3, |rng| {
        let k = pool.knot_up_to(rng, n.min(4));
        for label in Label::ALL {
            ensure(
                UElement::LabeledKnot(label, k.clone()).is_prime()
                    == UElement::Theta(tau_label(label, &k)).is_prime(),
                || format!("knot {k} at label {label}"),
            )?;
        }
        let m = pool.manifold_up_to(rng, n.min(4));
        ensure(
            UElement::Manifold(m.clone()).is_prime() == UElement::Theta(tau_manifold(&m)).is_prime(),
            || format!("manifold {m}"),
        )
    }));

    results.push(run_check("factorization reassembly", cfg, 4, |rng| {
        let size = rng.gen_range(1..=n.max(1));
        let t = pool.theta(rng, size);
        let factors = t.prime_factorization().map_err(|e| e.to_string())?;
        ensure(
            factors.iter().all(|f| UElement::Theta(f.clone()).is_prime()),
            || format!("non-prime factor of {t}"),
        )?;
        ensure(crate::algebra::product(&factors) == t, || format!("factors of {t} do not reassemble"))
    }));

    results.push(run_check("oracle agrees with normal forms", cfg, 5, |rng| {
        let (w1, w2) = pool.word_pair(rng, 8);
        let by_search = oracle_equal(&w1, &w2).map_err(|e| e.to_string())?;
        ensure(by_search == (w1.product() == w2.product()), || format!("[{w1}] vs [{w2}]"))
    }));

    results.push(run_check("unique root of Γ, (F), (EE), descent", cfg, 6, |rng| {
        let u = pool.element(rng, n);
        let (_, report) = verify_unique_root(&GammaVertex::single(u.clone()), cfg.vertex_cap)
            .map_err(|e| format!("{u}: {e}"))?;
        ensure(report.all_hold(), || format!("{u}: {report:?}"))
    }));

    results.push(run_check("knot factorization from Γ roots", cfg, 7, |rng| {
        let label = Pool::label(rng);
        let size = rng.gen_range(1..=n.max(1));
        let k = pool.knot(rng, size);
        let (_, report) = verify_unique_root(
            &GammaVertex::single(UElement::LabeledKnot(label, k.clone())),
            cfg.vertex_cap,
        )
        .map_err(|e| format!("{k}: {e}"))?;
        let mut found: Vec<KnotNF> = report
            .root
            .knots()
            .iter()
            .map(|lk| lk.knot.clone())
            .chain(report.root.manifolds().iter().map(crate::algebra::flat_knot))
            .collect();
        found.sort();
        let mut want = k.prime_factors();
        want.sort();
        ensure(found == want, || format!("{k}: root gives {found:?}"))
    }));

    results.push(run_check("parser round trip", cfg, 8, |rng| {
        let e = match rng.gen_range(0..4) {
            0 => Expression::Knot(pool.knot_expr(rng, 3)),
            1 => Expression::Manifold(pool.manifold_expr(rng, 3)),
            _ => Expression::Theta(pool.theta_expr(rng, 4)),
        };
        let printed = e.to_string();
        let back = parse(&printed, &registry).map_err(|err| format!("{printed}: {err}"))?;
        ensure(back == e, || printed.clone())
    }));

    let fuzz_result = fuzz(cfg.count, cfg.fuzz_max_vertices, cfg.edge_prob, cfg.seed);
    results.push(match fuzz_result {
        Ok(summary) => CheckResult {
            name: "unique roots on random DAGs",
            cases: summary.graphs,
            failures: summary.counterexamples.len(),
            first_failure: summary
                .counterexamples
                .first()
                .map(|c| format!("seed {}: {}", c.seed, c.reason)),
        },
        Err(e) => CheckResult {
            name: "unique roots on random DAGs",
            cases: 0,
            failures: 1,
            first_failure: Some(e.to_string()),
        },
    });
    results
}
