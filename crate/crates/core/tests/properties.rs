use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thetakit::algebra::{
    product, tau_label, tau_manifold, KnotNF, Label, ManifoldNF, Multiset, ThetaNF, UElement,
};
use thetakit::gamma::{expected_root, root_of_gamma, GammaVertex, Strategy as Walk};
use thetakit::oracle::{oracle_equal, word_of_theta};
use thetakit::sample::Pool;

const THETA: [&str; 3] = ["A", "B", "C"];
const KNOT: [&str; 3] = ["k", "l", "m"];
const MANIFOLD: [&str; 3] = ["P", "Q", "R"];

fn label() -> impl Strategy<Value = Label> {
    prop::sample::select(Label::ALL.to_vec())
}

fn multiset(names: &'static [&'static str], max: usize) -> impl Strategy<Value = Multiset> {
    prop::collection::vec(prop::sample::select(names), 0..=max).prop_map(|xs| {
        let mut m = Multiset::new();
        for x in xs {
            m.insert(x, 1);
        }
        m
    })
}

fn manifold() -> impl Strategy<Value = ManifoldNF> {
    multiset(&MANIFOLD, 3).prop_map(ManifoldNF::from_summands)
}

fn knot() -> impl Strategy<Value = KnotNF> {
    (multiset(&KNOT, 3), manifold()).prop_map(|(k, m)| KnotNF::new(k, m))
}

// Theta-curves as products of prime factors in random order.
fn theta() -> impl Strategy<Value = ThetaNF> {
    let factor = prop_oneof![
        3 => prop::sample::select(&THETA[..]).prop_map(ThetaNF::hat_prime),
        2 => (label(), prop::sample::select(&KNOT[..])).prop_map(|(l, k)| tau_label(l, &KnotNF::prime(k))),
        1 => prop::sample::select(&MANIFOLD[..]).prop_map(|p| tau_manifold(&ManifoldNF::prime(p))),
    ];
    prop::collection::vec(factor, 0..=5).prop_map(|fs| product(&fs))
}

proptest! {
    #[test]
    fn theta_monoid_laws(a in theta(), b in theta(), c in theta()) {
        let unit = ThetaNF::trivial();
        prop_assert_eq!(unit.vertex_product(&a), a.clone());
        prop_assert_eq!(a.vertex_product(&unit), a.clone());
        prop_assert_eq!(a.vertex_product(&b).vertex_product(&c), a.vertex_product(&b.vertex_product(&c)));
        prop_assert_eq!(a.vertex_product(&b).prime_count(), a.prime_count() + b.prime_count());
    }

    #[test]
    fn connected_sums_are_commutative_monoids(k in knot(), l in knot(), p in manifold(), q in manifold()) {
        prop_assert_eq!(k.connected_sum(&l), l.connected_sum(&k));
        prop_assert_eq!(k.connected_sum(&KnotNF::unknot()), k.clone());
        prop_assert_eq!(p.connected_sum(&q), q.connected_sum(&p));
        prop_assert_eq!(p.connected_sum(&ManifoldNF::s3()), p);
    }

    #[test]
    fn tau_is_an_injective_central_homomorphism(i in label(), j in label(), k in knot(), l in knot(), t in theta()) {
        prop_assert_eq!(tau_label(i, &k.connected_sum(&l)), tau_label(i, &k).vertex_product(&tau_label(i, &l)));
        prop_assert_eq!(tau_label(i, &k) == tau_label(i, &l), k == l);
        prop_assert_eq!(tau_label(i, &k).vertex_product(&t), t.vertex_product(&tau_label(i, &k)));
        // Different edges give different theta-curves unless the knot is flat.
        if i != j && !k.knot_part.is_empty() {
            prop_assert_ne!(tau_label(i, &k), tau_label(j, &k));
        }
    }

    #[test]
    fn factorization_reassembles_into_primes(t in theta()) {
        match t.prime_factorization() {
            Ok(fs) => {
                prop_assert!(!t.is_trivial());
                prop_assert_eq!(fs.len(), t.prime_count());
                prop_assert!(fs.iter().all(|f| UElement::Theta(f.clone()).is_prime()));
                prop_assert_eq!(product(&fs), t);
            }
            Err(_) => prop_assert!(t.is_trivial()),
        }
    }

    #[test]
    fn knot_like_iff_in_image_of_some_tau(t in theta()) {
        let hit = t.as_knot_like();
        prop_assert_eq!(hit.is_some(), t.is_knot_like());
        if let Some((i, k)) = hit {
            prop_assert_eq!(tau_label(i, &k), t);
        }
    }

    #[test]
    fn json_round_trips(t in theta(), k in knot(), m in manifold()) {
        let back: ThetaNF = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t.clone());
        let back: KnotNF = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(back, k);
        let back: ManifoldNF = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
        let v = GammaVertex::single(UElement::Theta(t));
        let back: GammaVertex = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn oracle_matches_normal_forms(seed in any::<u64>()) {
        let pool = Pool::default();
        let (w1, w2) = pool.word_pair(&mut ChaCha8Rng::seed_from_u64(seed), 7);
        prop_assert_eq!(oracle_equal(&w1, &w2).unwrap(), w1.product() == w2.product());
    }

    #[test]
    fn words_and_expressions_agree(seed in any::<u64>(), len in 0usize..8) {
        let pool = Pool::default();
        let w = pool.word(&mut ChaCha8Rng::seed_from_u64(seed), len);
        let e = w.to_expr();
        prop_assert_eq!(e.evaluate(), w.product());
        let back = word_of_theta(&e);
        prop_assert_eq!(back.len(), w.len());
        prop_assert_eq!(back.product(), w.product());
    }

    #[test]
    fn any_reduction_order_reaches_the_root(seed in any::<u64>(), walk in any::<u64>()) {
        let pool = Pool::default();
        let u = pool.element(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let start = GammaVertex::single(u);
        let expected = expected_root(&start);
        prop_assert_eq!(root_of_gamma(&start, Walk::Seeded(walk)), expected.clone());
        prop_assert_eq!(root_of_gamma(&start, Walk::First), expected.clone());
        prop_assert_eq!(root_of_gamma(&start, Walk::Last), expected);
    }
}
