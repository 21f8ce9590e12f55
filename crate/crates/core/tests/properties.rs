use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use pfilt_core::alcove::{alcove_of_weight, AffineWeylGroup};
use pfilt_core::characters::{weyl_dimension, FormalCharacter};
use pfilt_core::g1::baby_verma_char;
use pfilt_core::modchar::steinberg_decompose;
use pfilt_core::rootdata::{RootSystem, Weight};
use pfilt_core::Engine;

fn group(t: &str) -> AffineWeylGroup {
    AffineWeylGroup::new(Arc::new(RootSystem::new(t.parse().unwrap())))
}

fn rank2_type() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("A2"), Just("B2"), Just("C2"), Just("G2")]
}

fn a2_p7() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new("A2".parse().unwrap(), 7).unwrap())
}

fn b2_p7() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new("B2".parse().unwrap(), 7).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(t in rank2_type(), a in prop::collection::vec(0usize..3, 0..10), b in prop::collection::vec(0usize..3, 0..10)) {
        let g = group(t);
        let x = g.from_word(&a).unwrap();
        let y = g.from_word(&b).unwrap();
        let lx = g.length(&x);
        prop_assert!(lx <= a.len());
        prop_assert_eq!(lx % 2, a.len() % 2);
        prop_assert_eq!(g.length(&g.inverse(&x)), lx);
        prop_assert_eq!(g.from_word(&g.reduced_word(&x)).unwrap(), x.clone());
        prop_assert!(g.length(&g.mul(&x, &y)) <= lx + g.length(&y));
        let joined: Vec<usize> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(g.mul(&x, &y), g.from_word(&joined).unwrap());
        prop_assert!(g.bruhat_leq(&g.identity(), &x));
    }

    #[test]
    fn dot_action_preserves_regularity(t in rank2_type(), w in prop::collection::vec(0usize..3, 0..8), l in prop::collection::vec(-20i64..20, 2), p in prop::sample::select(vec![7u32, 11])) {
        let g = group(t);
        let rs = g.root_system();
        let x = g.from_word(&w).unwrap();
        let lambda = Weight::new(l);
        let image = g.dot_action(&x, &lambda, p);
        prop_assert_eq!(alcove_of_weight(rs, &lambda, p).is_some(), alcove_of_weight(rs, &image, p).is_some());
        prop_assert_eq!(g.dot_action(&g.inverse(&x), &image, p), lambda);
    }

    #[test]
    fn locate_round_trip(t in rank2_type(), l in prop::collection::vec(0i64..40, 2), p in prop::sample::select(vec![7u32, 11, 13])) {
        let g = group(t);
        let rs = g.root_system();
        let lambda = Weight::new(l);
        let (x, base) = g.locate(&lambda, p).unwrap();
        prop_assert_eq!(g.dot_action(&x, &base, p), lambda.clone());
        let v = &base + rs.rho();
        for k in 0..rs.num_positive_roots() {
            let c = rs.pair(&v, k).unwrap();
            prop_assert!((-(p as i64)..=0).contains(&c));
        }
        if let Some(k) = alcove_of_weight(rs, &lambda, p) {
            prop_assert_eq!(g.length(&x), k.distance_from_base());
        }
    }

    #[test]
    fn steinberg_decomposition(l in prop::collection::vec(0i64..200, 1..4), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let lambda = Weight::new(l);
        let (l0, l1) = steinberg_decompose(&lambda, p);
        prop_assert!(l0.is_restricted(p));
        prop_assert!(l1.is_dominant());
        prop_assert_eq!(&l0 + &l1.scale(p as i64), lambda);
    }

    #[test]
    fn filtration_nonnegative_in_jantzen_region(a in 0i64..25, b in 0i64..25, use_b2 in any::<bool>()) {
        let e = if use_b2 { b2_p7() } else { a2_p7() };
        let rs = e.root_system();
        let lambda = Weight::new(vec![a, b]);
        prop_assume!(pfilt_core::alcove::in_jantzen_region(rs, &lambda, 7));
        let r = e.decompose_weyl(&lambda).unwrap();
        prop_assert!(r.residual_zero);
        prop_assert!(r.nonnegative, "{:?}", r.sections);
        prop_assert!(r.dimension_identity);
        prop_assert_eq!(r.multiplicity(&lambda), 1);
    }

    #[test]
    fn irreducible_dimension_bounds(a in 0i64..30, b in 0i64..30) {
        let e = a2_p7();
        let rs = e.root_system();
        let lambda = Weight::new(vec![a, b]);
        let l = e.ch_irreducible(&lambda).unwrap();
        prop_assert!(l.is_nonnegative());
        prop_assert!(l.is_weyl_invariant(rs));
        prop_assert!(l.mass() as u128 <= weyl_dimension(rs, &lambda).unwrap());
        let (l0, l1) = steinberg_decompose(&lambda, 7);
        let expect = e.ch_irreducible(&l0).unwrap().mass() * e.ch_irreducible(&l1).unwrap().mass();
        prop_assert_eq!(l.mass(), expect);
    }

    #[test]
    fn g1t_round_trip(m in prop::collection::vec(-15i64..15, 2)) {
        let e = a2_p7();
        let rs = e.root_system();
        let mu = Weight::new(m);
        let z = baby_verma_char(rs, &mu, 7).unwrap();
        prop_assert_eq!(z.mass(), 7i128.pow(3));
        let parts = e.decompose_g1t(&z).unwrap();
        prop_assert_eq!(&parts[0], &(mu.clone(), 1));
        let mut back = FormalCharacter::zero(rs.cartan_type());
        for (nu, k) in &parts {
            back.add_scaled(&e.g1t_simple_char(nu).unwrap(), *k).unwrap();
        }
        prop_assert_eq!(back, z);
    }
}

#[test]
fn kl_bounds_on_random_elements() {
    let e = Engine::new("B2".parse().unwrap(), 5).unwrap();
    let kl = e.kl_table();
    let g = kl.group();
    for x in g.elements_up_to_length(7).unwrap() {
        let lx = g.length(&x);
        for y in g.lower_interval(&x).unwrap().iter() {
            let p = kl.kl_polynomial(y, &x).unwrap();
            assert_eq!(p.coeff(0), 1);
            assert!(y == &x || 2 * p.degree().unwrap() < lx - g.length(y));
            assert!(p.coeffs().iter().all(|c| *c >= 0), "KL polynomials have non-negative coefficients");
        }
    }
}
