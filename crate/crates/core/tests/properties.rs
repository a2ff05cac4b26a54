use fnk_core::ndim_automorphism::phi_n;
use fnk_core::verify::gen::{self, GenKind};
use fnk_core::{NDFuzzySet, NDInterval, NDimAutomorphism, NDimNegation, UnitAutomorphism, UnitNegation};
use proptest::prelude::*;

fn tuple(n: usize) -> impl Strategy<Value = NDInterval<f64>> {
    prop::collection::vec(0.0f64..=1.0, n).prop_map(|v| NDInterval::sort_to_simplex(&v).unwrap())
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn join_and_meet_bound_their_arguments(x in tuple(3), y in tuple(3)) {
        let (j, m) = (x.join(&y).unwrap(), x.meet(&y).unwrap());
        prop_assert!(x.leq(&j).unwrap() && y.leq(&j).unwrap());
        prop_assert!(m.leq(&x).unwrap() && m.leq(&y).unwrap());
        prop_assert_eq!(x.join(&x).unwrap(), x.clone());
    }

    #[test]
    fn strong_negations_are_involutive_and_antitone(seed in any::<u64>(), x in tuple(3), y in tuple(3)) {
        let neg = gen::gen_negation(seed, GenKind::Strong, 3).unwrap();
        let back = neg.eval(&neg.eval(&x).unwrap()).unwrap();
        prop_assert!(sup(back.values(), x.values()) <= 1e-9);
        if x.leq(&y).unwrap() {
            let (nx, ny) = (neg.eval(&x).unwrap(), neg.eval(&y).unwrap());
            prop_assert!(ny.values().iter().zip(nx.values()).all(|(a, b)| *a <= b + 1e-12));
        }
    }

    #[test]
    fn strong_negations_preserve_degeneracy(seed in any::<u64>(), c in 0.0f64..=1.0) {
        let neg = gen::gen_negation(seed, GenKind::Strong, 4).unwrap();
        let out = neg.eval(&NDInterval::diag(c, 4).unwrap()).unwrap();
        prop_assert!(out.spread() <= 1e-12);
    }

    #[test]
    fn representable_negations_reverse_components(seed in any::<u64>(), x in tuple(3)) {
        let mut rng = gen::rng(seed);
        let chain = gen::random_chain(&mut rng, 3);
        let neg = NDimNegation::representable(chain.clone()).unwrap();
        let y = neg.eval(&x).unwrap();
        for (i, neg_i) in chain.iter().enumerate() {
            prop_assert!((y.values()[i] - neg_i.eval(x.values()[2 - i])).abs() <= 1e-15);
        }
    }

    #[test]
    fn automorphism_lift_round_trips(seed in any::<u64>(), x in tuple(3)) {
        let mut rng = gen::rng(seed);
        let phi = NDimAutomorphism::from_unit(gen::random_automorphism(&mut rng), 3).unwrap();
        let back = phi.eval_inverse(&phi.eval(&x).unwrap()).unwrap();
        prop_assert!(sup(back.values(), x.values()) <= 1e-9);
    }

    #[test]
    fn conjugation_commutes_with_evaluation(seed in any::<u64>(), x in tuple(2)) {
        let mut rng = gen::rng(seed);
        let neg = gen::gen_negation_with(&mut rng, GenKind::Random, 2).unwrap();
        let phi = NDimAutomorphism::from_unit(gen::random_automorphism(&mut rng), 2).unwrap();
        let conj = NDimNegation::conjugate(neg.clone(), phi.clone()).unwrap();
        let direct = phi.eval_inverse(&neg.eval(&phi.eval(&x).unwrap()).unwrap()).unwrap();
        prop_assert!(sup(conj.eval(&x).unwrap().values(), direct.values()) <= 1e-12);
    }

    #[test]
    fn phi_n_commutes_with_its_negation(seed in any::<u64>(), x in tuple(2)) {
        let mut rng = gen::rng(seed);
        let neg = gen::gen_negation_with(&mut rng, GenKind::Strong, 2).unwrap();
        let e = neg.nd_equilibrium(1e-12).point().unwrap().values()[0];
        let psi = gen::random_automorphism_on(&mut rng, e).unwrap();
        let phi = phi_n(&NDimAutomorphism::from_unit(psi, 2).unwrap(), &neg).unwrap();
        let lhs = phi.eval(&neg.eval(&x).unwrap()).unwrap();
        let rhs = neg.eval(&phi.eval(&x).unwrap()).unwrap();
        prop_assert!(sup(lhs.values(), rhs.values()) <= 1e-7);
    }

    #[test]
    fn unit_conjugate_of_standard_is_strong(p in 0.2f64..5.0) {
        let psi = UnitAutomorphism::power(p).unwrap();
        let neg = UnitNegation::conjugate(UnitNegation::standard(), psi).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            prop_assert!((neg.eval(neg.eval(x)) - x).abs() <= 1e-9);
        }
    }

    #[test]
    fn fuzzy_sets_round_trip_through_csv(rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 3), 0..8)) {
        let mut set = NDFuzzySet::new(3).unwrap();
        for (i, r) in rows.iter().enumerate() {
            set.insert(format!("e{i}"), NDInterval::sort_to_simplex(r).unwrap()).unwrap();
        }
        prop_assert_eq!(NDFuzzySet::from_csv(&set.to_csv()).unwrap(), set.clone());
        prop_assert_eq!(NDFuzzySet::from_json(&set.to_json()).unwrap(), set);
    }
}

#[test]
fn standard_negation_reverses_and_complements() {
    let neg = NDimNegation::standard(3).unwrap();
    let x = NDInterval::new(vec![0.1, 0.4, 0.9]).unwrap();
    let y = neg.eval(&x).unwrap();
    assert!(sup(y.values(), &[0.1, 0.6, 0.9]) <= 1e-15);
}

#[test]
fn f32_evaluation_tracks_f64() {
    let neg = gen::gen_negation(11, GenKind::Strong, 3).unwrap();
    let x = NDInterval::<f64>::new(vec![0.2, 0.3, 0.7]).unwrap();
    let wide = neg.eval(&x).unwrap();
    let narrow = neg.eval(&x.cast::<f32>()).unwrap();
    for (a, b) in wide.values().iter().zip(narrow.values()) {
        assert!((a - f64::from(*b)).abs() < 1e-5);
    }
}

#[test]
fn equilibrium_of_bottom_chain_is_none() {
    let neg = NDimNegation::bottom(3).unwrap();
    assert!(neg.nd_equilibrium(1e-12).point().is_none());
}
