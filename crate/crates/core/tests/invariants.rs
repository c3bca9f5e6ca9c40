use num_rational::BigRational;
use orbitdepth::curve::{additivity_checks, Atlas};
use orbitdepth::laurent::{impossibility_check, Representation};
use orbitdepth::magnus::magnus;
use orbitdepth::melnikov::{wronskian, Poly, RatFunc};
use orbitdepth::report::{run_suite, Config, Report, Suite};
use orbitdepth::word::{
    delta_gen, gamma, m_endo, m_endo_inverse, mon0, mon0_inverse, mon1, mon1_inverse, Word,
};
use proptest::prelude::*;

fn generator_word(index: usize, inverse: bool) -> Word {
    let w = if index == 0 {
        gamma()
    } else {
        delta_gen(index - 1)
    };
    if inverse {
        w.inverse()
    } else {
        w
    }
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..5, any::<bool>()), 0..=max_len).prop_map(|letters| {
        letters.into_iter().fold(Word::identity(), |acc, (i, inv)| {
            &acc * &generator_word(i, inv)
        })
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (
        prop::collection::vec(-5i64..=5, 1..4),
        prop::collection::vec(-3i64..=3, 0..2),
    )
        .prop_map(|(num, mut den)| {
            den.push(1);
            RatFunc::new(Poly::from_ints(&num), Poly::from_ints(&den)).expect("monic denominator")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_form_a_group(a in word(12), b in word(12), c in word(12)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a * &a.inverse()).is_identity());
        prop_assert_eq!((&a * &b).inverse(), &b.inverse() * &a.inverse());
    }

    #[test]
    fn monodromies_are_invertible_homomorphisms(a in word(10), b in word(10)) {
        for (f, g) in [(mon0(), mon0_inverse()), (mon1(), mon1_inverse()), (m_endo(), m_endo_inverse())] {
            prop_assert_eq!(f.apply(&(&a * &b)), &f.apply(&a) * &f.apply(&b));
            prop_assert_eq!(g.apply(&f.apply(&a)), a.clone());
        }
    }

    #[test]
    fn magnus_expansion_is_multiplicative(a in word(8), b in word(8)) {
        let n = 4;
        let lhs = magnus(&(&a * &b), n).unwrap();
        let rhs = magnus(&a, n).unwrap().mul(&magnus(&b, n).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rho_is_a_homomorphism(a in word(10), b in word(10)) {
        let rep = Representation::new(2).unwrap();
        prop_assert_eq!(rep.rho(&(&a * &b)), rep.rho(&a).mul(&rep.rho(&b)));
        prop_assert!(rep.rho(&a.inverse()).mul(&rep.rho(&a)).is_identity());
    }

    #[test]
    fn wronskian_is_antisymmetric_and_bilinear(f in ratfunc(), g in ratfunc(), h in ratfunc(), s in -4i64..=4) {
        prop_assert_eq!(wronskian(&f, &g), wronskian(&g, &f).scale(&BigRational::from_integer((-1).into())));
        prop_assert_eq!(wronskian(&(&f + &h), &g), &wronskian(&f, &g) + &wronskian(&h, &g));
        let s = BigRational::from_integer(s.into());
        prop_assert_eq!(wronskian(&f.scale(&s), &g), wronskian(&f, &g).scale(&s));
        prop_assert!(wronskian(&f, &f).is_zero());
    }

    #[test]
    fn monomial_sums_never_match_the_constant(
        terms in prop::collection::vec(
            (-6i64..=6, -4i64..=4, -4i64..=4).prop_filter("nonzero exponents", |(_, m, n)| (*m, *n) != (0, 0)),
            1..8,
        )
    ) {
        prop_assert!(impossibility_check(&terms).unwrap());
    }

    #[test]
    fn config_json_round_trips(seed in any::<u64>(), samples in 1usize..500, t0 in 0.05f64..0.45, k_max in 1usize..=8) {
        let cfg = Config { seed, samples, t0, k_max, ..Config::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(Config::from_json(&text).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn periods_are_additive_on_products(a in word(4), b in word(4)) {
        let atlas = Atlas::new(0.36).unwrap();
        for check in additivity_checks(&atlas, &a, &b, 1e-9).unwrap() {
            prop_assert!(check.pass, "{:?}", check);
        }
    }

    #[test]
    fn report_json_round_trips(seed in any::<u64>()) {
        let cfg = Config { seed, samples: 5, ..Config::default() };
        let report = run_suite(Suite::Orbit, &cfg).unwrap();
        let text = report.to_json().unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), text);
        prop_assert_eq!(back.records.len(), report.records.len());
    }
}
