use proptest::prelude::*;
use qes_core::ratfun::{rat, Polynomial, Rational};
use qes_core::{
    build_model, build_wave_spec, count_nodes, eval_wave, scale_generator, Level, RationalFunction,
};

fn small_rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// `(x - p)^2 + q^2`
fn positive_quadratic() -> impl Strategy<Value = Polynomial> {
    (small_rational(-3, 3), positive())
        .prop_map(|(p, q)| Polynomial::new(vec![&p * &p + &q * &q, -(&p * rat(2, 1)), rat(1, 1)]))
}

/// `k (x - r) P(x) / Q(x)` with `P`, `Q` free of real roots and `deg P >= deg Q`.
fn single_zero_generator() -> impl Strategy<Value = RationalFunction> {
    (
        positive(),
        small_rational(-3, 3),
        proptest::collection::vec(positive_quadratic(), 0..=2),
        proptest::option::of(positive_quadratic()),
    )
        .prop_map(|(k, r, ps, q)| {
            let num = ps
                .iter()
                .fold(Polynomial::new(vec![-r, rat(1, 1)]).scale(&k), |acc, p| {
                    &acc * p
                });
            let den = match q {
                Some(q) if !ps.is_empty() => q,
                _ => Polynomial::one(),
            };
            RationalFunction::new(num, den).unwrap()
        })
}

/// `(g x^4 + b x^2 - 3) / x` with zeros at `+-r`.
fn residue_three_generator() -> impl Strategy<Value = RationalFunction> {
    (positive(), positive()).prop_map(|(g, r)| {
        let r2 = &r * &r;
        let b = (rat(3, 1) - &g * &r2 * &r2) / &r2;
        let num = Polynomial::new(vec![rat(-3, 1), rat(0, 1), b, rat(0, 1), g]);
        RationalFunction::new(num, Polynomial::x()).unwrap()
    })
}

/// Example 1 at a random strength, scale and offset.
fn shifted_example1() -> impl Strategy<Value = RationalFunction> {
    (positive(), positive(), small_rational(-3, 3)).prop_map(|(alpha, a, c)| {
        let w = RationalFunction::new(
            Polynomial::from_ints(&[0, -1, 0, 1]),
            Polynomial::from_ints(&[1, 0, 1]),
        )
        .unwrap()
        .scale(&alpha);
        scale_generator(&w, &a)
            .unwrap()
            .compose(&Polynomial::new(vec![-c, rat(1, 1)]))
    })
}

fn admissible() -> impl Strategy<Value = RationalFunction> {
    prop_oneof![
        single_zero_generator(),
        residue_three_generator(),
        shifted_example1()
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn construction_identities_hold(w in admissible()) {
        let m = build_model(&w, None).unwrap();
        prop_assert!(m.identities_hold());
        prop_assert!(!m.v_minus.has_real_poles());
    }

    #[test]
    fn count_identity_holds(w in admissible()) {
        let c = build_model(&w, None).unwrap().profile.counts;
        prop_assert_eq!(c.n_plus, c.n_minus + c.n_zero + c.m_zero + 1);
    }

    #[test]
    fn node_count_equals_state_number(w in admissible()) {
        let m = build_model(&w, None).unwrap();
        let p = m.prediction();
        prop_assert_eq!(count_nodes(&build_wave_spec(&m, Level::ZeroEnergy).unwrap()), p.index_zero_energy);
        prop_assert_eq!(count_nodes(&build_wave_spec(&m, Level::EpsilonLevel).unwrap()), p.index_epsilon);
    }

    #[test]
    fn wave_specs_are_pole_free_and_normalized(w in admissible()) {
        let m = build_model(&w, None).unwrap();
        let grid: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.1).collect();
        for level in [Level::ZeroEnergy, Level::EpsilonLevel] {
            let spec = build_wave_spec(&m, level).unwrap();
            prop_assert!(!spec.prefactor.has_real_poles());
            prop_assert!(!spec.regular_part.has_real_poles());
            let psi = eval_wave(&spec, &grid).unwrap();
            let sup = psi.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            prop_assert!((sup - 1.0).abs() < 1e-12);
            let first = psi.iter().find(|v| v.abs() > 1e-3).unwrap();
            prop_assert!(*first > 0.0);
        }
    }

    #[test]
    fn scaling_is_exact(w in admissible(), a in positive()) {
        let m = build_model(&w, None).unwrap();
        let s = build_model(&scale_generator(&w, &a).unwrap(), None).unwrap();
        let inv = a.recip();
        let expect = m.v_minus.compose(&Polynomial::new(vec![rat(0, 1), inv.clone()])).scale(&(&inv * &inv));
        prop_assert_eq!(&s.v_minus, &expect);
        prop_assert_eq!(s.epsilon(), &(m.epsilon() * &inv * &inv));
        prop_assert_eq!(s.prediction().index_epsilon, m.prediction().index_epsilon);
    }
}
