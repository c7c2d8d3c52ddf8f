//! Exact polynomial and rational-function algebra over the rationals.

mod poly;
mod rational;
mod roots;
pub mod text;

pub use poly::{rational_to_f64, Polynomial};
pub use rational::{CompiledRational, Laurent, RationalFunction, Scalar};
pub use roots::{count_real_roots, real_roots, RootLocation, SturmSequence, REFINE_WIDTH};

use crate::error::Result;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Binary arithmetic on rational functions, result reduced.
pub fn ratfun_arith(
    a: &RationalFunction,
    b: &RationalFunction,
    op: ArithOp,
) -> Result<RationalFunction> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::QesError;

    fn example1_wplus(alpha: Rational) -> RationalFunction {
        RationalFunction::new(
            Polynomial::from_ints(&[0, -1, 0, 1]).scale(&alpha),
            Polynomial::from_ints(&[1, 0, 1]),
        )
        .unwrap()
    }

    fn example1_w(alpha: Rational) -> RationalFunction {
        // alpha/2 x + (1-alpha) x/(x^2+1) - 1/x
        let x = RationalFunction::x();
        let q = RationalFunction::new(Polynomial::x(), Polynomial::from_ints(&[1, 0, 1])).unwrap();
        let one = Rational::from_integer(1.into());
        &(&x.scale(&(&alpha / rat(2, 1))) + &q.scale(&(&one - &alpha))) - &x.recip().unwrap()
    }

    fn example1_w1(alpha: Rational) -> RationalFunction {
        // alpha/2 x - (1+alpha) x/(x^2+1) + 1/x
        let x = RationalFunction::x();
        let q = RationalFunction::new(Polynomial::x(), Polynomial::from_ints(&[1, 0, 1])).unwrap();
        let one = Rational::from_integer(1.into());
        &(&x.scale(&(&alpha / rat(2, 1))) - &q.scale(&(&one + &alpha))) + &x.recip().unwrap()
    }

    #[test]
    fn self_cancellation() {
        let x = RationalFunction::x();
        assert!(ratfun_arith(&x, &x, ArithOp::Sub).unwrap().is_zero());
    }

    #[test]
    fn common_denominator() {
        let x = RationalFunction::x();
        let inv = x.recip().unwrap();
        let sum = ratfun_arith(&inv, &x, ArithOp::Add).unwrap();
        let expect =
            RationalFunction::new(Polynomial::from_ints(&[1, 0, 1]), Polynomial::x()).unwrap();
        assert_eq!(sum, expect);
    }

    #[test]
    fn division_by_zero_function() {
        let x = RationalFunction::x();
        assert_eq!(
            ratfun_arith(&x, &RationalFunction::zero(), ArithOp::Div),
            Err(QesError::DivisionByZeroFunction)
        );
        assert_eq!(
            RationalFunction::new(Polynomial::one(), Polynomial::zero()),
            Err(QesError::DivisionByZeroFunction)
        );
    }

    #[test]
    fn example1_superpotentials_sum_to_generator() {
        for alpha in [rat(2, 1), rat(1, 1), rat(7, 3)] {
            let sum = ratfun_arith(
                &example1_w1(alpha.clone()),
                &example1_w(alpha.clone()),
                ArithOp::Add,
            )
            .unwrap();
            assert_eq!(sum, example1_wplus(alpha));
        }
    }

    #[test]
    fn canonical_form_is_monic_and_reduced() {
        // (2x^2 - 2)/(4x - 4) = (x + 1)/2
        let f = RationalFunction::new(
            Polynomial::from_ints(&[-2, 0, 2]),
            Polynomial::from_ints(&[-4, 4]),
        )
        .unwrap();
        assert_eq!(f.denominator(), &Polynomial::one());
        assert_eq!(f.numerator(), &Polynomial::new(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn derivative_examples() {
        assert!(RationalFunction::constant(rat(5, 3)).derivative().is_zero());
        let x2 = RationalFunction::from(Polynomial::from_ints(&[0, 0, 1]));
        assert_eq!(
            x2.derivative(),
            RationalFunction::from(Polynomial::from_ints(&[0, 2]))
        );
        for alpha in [rat(2, 1), rat(3, 5)] {
            let d = example1_wplus(alpha.clone()).derivative();
            assert_eq!(d.evaluate(&rat(1, 1)).unwrap(), alpha);
        }
    }

    #[test]
    fn derivative_agrees_with_central_difference() {
        let f = example1_wplus(rat(2, 1));
        let h = 1e-6;
        let fd = (f.evaluate_f64(1.0 + h).unwrap() - f.evaluate_f64(1.0 - h).unwrap()) / (2.0 * h);
        assert!((fd - 2.0).abs() < 1e-8, "fd = {fd}");
    }

    #[test]
    fn laurent_examples() {
        let inv = RationalFunction::x().recip().unwrap();
        let zero = &real_roots(inv.denominator(), &rat(1, 8))[0];
        let l = inv.laurent_at_simple_pole(zero).unwrap();
        assert_eq!(l.residue, Scalar::Exact(rat(1, 1)));
        assert_eq!(l.finite_part, Scalar::Exact(rat(0, 1)));

        let f = RationalFunction::new(Polynomial::from_ints(&[5, 1]), Polynomial::x()).unwrap();
        let l = f.laurent_at_simple_pole(zero).unwrap();
        assert_eq!(l.residue, Scalar::Exact(rat(5, 1)));
        assert_eq!(l.finite_part, Scalar::Exact(rat(1, 1)));

        // (2/27) x (x^2-4)(x^2+8) / (x^2-1) at x = 1
        let ex2 = RationalFunction::new(
            Polynomial::from_ints(&[0, -32, 0, 4, 0, 1]).scale(&rat(2, 27)),
            Polynomial::from_ints(&[-1, 0, 1]),
        )
        .unwrap();
        let poles = ex2.real_poles(&rat(1, 8));
        let l = ex2.laurent_at_simple_pole(&poles[1]).unwrap();
        assert_eq!(l.residue, Scalar::Exact(rat(-1, 1)));
    }

    #[test]
    fn laurent_rejects_double_pole_and_non_pole() {
        let f =
            RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[0, 0, 1])).unwrap();
        let zero = &real_roots(&Polynomial::x(), &rat(1, 8))[0];
        assert!(matches!(
            f.laurent_at_simple_pole(zero),
            Err(QesError::NotASimplePole(_))
        ));
        let g = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[-1, 1])).unwrap();
        assert!(matches!(
            g.laurent_at_simple_pole(zero),
            Err(QesError::NotASimplePole(_))
        ));
    }

    #[test]
    fn laurent_at_irrational_pole() {
        // 1/(x^2 - 2): residue at sqrt 2 is 1/(2 sqrt 2)
        let f =
            RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[-2, 0, 1])).unwrap();
        let poles = f.real_poles(&rat(1, 8));
        let l = f.laurent_at_simple_pole(&poles[1]).unwrap();
        assert!((l.residue.to_f64() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn evaluation_examples() {
        // 2V- of example 1 at alpha = 2, x = 0: 0 + 1 + 4 - 5
        let d = Polynomial::from_ints(&[1, 0, 1]);
        let two_v = &(&RationalFunction::from(Polynomial::from_ints(&[-5, 0, 1]))
            + &RationalFunction::new(Polynomial::one(), d.pow(2)).unwrap())
            + &RationalFunction::new(Polynomial::from_ints(&[4]), d).unwrap();
        assert_eq!(two_v.evaluate(&rat(0, 1)).unwrap(), rat(0, 1));

        assert_eq!(
            example1_w(rat(2, 1)).evaluate(&rat(1, 1)).unwrap(),
            rat(-1, 2)
        );
        assert!(matches!(
            example1_w(rat(2, 1)).evaluate(&rat(0, 1)),
            Err(QesError::PoleEvaluation(_))
        ));

        let f = example1_wplus(rat(3, 2));
        for x in [rat(1, 3), rat(-7, 4), rat(11, 5)] {
            let exact = f.evaluate(&x).unwrap();
            let float = f.evaluate_f64(poly_to_f64(&x)).unwrap();
            let e = poly_to_f64(&exact);
            assert!((float - e).abs() <= 1e-12 * e.abs().max(1e-300));
            assert!((f.compile().eval(poly_to_f64(&x)) - e).abs() <= 1e-12 * e.abs());
        }
    }

    fn poly_to_f64(r: &Rational) -> f64 {
        poly::rational_to_f64(r)
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn small_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 1..=max_deg + 1)
            .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
        small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
    }

    fn ratfun() -> impl Strategy<Value = RationalFunction> {
        (small_poly(3), nonzero_poly(3)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_over_factor_reduces(p in small_poly(4), q in nonzero_poly(3)) {
            let f = RationalFunction::new(&p * &q, q).unwrap();
            prop_assert_eq!(f, RationalFunction::from(p));
        }

        #[test]
        fn leibniz_rule(f in ratfun(), g in ratfun()) {
            let lhs = (&f * &g).derivative();
            let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn finds_distinct_linear_factors(
            roots in prop::collection::btree_set((-40i64..=40, 1i64..=5), 1..=5),
            c in 1i64..=9,
        ) {
            let mut values: Vec<Rational> = roots.iter().map(|&(n, d)| rat(n, d)).collect();
            values.sort();
            values.dedup();
            let mut p = Polynomial::from_ints(&[c, 0, 1]);
            for r in &values {
                p = &p * &Polynomial::linear_factor(r);
            }
            let found = real_roots(&p, &rat(1, 100));
            prop_assert_eq!(found.len(), values.len());
            for (loc, r) in found.iter().zip(&values) {
                prop_assert_eq!(loc.exact.as_ref(), Some(r));
            }
        }

        #[test]
        fn residue_matches_quotient_formula(
            n in small_poly(3),
            r in (-9i64..=9, 1i64..=3),
            rest in nonzero_poly(2),
        ) {
            let r = rat(r.0, r.1);
            let rest_at_r = rest.eval(&r);
            prop_assume!(!rest_at_r.is_zero() && !n.eval(&r).is_zero());
            let den = &Polynomial::linear_factor(&r) * &rest;
            let f = RationalFunction::new(n.clone(), den.clone()).unwrap();
            let loc = real_roots(f.denominator(), &rat(1, 8))
                .into_iter()
                .find(|l| l.exact.as_ref() == Some(&r))
                .unwrap();
            let l = f.laurent_at_simple_pole(&loc).unwrap();
            let expect = n.eval(&r) / den.derivative().eval(&r);
            prop_assert_eq!(l.residue, Scalar::Exact(expect));
        }

        #[test]
        fn text_round_trip(p in small_poly(6)) {
            let strings = text::polynomial_to_strings(&p);
            prop_assert_eq!(text::polynomial_from_strings(&strings).unwrap(), p);
        }
    }
}
