//! Shared fixtures for the benchmarks.

use qes_core::ratfun::rat;
use qes_core::{Builtin, Polynomial, QesModel, RationalFunction};

pub fn example1() -> QesModel {
    Builtin::example1(rat(2, 1))
        .and_then(|b| b.model())
        .expect("example 1 is admissible")
}

pub fn example2() -> QesModel {
    Builtin::example2(rat(2, 1))
        .and_then(|b| b.model())
        .expect("example 2 is admissible")
}

/// Generator with irrational zeros, so classification has to bisect.
pub fn irrational_generator() -> RationalFunction {
    RationalFunction::new(
        Polynomial::from_ints(&[0, -3, 0, 1]),
        Polynomial::from_ints(&[-1, 0, 1]),
    )
    .expect("nonzero denominator")
}

/// `prod (x - k)` for `k = 1..=n` times `x^2 - 2`: rational and irrational roots.
pub fn mixed_roots(n: i64) -> Polynomial {
    (1..=n).fold(Polynomial::from_ints(&[-2, 0, 1]), |p, k| {
        &p * &Polynomial::from_ints(&[-k, 1])
    })
}
