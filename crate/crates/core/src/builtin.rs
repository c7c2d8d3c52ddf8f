//! Named generator families with known spectra.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{QesError, Result};
use crate::ratfun::text::format_rational;
use crate::ratfun::{Polynomial, Rational, RationalFunction};
use crate::susy::{build_model, phi_to_wplus, QesModel};

#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    /// `alpha x (x^2 - 1) / (x^2 + 1)`, with `eps = alpha / 2`.
    Example1 { alpha: Rational },
    /// `alpha x (x^2 - a^2)(x^2 + b^2) / (x^2 - 1)` for `a^2 > 3`.
    Example2 { a: Rational },
    /// `W+ = x`: the oscillator with `eps = 1/2`.
    Trivial,
    /// `W+ = 2 eps phi / phi'` for a polynomial `phi`.
    Phi { phi: Polynomial, epsilon: Rational },
}

pub const NAMES: [&str; 4] = ["example1", "example2", "trivial", "phi"];

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl Builtin {
    /// `params` follow the order `example1: alpha`, `example2: a`,
    /// `trivial: none`, `phi: eps, c0, c1, ...` (lowest degree first).
    pub fn from_name(name: &str, params: &[Rational]) -> Result<Self> {
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(QesError::InvalidParameter(format!(
                    "builtin {name} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "example1" => {
                arity(1)?;
                Self::example1(params[0].clone())
            }
            "example2" => {
                arity(1)?;
                Self::example2(params[0].clone())
            }
            "trivial" => {
                arity(0)?;
                Ok(Builtin::Trivial)
            }
            "phi" => match params.split_first() {
                Some((eps, coeffs)) if !coeffs.is_empty() => {
                    Self::phi(Polynomial::new(coeffs.to_vec()), eps.clone())
                }
                _ => Err(QesError::InvalidParameter(
                    "builtin phi takes eps followed by at least one coefficient".into(),
                )),
            },
            other => Err(QesError::InvalidParameter(format!(
                "unknown builtin {other:?} (expected one of {})",
                NAMES.join(", ")
            ))),
        }
    }

    pub fn example1(alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(QesError::InvalidParameter(format!(
                "example1 needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Builtin::Example1 { alpha })
    }

    pub fn example2(a: Rational) -> Result<Self> {
        if &a * &a <= int(3) {
            return Err(QesError::InvalidParameter(format!(
                "example2 needs a^2 > 3, got a = {a}"
            )));
        }
        Ok(Builtin::Example2 { a })
    }

    pub fn phi(phi: Polynomial, epsilon: Rational) -> Result<Self> {
        if phi.is_constant() {
            return Err(QesError::ConstantPhi);
        }
        if !epsilon.is_positive() {
            return Err(QesError::NonPositiveEpsilon(epsilon.to_string()));
        }
        Ok(Builtin::Phi { phi, epsilon })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Example1 { .. } => "example1",
            Builtin::Example2 { .. } => "example2",
            Builtin::Trivial => "trivial",
            Builtin::Phi { .. } => "phi",
        }
    }

    /// The generator and, where the family fixes it, its energy.
    pub fn generator(&self) -> Result<(RationalFunction, Option<Rational>)> {
        let x2 = |c: Rational| Polynomial::new(vec![c, Rational::zero(), Rational::one()]);
        match self {
            Builtin::Example1 { alpha } => {
                let num = (&Polynomial::x() * &x2(int(-1))).scale(alpha);
                Ok((RationalFunction::new(num, x2(int(1)))?, None))
            }
            Builtin::Example2 { a } => {
                let a2 = a * a;
                let b2 = &(&a2 * int(2)) / (&a2 - int(3));
                let alpha = int(2) / ((&a2 - int(1)) * (&b2 + int(1)));
                let eps = &(&a2 * &a2 * int(2)) / ((&a2 - int(1)) * (&a2 - int(1)) * int(3));
                let num = (&(&Polynomial::x() * &x2(-a2.clone())) * &x2(b2)).scale(&alpha);
                Ok((RationalFunction::new(num, x2(int(-1)))?, Some(eps)))
            }
            Builtin::Trivial => Ok((RationalFunction::x(), None)),
            Builtin::Phi { phi, epsilon } => {
                let (wplus, _) = phi_to_wplus(&RationalFunction::from(phi.clone()), epsilon)?;
                Ok((wplus, Some(epsilon.clone())))
            }
        }
    }

    pub fn model(&self) -> Result<QesModel> {
        let (wplus, eps) = self.generator()?;
        build_model(&wplus, eps.as_ref())
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Example1 { alpha } => write!(f, "example1(alpha={})", format_rational(alpha)),
            Builtin::Example2 { a } => write!(f, "example2(a={})", format_rational(a)),
            Builtin::Trivial => f.write_str("trivial"),
            Builtin::Phi { phi, epsilon } => {
                write!(f, "phi(phi={phi}, eps={})", format_rational(epsilon))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::rat;

    #[test]
    fn example1_levels() {
        let m = Builtin::example1(int(2)).unwrap().model().unwrap();
        assert_eq!(m.epsilon(), &int(1));
        let p = m.prediction();
        assert_eq!((p.index_zero_energy, p.index_epsilon), (1, 2));
    }

    #[test]
    fn example2_matches_closed_form() {
        let b = Builtin::example2(int(2)).unwrap();
        let (w, eps) = b.generator().unwrap();
        let expect = RationalFunction::new(
            Polynomial::from_ints(&[0, -32, 0, 4, 0, 1]),
            Polynomial::from_ints(&[-1, 0, 1]),
        )
        .unwrap()
        .scale(&rat(2, 27));
        assert_eq!(w, expect);
        assert_eq!(eps, Some(rat(32, 27)));
        let p = b.model().unwrap().prediction();
        assert_eq!((p.index_zero_energy, p.index_epsilon), (0, 3));
        // another admissible a
        let p = Builtin::example2(rat(5, 2))
            .unwrap()
            .model()
            .unwrap()
            .prediction();
        assert_eq!((p.index_zero_energy, p.index_epsilon), (0, 3));
    }

    #[test]
    fn phi_family() {
        // phi = x^3 - 3x, eps = 3/2: W+ = (x^3 - 3x) / (x^2 - 1)
        let b = Builtin::from_name("phi", &[rat(3, 2), int(0), int(-3), int(0), int(1)]).unwrap();
        let m = b.model().unwrap();
        assert!(m.identities_hold());
        assert_eq!(m.epsilon(), &rat(3, 2));
    }

    #[test]
    fn parameter_checks() {
        assert!(Builtin::from_name("example1", &[int(0)]).is_err());
        assert!(Builtin::from_name("example2", &[int(1)]).is_err());
        assert!(Builtin::from_name("trivial", &[int(1)]).is_err());
        assert!(Builtin::from_name("phi", &[int(1), int(5)]).is_err());
        assert!(Builtin::from_name("nope", &[]).is_err());
        assert_eq!(
            Builtin::from_name("trivial", &[]).unwrap().to_string(),
            "trivial"
        );
    }
}
