//! Superpotentials and partner potentials generated by `W+`.
//!
//! Given a generating function `W+` and an energy `eps > 0`:
//!
//! ```text
//! W- = (W+' - 2 eps) / W+
//! W  = (W+ - W-) / 2          W1 = (W+ + W-) / 2
//! V- = (W^2 - W') / 2         V+ = (W^2 + W') / 2
//! ```
//!
//! which makes `W^2 + W' = W1^2 - W1' + 2 eps` hold identically. Everything
//! here is exact; floats only appear once a potential is evaluated.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{QesError, Result};
use crate::ratfun::{real_roots, text, Polynomial, Rational, RationalFunction, Scalar};
use crate::spectral::{classify_with_epsilon, predict_levels, GeneratorProfile, LevelPrediction};

/// `W`, `W1`, `W-`, `W+` and the energy `eps` they were built with.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperpotentialPair {
    pub w: RationalFunction,
    pub w1: RationalFunction,
    pub wminus: RationalFunction,
    pub wplus: RationalFunction,
    #[serde(with = "text::rational")]
    pub epsilon: Rational,
}

impl SuperpotentialPair {
    /// `W^2 + W' - (W1^2 - W1') - 2 eps`; identically zero for a valid pair.
    pub fn riccati_residual(&self) -> RationalFunction {
        let lhs = &self.w.square() + &self.w.derivative();
        let rhs = &self.w1.square() - &self.w1.derivative();
        &(&lhs - &rhs) - &two_eps(&self.epsilon)
    }

    /// `(W1 + W - W+, W1 - W - W-)`
    pub fn split_residuals(&self) -> (RationalFunction, RationalFunction) {
        (
            &(&self.w1 + &self.w) - &self.wplus,
            &(&self.w1 - &self.w) - &self.wminus,
        )
    }

    /// `W+' - W- W+ - 2 eps`
    pub fn generator_residual(&self) -> RationalFunction {
        generator_equation_residual(&self.wplus, &self.wminus, &self.epsilon)
    }
}

/// The constructed potential together with its generator classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QesModel {
    pub pair: SuperpotentialPair,
    pub v_minus: RationalFunction,
    pub v_plus: RationalFunction,
    pub profile: GeneratorProfile,
}

impl QesModel {
    pub fn epsilon(&self) -> &Rational {
        &self.pair.epsilon
    }

    pub fn epsilon_f64(&self) -> f64 {
        self.pair.epsilon.to_f64().unwrap_or(f64::NAN)
    }

    pub fn prediction(&self) -> LevelPrediction {
        predict_levels(&self.profile)
    }

    /// `V+ - (W1^2 - W1')/2 - eps`
    pub fn partner_shift_residual(&self) -> RationalFunction {
        let half = Rational::new(1.into(), 2.into());
        let v1 = (&self.pair.w1.square() - &self.pair.w1.derivative()).scale(&half);
        &(&self.v_plus - &v1) - &RationalFunction::constant(self.pair.epsilon.clone())
    }

    /// `(2V- - W^2 + W', 2V+ - 2V- - 2W')`
    pub fn factorization_residuals(&self) -> (RationalFunction, RationalFunction) {
        let two = Rational::from_integer(2.into());
        let w = &self.pair.w;
        let dw = w.derivative();
        (
            &(&self.v_minus.scale(&two) - &w.square()) + &dw,
            &(&self.v_plus.scale(&two) - &self.v_minus.scale(&two)) - &dw.scale(&two),
        )
    }

    /// Whether every exact construction identity reduces to zero.
    pub fn identities_hold(&self) -> bool {
        let (s1, s2) = self.pair.split_residuals();
        let (f1, f2) = self.factorization_residuals();
        [
            self.pair.riccati_residual(),
            s1,
            s2,
            self.pair.generator_residual(),
            self.partner_shift_residual(),
            f1,
            f2,
        ]
        .iter()
        .all(RationalFunction::is_zero)
    }

    /// `V-` collapsed to a quadratic polynomial: the harmonic oscillator.
    pub fn harmonic_degeneration(&self) -> bool {
        self.v_minus.is_polynomial() && self.v_minus.numerator().degree() == Some(2)
    }
}

fn two_eps(eps: &Rational) -> RationalFunction {
    RationalFunction::constant(eps * Rational::from_integer(2.into()))
}

fn generator_equation_residual(
    wplus: &RationalFunction,
    wminus: &RationalFunction,
    eps: &Rational,
) -> RationalFunction {
    &(&wplus.derivative() - &(wminus * wplus)) - &two_eps(eps)
}

fn check_epsilon(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(QesError::NonPositiveEpsilon(eps.to_string()))
    }
}

/// How the energy was obtained.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct EpsilonInference {
    pub epsilon: Rational,
    /// Recovered from a float derivative at an irrational zero and then
    /// confirmed exactly.
    pub from_float: bool,
}

/// Energy `eps` fixed by pole cancellation: `W+'(x_k) = +-2 eps` at every real zero.
pub fn infer_epsilon(wplus: &RationalFunction) -> Result<Rational> {
    infer_epsilon_detailed(wplus).map(|e| e.epsilon)
}

pub(crate) fn infer_epsilon_detailed(wplus: &RationalFunction) -> Result<EpsilonInference> {
    if wplus.is_zero() {
        return Err(QesError::ZeroGenerator);
    }
    let zeros = if wplus.numerator().is_constant() {
        Vec::new()
    } else {
        real_roots(wplus.numerator(), &isolation_width())
    };
    if zeros.is_empty() {
        return Err(QesError::NoZeros);
    }
    if let Some(z) = zeros.iter().find(|z| z.multiplicity > 1) {
        return Err(QesError::DegenerateZero(z.to_string()));
    }
    let dw = wplus.derivative();
    let slopes: Vec<Scalar> = zeros
        .iter()
        .map(|z| match &z.exact {
            Some(r) => dw.evaluate(r).map(Scalar::Exact),
            None => dw.evaluate_f64(z.approx).map(Scalar::Float),
        })
        .collect::<Result<_>>()?;

    let half = Rational::new(1.into(), 2.into());
    let exact_pos = slopes.iter().find_map(|s| match s {
        Scalar::Exact(v) if v.is_positive() => Some(v * &half),
        _ => None,
    });
    let (epsilon, from_float) = match exact_pos {
        Some(e) => (e, false),
        None => {
            let float_pos = slopes.iter().find_map(|s| match s {
                Scalar::Float(v) if *v > 0.0 => Some(*v / 2.0),
                _ => None,
            });
            match float_pos {
                Some(v) => (rationalize(v), true),
                None => {
                    let v = slopes[0].to_f64() / 2.0;
                    return Err(QesError::NonPositiveEpsilon(format!("{v}")));
                }
            }
        }
    };
    let (plus, minus) = zero_class_polynomials(wplus, &epsilon);
    for (z, slope) in zeros.iter().zip(&slopes) {
        if !z.is_root_of(&plus) && !z.is_root_of(&minus) {
            return Err(QesError::InconsistentEpsilon(format!(
                "|W+'({z})| = {:.12} but 2 eps = {}",
                slope.to_f64().abs(),
                &epsilon * Rational::from_integer(2.into())
            )));
        }
    }
    Ok(EpsilonInference {
        epsilon,
        from_float,
    })
}

pub(crate) fn isolation_width() -> Rational {
    Rational::new(1.into(), 1024.into())
}

/// `(gcd(N, num(W+' - 2 eps)), gcd(N, num(W+' + 2 eps)))` with `N` the numerator of `W+`:
/// polynomials whose real roots are exactly the zeros with slope `+2 eps` and `-2 eps`.
pub(crate) fn zero_class_polynomials(
    wplus: &RationalFunction,
    eps: &Rational,
) -> (Polynomial, Polynomial) {
    let dw = wplus.derivative();
    let n = wplus.numerator();
    let plus = &dw - &two_eps(eps);
    let minus = &dw + &two_eps(eps);
    (n.gcd(plus.numerator()), n.gcd(minus.numerator()))
}

/// Continued-fraction approximation with denominators up to 10^6.
fn rationalize(x: f64) -> Rational {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > 1_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-12 * x.abs().max(1.0) || frac == 0.0 {
            break;
        }
        v = 1.0 / frac;
    }
    Rational::new(h1.into(), k1.into())
}

/// Builds `W`, `W1`, `W-` from `W+` and `eps`.
pub fn superpotentials_from_generator(
    wplus: &RationalFunction,
    epsilon: &Rational,
) -> Result<SuperpotentialPair> {
    check_epsilon(epsilon)?;
    if wplus.is_zero() {
        return Err(QesError::ZeroGenerator);
    }
    let wminus = (&wplus.derivative() - &two_eps(epsilon)).checked_div(wplus)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(SuperpotentialPair {
        w: (wplus - &wminus).scale(&half),
        w1: (wplus + &wminus).scale(&half),
        wminus,
        wplus: wplus.clone(),
        epsilon: epsilon.clone(),
    })
}

/// `(V-, V+)` for a superpotential `W`.
pub fn partner_potentials(w: &RationalFunction) -> (RationalFunction, RationalFunction) {
    let half = Rational::new(1.into(), 2.into());
    let sq = w.square();
    let dw = w.derivative();
    ((&sq - &dw).scale(&half), (&sq + &dw).scale(&half))
}

/// Partner potentials of the pair; fails when `V-` keeps a real pole.
pub fn potentials_from_superpotential(pair: SuperpotentialPair) -> Result<QesModel> {
    let profile = classify_with_epsilon(&pair.wplus, Some(&pair.epsilon))?;
    assemble(pair, profile)
}

fn assemble(pair: SuperpotentialPair, profile: GeneratorProfile) -> Result<QesModel> {
    let (v_minus, v_plus) = partner_potentials(&pair.w);
    if let Some(p) = v_minus.real_poles(&isolation_width()).first() {
        return Err(QesError::SingularPotential(p.to_string()));
    }
    Ok(QesModel {
        pair,
        v_minus,
        v_plus,
        profile,
    })
}

/// Classify, construct and validate in one go. A supplied `epsilon` must
/// agree exactly with the one the generator forces.
pub fn build_model(wplus: &RationalFunction, epsilon: Option<&Rational>) -> Result<QesModel> {
    let profile = classify_with_epsilon(wplus, epsilon)?;
    let pair = superpotentials_from_generator(wplus, &profile.epsilon)?;
    assemble(pair, profile)
}

/// `W+ = 2 eps phi/phi'` and `W- = -phi''/phi'`.
pub fn phi_to_wplus(
    phi: &RationalFunction,
    epsilon: &Rational,
) -> Result<(RationalFunction, RationalFunction)> {
    check_epsilon(epsilon)?;
    let d1 = phi.derivative();
    if d1.is_zero() {
        return Err(QesError::ConstantPhi);
    }
    let two = Rational::from_integer(2.into());
    let wplus = phi.checked_div(&d1)?.scale(&(epsilon * two));
    let wminus = -d1.derivative().checked_div(&d1)?;
    Ok((wplus, wminus))
}

/// `W+(x/a)/a`, which generates `V-(x/a)/a^2` with energy `eps/a^2`.
pub fn scale_generator(wplus: &RationalFunction, a: &Rational) -> Result<RationalFunction> {
    if a.is_zero() {
        return Err(QesError::ZeroScale);
    }
    let inner = Polynomial::new(vec![Rational::zero(), a.recip()]);
    Ok(wplus.compose(&inner).scale(&a.recip()))
}
