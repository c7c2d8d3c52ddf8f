//! Classification of the real zeros and poles of `W+` and the level indices
//! they imply.
//!
//! Admissible features:
//! - simple zeros with `W+' = +2 eps` (`x+`) or `W+' = -2 eps` (`x-`);
//! - simple poles with residue `-1` and any finite part (`a`, case 2a);
//! - simple poles with residue `-3` and zero finite part (`b`, case 2b).
//!
//! Membership is decided exactly. Each class is the real zero set of a gcd
//! with the numerator or denominator of `W+`, so irrational features are
//! tested by Sturm counting inside their isolating brackets.

use std::fmt;

use num_traits::Signed;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{QesError, Result};
use crate::ratfun::{
    count_real_roots, real_roots, text, Polynomial, Rational, RationalFunction, RootLocation,
};
use crate::susy::{infer_epsilon_detailed, isolation_width, zero_class_polynomials};

/// How the classification was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// `eps` read off a rational zero; every test exact.
    Exact,
    /// `eps` recovered from float slopes at irrational zeros, then confirmed
    /// by exact gcd membership.
    Numerical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FeatureCounts {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub m_zero: usize,
}

/// Monic polynomials whose real roots are exactly one feature class each.
/// They may also carry complex roots, which never affect real behaviour.
#[derive(Clone, Debug, PartialEq)]
pub struct FeaturePolynomials {
    pub plus_zeros: Polynomial,
    pub minus_zeros: Polynomial,
    pub poles_2a: Polynomial,
    pub poles_2b: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorProfile {
    #[serde(serialize_with = "roots_ser")]
    pub plus_zeros: Vec<RootLocation>,
    #[serde(serialize_with = "roots_ser")]
    pub minus_zeros: Vec<RootLocation>,
    #[serde(serialize_with = "roots_ser")]
    pub poles_2a: Vec<RootLocation>,
    #[serde(serialize_with = "roots_ser")]
    pub poles_2b: Vec<RootLocation>,
    #[serde(with = "text::rational")]
    pub epsilon: Rational,
    pub counts: FeatureCounts,
    pub certainty: Certainty,
    #[serde(skip)]
    pub factors: FeaturePolynomials,
}

impl GeneratorProfile {
    /// All classified points, in increasing order.
    pub fn features(&self) -> Vec<&RootLocation> {
        let mut all: Vec<&RootLocation> = self
            .plus_zeros
            .iter()
            .chain(&self.minus_zeros)
            .chain(&self.poles_2a)
            .chain(&self.poles_2b)
            .collect();
        all.sort_by(|a, b| a.cmp_position(b));
        all
    }
}

fn witness_ser<S: Serializer>(
    w: &Option<RootLocation>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Exact points serialize as `"p/q"`, bracketed ones as `["lo", "hi"]`.
fn roots_ser<S: Serializer>(roots: &[RootLocation], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    #[serde(untagged)]
    enum Loc {
        Exact(String),
        Interval([String; 2]),
    }
    let mut seq = s.serialize_seq(Some(roots.len()))?;
    for r in roots {
        let loc = match &r.exact {
            Some(x) => Loc::Exact(text::format_rational(x)),
            None => Loc::Interval([text::format_rational(&r.lo), text::format_rational(&r.hi)]),
        };
        seq.serialize_element(&loc)?;
    }
    seq.end()
}

/// State numbers of the two analytically known levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelPrediction {
    /// State number of the zero-energy eigenfunction.
    pub index_zero_energy: usize,
    /// State number of the eigenfunction with energy `eps`.
    pub index_epsilon: usize,
    #[serde(with = "text::rational")]
    pub epsilon: Rational,
}

impl fmt::Display for LevelPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E=0 is state {}, E={} is state {}",
            self.index_zero_energy, self.epsilon, self.index_epsilon
        )
    }
}

pub fn classify_generator(wplus: &RationalFunction) -> Result<GeneratorProfile> {
    classify_with_epsilon(wplus, None)
}

/// Like [`classify_generator`], but a supplied `eps` must match the forced one exactly.
pub fn classify_with_epsilon(
    wplus: &RationalFunction,
    epsilon: Option<&Rational>,
) -> Result<GeneratorProfile> {
    if wplus.is_zero() {
        return Err(QesError::ZeroGenerator);
    }
    check_asymptotics(wplus)?;

    let inferred = infer_epsilon_detailed(wplus)?;
    if let Some(e) = epsilon {
        if *e != inferred.epsilon {
            return Err(QesError::InconsistentEpsilon(format!(
                "supplied eps = {e} but the zeros of W+ require eps = {}",
                inferred.epsilon
            )));
        }
    }
    let eps = inferred.epsilon;
    let width = isolation_width();
    let (plus_poly, minus_poly) = zero_class_polynomials(wplus, &eps);
    let mut plus_zeros = Vec::new();
    let mut minus_zeros = Vec::new();
    for z in real_roots(wplus.numerator(), &width) {
        if z.is_root_of(&plus_poly) {
            plus_zeros.push(z);
        } else {
            minus_zeros.push(z);
        }
    }

    let num = wplus.numerator();
    let den = wplus.denominator();
    let dd = den.derivative();
    let three = Rational::from_integer(3.into());
    let res1 = den.gcd(&(num + &dd));
    let res3 = den.gcd(&(num + &dd.scale(&three)));
    // 2 D'^2 c0 = 2 N' D' - N D''
    let finite = &(&num.derivative() * &dd).scale(&Rational::from_integer(2.into()))
        - &(num * &dd.derivative());
    let res3_flat = res3.gcd(&finite);

    let mut poles_2a = Vec::new();
    let mut poles_2b = Vec::new();
    for p in wplus.real_poles(&width) {
        if p.multiplicity > 1 {
            return Err(QesError::UnsupportedPole(format!(
                "order {} pole at {p}",
                p.multiplicity
            )));
        }
        if p.is_root_of(&res1) {
            poles_2a.push(p);
        } else if p.is_root_of(&res3) {
            if !p.is_root_of(&res3_flat) {
                let l = wplus.laurent_at_simple_pole(&p)?;
                return Err(QesError::UnsupportedPole(format!(
                    "residue -3 at {p} with nonzero finite part {:.12}",
                    l.finite_part.to_f64()
                )));
            }
            poles_2b.push(p);
        } else {
            let l = wplus.laurent_at_simple_pole(&p)?;
            return Err(QesError::UnsupportedPole(format!(
                "residue {:.12} at {p} (only -1, or -3 with zero finite part, are admissible)",
                l.residue.to_f64()
            )));
        }
    }

    let counts = FeatureCounts {
        n_plus: plus_zeros.len(),
        n_minus: minus_zeros.len(),
        n_zero: poles_2a.len(),
        m_zero: poles_2b.len(),
    };
    if counts.n_plus != counts.n_minus + counts.n_zero + counts.m_zero + 1 {
        return Err(QesError::CountIdentity {
            n_plus: counts.n_plus,
            n_minus: counts.n_minus,
            n_zero: counts.n_zero,
            m_zero: counts.m_zero,
        });
    }

    Ok(GeneratorProfile {
        plus_zeros,
        minus_zeros,
        poles_2a,
        poles_2b,
        epsilon: eps,
        counts,
        certainty: if inferred.from_float {
            Certainty::Numerical
        } else {
            Certainty::Exact
        },
        factors: FeaturePolynomials {
            plus_zeros: plus_poly,
            minus_zeros: minus_poly,
            poles_2a: res1,
            poles_2b: res3_flat,
        },
    })
}

/// `W+ -> -inf` at `-inf` and `+inf` at `+inf` through polynomial growth:
/// odd positive degree gap and positive leading ratio.
fn check_asymptotics(wplus: &RationalFunction) -> Result<()> {
    let gap = wplus.degree_gap().unwrap_or(0);
    let lead_positive = wplus.numerator().leading().is_some_and(Signed::is_positive);
    if gap <= 0 || gap % 2 == 0 {
        return Err(QesError::NonNormalizable(format!(
            "degree gap {gap} is not a positive odd number"
        )));
    }
    if !lead_positive {
        return Err(QesError::NonNormalizable(
            "leading coefficient ratio is negative".into(),
        ));
    }
    Ok(())
}

pub fn predict_levels(profile: &GeneratorProfile) -> LevelPrediction {
    let c = profile.counts;
    LevelPrediction {
        index_zero_energy: c.n_minus + c.m_zero,
        index_epsilon: c.n_minus + c.n_zero + 2 * c.m_zero + 1,
        epsilon: profile.epsilon.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsingularVerdict {
    pub nonsingular: bool,
    /// A real pole of `V-` when one exists.
    #[serde(
        serialize_with = "witness_ser",
        skip_serializing_if = "Option::is_none"
    )]
    pub witness: Option<RootLocation>,
}

/// Whether the reduced denominator of `V-` has no real root.
pub fn verify_nonsingular(v_minus: &RationalFunction) -> NonsingularVerdict {
    if count_real_roots(v_minus.denominator()) == 0 {
        return NonsingularVerdict {
            nonsingular: true,
            witness: None,
        };
    }
    NonsingularVerdict {
        nonsingular: false,
        witness: v_minus.real_poles(&isolation_width()).into_iter().next(),
    }
}

/// True when the zero-energy level is an excited state, i.e. negative
/// energies exist below it.
pub fn singular_superpotential_spectrum_note(profile: &GeneratorProfile) -> bool {
    predict_levels(profile).index_zero_energy > 0
}
