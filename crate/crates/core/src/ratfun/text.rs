//! `p/q` text form of rationals (`q` omitted when 1) and serde glue.
//!
//! Polynomials serialize as arrays of such strings, lowest degree first;
//! rational functions as `{ numerator, denominator }`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Polynomial, Rational, RationalFunction};
use crate::error::{QesError, Result};

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p` or `p/q` with integer `p`, `q` and `q != 0`. Decimal and
/// exponent notation are refused.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let fail = |reason: &str| QesError::ParseRational {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let int = |x: &str| -> Result<BigInt> {
        if x.is_empty()
            || !x
                .trim_start_matches(['-', '+'])
                .bytes()
                .all(|b| b.is_ascii_digit())
        {
            return Err(fail("expected an integer or p/q"));
        }
        BigInt::from_str(x).map_err(|_| fail("expected an integer or p/q"))
    };
    let n = int(n)?;
    let d = int(d)?;
    if d.is_zero() {
        return Err(fail("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn polynomial_to_strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

pub fn polynomial_from_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Polynomial> {
    coeffs
        .iter()
        .map(|c| parse_rational(c.as_ref()))
        .collect::<Result<Vec<_>>>()
        .map(Polynomial::new)
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        polynomial_to_strings(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        polynomial_from_strings(&v).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionRecord {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalFunctionRecord {
            numerator: self.numerator().clone(),
            denominator: self.denominator().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = RationalFunctionRecord::deserialize(d)?;
        RationalFunction::new(rec.numerator, rec.denominator).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "rational")]` for fields holding a [`Rational`].
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        parse_rational(&t).map_err(D::Error::custom)
    }
}
