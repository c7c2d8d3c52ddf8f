use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{horner_f64, rational_to_f64};
use super::roots::{count_real_roots, real_roots, RootLocation};
use super::{Polynomial, Rational};
use crate::error::{QesError, Result};

/// Reduced quotient of polynomials: numerator and denominator are coprime
/// and the denominator is monic, so structural equality is mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(QesError::DivisionByZeroFunction);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lead = den.leading().unwrap().recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from(Polynomial::x())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from(Polynomial::constant(c))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `deg(num) - deg(den)`; `None` for the zero function.
    pub fn degree_gap(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        Self::new(num, den).expect("denominator square is nonzero")
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(QesError::DivisionByZeroFunction);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator unchanged")
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self(inner(x))` for a polynomial `inner`.
    pub fn compose(&self, inner: &Polynomial) -> Self {
        Self::new(self.num.compose(inner), self.den.compose(inner))
            .expect("composition of a nonzero denominator with a nonconstant polynomial is nonzero")
    }

    /// Whether the reduced denominator has a real root.
    pub fn has_real_poles(&self) -> bool {
        count_real_roots(&self.den) > 0
    }

    pub fn real_poles(&self, width: &Rational) -> Vec<RootLocation> {
        if self.den.is_constant() {
            Vec::new()
        } else {
            real_roots(&self.den, width)
        }
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(QesError::PoleEvaluation(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Float value; fails where the denominator evaluates to zero.
    pub fn evaluate_f64(&self, x: f64) -> Result<f64> {
        let d = self.den.eval_f64(x);
        if d == 0.0 || !d.is_finite() {
            return Err(QesError::PoleEvaluation(format!("{x}")));
        }
        Ok(self.num.eval_f64(x) / d)
    }

    /// Float coefficients for repeated evaluation.
    pub fn compile(&self) -> CompiledRational {
        CompiledRational {
            num: self.num.to_f64_coeffs(),
            den: self.den.to_f64_coeffs(),
        }
    }

    /// Residue and finite part at a simple real pole.
    ///
    /// With `f = N/D` and `D(r) = 0`, `D'(r) != 0`:
    /// `c_{-1} = N(r)/D'(r)` and `c_0 = (N'(r) D'(r) - N(r) D''(r)/2) / D'(r)^2`.
    pub fn laurent_at_simple_pole(&self, r: &RootLocation) -> Result<Laurent> {
        let describe = || r.to_string();
        if self.den.is_constant() {
            return Err(QesError::NotASimplePole(format!("{} has no poles", self)));
        }
        let pole = real_roots(&self.den, &Rational::new(1.into(), 1024.into()))
            .into_iter()
            .find(|p| match (&p.exact, &r.exact) {
                (Some(a), Some(b)) => a == b,
                (None, None) => (p.approx - r.approx).abs() <= 1e-9,
                _ => false,
            })
            .ok_or_else(|| QesError::NotASimplePole(format!("{} is not a pole", describe())))?;
        if pole.multiplicity != 1 {
            return Err(QesError::NotASimplePole(format!(
                "pole at {} has order {}",
                describe(),
                pole.multiplicity
            )));
        }
        let dn = self.num.derivative();
        let dd = self.den.derivative();
        let ddd = dd.derivative();
        match &r.exact {
            Some(x) => {
                let n = self.num.eval(x);
                let d1 = dd.eval(x);
                let d2 = ddd.eval(x);
                let residue = &n / &d1;
                let finite =
                    (dn.eval(x) * &d1 - &n * d2 / Rational::from_integer(2.into())) / (&d1 * &d1);
                Ok(Laurent {
                    residue: Scalar::Exact(residue),
                    finite_part: Scalar::Exact(finite),
                })
            }
            None => {
                let x = r.approx;
                let n = self.num.eval_f64(x);
                let d1 = dd.eval_f64(x);
                let d2 = ddd.eval_f64(x);
                Ok(Laurent {
                    residue: Scalar::Float(n / d1),
                    finite_part: Scalar::Float((dn.eval_f64(x) * d1 - n * d2 / 2.0) / (d1 * d1)),
                })
            }
        }
    }
}

/// Exact value when the evaluation point is rational, float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }
}

/// Leading Laurent data `c_{-1}/(x - r) + c_0 + O(x - r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    pub residue: Scalar,
    pub finite_part: Scalar,
}

/// Float copy of a rational function for hot loops.
#[derive(Clone, Debug)]
pub struct CompiledRational {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl CompiledRational {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        horner_f64(&self.num, x) / horner_f64(&self.den, x)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
