//! The two analytically known eigenfunctions of `H-`.
//!
//! Both are stored as `prefactor(x) * exp(-int_ref^x regular_part)`, where
//! the simple poles of the superpotential have been pulled out of the
//! integrand and turned into polynomial factors of the prefactor. A pole
//! with residue `-k` contributes `(x - p)^k` rather than `|x - p|^k`, which
//! is the sign choice that keeps the eigenfunction C^1 across its nodes.
//!
//! | level       | prefactor                             | regular part                                  |
//! |-------------|---------------------------------------|-----------------------------------------------|
//! | zero energy | `P- Pb`                               | `W + P-'/P- + Pb'/Pb`                         |
//! | epsilon     | `W+ Pa Pb^2 / P-`                     | `W1 - P-'/P- + Pa'/Pa + 2 Pb'/Pb`             |
//!
//! with `P-`, `Pa`, `Pb` vanishing on the `x-` zeros, the residue `-1` poles
//! and the residue `-3` poles of `W+`.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{QesError, Result};
use crate::quadrature;
use crate::ratfun::{real_roots, text, Polynomial, Rational, RationalFunction};
use crate::susy::{isolation_width, QesModel};

/// Absolute quadrature error allowed per unit length of integration.
pub const QUADRATURE_DENSITY: f64 = 1e-10;

/// Fraction of the sup-norm a value must exceed to fix the overall sign.
pub const SIGN_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    ZeroEnergy,
    EpsilonLevel,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::ZeroEnergy => "zero_energy",
            Level::EpsilonLevel => "epsilon_level",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveSpec {
    pub prefactor: RationalFunction,
    pub regular_part: RationalFunction,
    #[serde(with = "text::rational")]
    pub reference_point: Rational,
    pub which: Level,
    #[serde(with = "text::rational")]
    pub energy: Rational,
}

fn log_derivative(p: &Polynomial) -> RationalFunction {
    RationalFunction::new(p.derivative(), p.clone()).expect("nonzero polynomial")
}

pub fn build_wave_spec(model: &QesModel, which: Level) -> Result<WaveSpec> {
    let f = &model.profile.factors;
    let pair = &model.pair;
    let (prefactor, regular_part, energy) = match which {
        Level::ZeroEnergy => {
            let nodes = &f.minus_zeros * &f.poles_2b;
            (
                RationalFunction::from(nodes.clone()),
                &pair.w + &log_derivative(&nodes),
                Rational::zero(),
            )
        }
        Level::EpsilonLevel => {
            let up = &f.poles_2a * &f.poles_2b.pow(2);
            let prefactor = (&pair.wplus * &RationalFunction::from(up))
                .checked_div(&RationalFunction::from(f.minus_zeros.clone()))?;
            let two = Rational::from_integer(2.into());
            let regular = &(&(&pair.w1 - &log_derivative(&f.minus_zeros))
                + &log_derivative(&f.poles_2a))
                + &log_derivative(&f.poles_2b).scale(&two);
            (prefactor, regular, pair.epsilon.clone())
        }
    };
    for (name, part) in [("prefactor", &prefactor), ("regular part", &regular_part)] {
        if let Some(p) = part.real_poles(&isolation_width()).first() {
            return Err(QesError::ResidueMismatch {
                level: which.name().into(),
                detail: format!("{name} keeps a real pole at {p}"),
            });
        }
    }
    let reference_point = reference_point(model, &prefactor);
    Ok(WaveSpec {
        prefactor,
        regular_part,
        reference_point,
        which,
        energy,
    })
}

/// 0 unless the prefactor vanishes there; otherwise the midpoint between 0
/// and the nearest other feature (the positive one on ties).
fn reference_point(model: &QesModel, prefactor: &RationalFunction) -> Rational {
    let zero = Rational::zero();
    if !prefactor.numerator().eval(&zero).is_zero() {
        return zero;
    }
    let prefactor_roots = if prefactor.numerator().is_constant() {
        Vec::new()
    } else {
        real_roots(prefactor.numerator(), &isolation_width())
    };
    let nearest = prefactor_roots
        .iter()
        .chain(model.profile.features())
        .map(|r| r.representative())
        .filter(|r| !r.is_zero())
        .min_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    match nearest {
        Some(r) => r / Rational::from_integer(2.into()),
        None => Rational::from_integer(1.into()),
    }
}

/// Sup-normalize and make the first value above [`SIGN_THRESHOLD`] positive.
pub fn normalize_sup_sign(values: &mut [f64]) {
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup == 0.0 || !sup.is_finite() {
        return;
    }
    let flip = values
        .iter()
        .find(|v| v.abs() > SIGN_THRESHOLD * sup)
        .is_some_and(|v| *v < 0.0);
    let s = if flip { -1.0 / sup } else { 1.0 / sup };
    values.iter_mut().for_each(|v| *v *= s);
}

/// `int_ref^{x_i} regular_part` for every grid point.
fn cumulative_integrals(spec: &WaveSpec, grid: &[f64]) -> Result<Vec<f64>> {
    let reg = spec.regular_part.compile();
    let f = |x: f64| reg.eval(x);
    let r = spec.reference_point.to_f64().unwrap_or(0.0);
    let n = grid.len();
    let mut out = vec![0.0; n];
    let start = grid.partition_point(|&x| x < r);
    let mut acc = 0.0;
    let mut prev = r;
    for i in start..n {
        acc += quadrature::integrate(f, prev, grid[i], QUADRATURE_DENSITY)?;
        out[i] = acc;
        prev = grid[i];
    }
    acc = 0.0;
    prev = r;
    for i in (0..start).rev() {
        acc += quadrature::integrate(f, prev, grid[i], QUADRATURE_DENSITY)?;
        out[i] = acc;
        prev = grid[i];
    }
    Ok(out)
}

/// Evaluates the eigenfunction on a strictly increasing grid, sup-normalized
/// to 1 with the sign convention of [`normalize_sup_sign`].
pub fn eval_wave(spec: &WaveSpec, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QesError::InvalidGrid);
    }
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let integrals = cumulative_integrals(spec, grid)?;
    let shift = integrals.iter().cloned().fold(f64::INFINITY, f64::min);
    let pre = spec.prefactor.compile();
    let mut values: Vec<f64> = grid
        .iter()
        .zip(&integrals)
        .map(|(&x, &i)| pre.eval(x) * (shift - i).exp())
        .collect();
    normalize_sup_sign(&mut values);
    Ok(values)
}

/// Sign-changing real zeros of the prefactor: roots of odd multiplicity.
pub fn count_nodes(spec: &WaveSpec) -> usize {
    let num = spec.prefactor.numerator();
    if num.is_constant() {
        return 0;
    }
    real_roots(num, &isolation_width())
        .iter()
        .filter(|r| r.multiplicity % 2 == 1)
        .count()
}
