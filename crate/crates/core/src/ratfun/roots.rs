//! Real-root isolation with Sturm sequences over exact rationals.
//!
//! Roots of a square-free polynomial are bracketed by bisection on Sturm
//! sign-variation counts. Every isolated root is tested for rationality
//! exactly: a rational root `u/v` of a primitive integer polynomial with
//! leading coefficient `a` has `v | a`, so once the bracket is narrower than
//! `1/|a|` there is at most one candidate `m/|a|` left to test.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::rational_to_f64;
use super::{Polynomial, Rational};

/// Absolute width below which an irrational root bracket is considered refined.
pub const REFINE_WIDTH: f64 = 1e-12;

/// One real root of a polynomial.
#[derive(Clone, PartialEq)]
pub struct RootLocation {
    /// Set when the root is rational; `lo == hi == exact` in that case.
    pub exact: Option<Rational>,
    pub lo: Rational,
    pub hi: Rational,
    /// Float approximation of the root.
    pub approx: f64,
    /// Bound on `|approx - root|`.
    pub error_bound: f64,
    pub multiplicity: usize,
}

impl RootLocation {
    fn exact(r: Rational, multiplicity: usize) -> Self {
        let approx = rational_to_f64(&r);
        RootLocation {
            lo: r.clone(),
            hi: r.clone(),
            exact: Some(r),
            approx,
            error_bound: approx.abs() * f64::EPSILON,
            multiplicity,
        }
    }

    fn bracketed(lo: Rational, hi: Rational, multiplicity: usize) -> Self {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let approx = rational_to_f64(&mid);
        let half = rational_to_f64(&((&hi - &lo) / Rational::from_integer(2.into())));
        RootLocation {
            exact: None,
            lo,
            hi,
            approx,
            error_bound: half + approx.abs() * f64::EPSILON,
            multiplicity,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// A rational inside the bracket (the root itself when exact).
    pub fn representative(&self) -> Rational {
        match &self.exact {
            Some(r) => r.clone(),
            None => (&self.lo + &self.hi) / Rational::from_integer(2.into()),
        }
    }

    /// Whether `p` vanishes at this root.
    ///
    /// For a bracketed root the bracket must isolate it from every other root
    /// of `p` with non-root endpoints, which holds whenever `p` divides the
    /// polynomial the root was isolated from.
    pub fn is_root_of(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        match &self.exact {
            Some(r) => p.eval(r).is_zero(),
            None => {
                let sf = p.squarefree_part();
                if sf.is_constant() {
                    return false;
                }
                SturmSequence::new(&sf).count_between(&self.lo, &self.hi) > 0
            }
        }
    }

    /// Compares positions; exact ordering whenever the brackets are disjoint.
    pub fn cmp_position(&self, other: &Self) -> Ordering {
        if self.hi < other.lo {
            Ordering::Less
        } else if other.hi < self.lo {
            Ordering::Greater
        } else {
            self.approx
                .partial_cmp(&other.approx)
                .unwrap_or(Ordering::Equal)
        }
    }
}

impl fmt::Display for RootLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "[{}, {}] (~{:.12})", self.lo, self.hi, self.approx),
        }
    }
}

impl fmt::Debug for RootLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootLocation({self}, mult {})", self.multiplicity)
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<Polynomial>,
}

impl SturmSequence {
    pub fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone()];
        if p.is_constant() {
            return SturmSequence { chain };
        }
        chain.push(p.derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        SturmSequence { chain }
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self, negative: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at_infinity(negative)))
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_between(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo)
            .saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots.
    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(true)
            .saturating_sub(self.variations_at_infinity(false))
    }
}

/// Number of distinct real roots of `p` (zero for constants).
pub fn count_real_roots(p: &Polynomial) -> usize {
    if p.is_constant() {
        return 0;
    }
    SturmSequence::new(&p.squarefree_part()).count_real()
}

/// All real roots of `p` in increasing order, with multiplicities.
///
/// Brackets of irrational roots are narrower than `width` and than
/// [`REFINE_WIDTH`]. Panics if `p` is the zero polynomial or `width <= 0`.
pub fn real_roots(p: &Polynomial, width: &Rational) -> Vec<RootLocation> {
    assert!(!p.is_zero(), "real_roots of the zero polynomial");
    assert!(width.is_positive(), "isolation width must be positive");
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        out.extend(isolate_squarefree(&factor, width, mult));
    }
    out.sort_by(|a, b| a.cmp_position(b));
    out
}

fn cauchy_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().unwrap().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

fn isolate_squarefree(p: &Polynomial, width: &Rational, mult: usize) -> Vec<RootLocation> {
    let sturm = SturmSequence::new(p);
    let total = sturm.count_real();
    let mut found = Vec::with_capacity(total);
    if total == 0 {
        return found;
    }
    let lead_scale = Rational::from_integer(p.primitive_leading());
    let refine = Rational::new(BigInt::one(), BigInt::from(1_000_000_000_000_i64));
    let target = [width.clone(), lead_scale.recip(), refine]
        .into_iter()
        .min()
        .unwrap();

    let bound = cauchy_bound(p);
    let two = Rational::from_integer(2.into());
    // (lo, hi, root count), endpoints never roots
    let mut stack = vec![(-bound.clone(), bound, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            found.push(resolve_single(p, lo, hi, &lead_scale, &target, mult));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if p.eval(&mid).is_zero() {
            found.push(RootLocation::exact(mid.clone(), mult));
            let (left, right) = exclude_point(p, &sturm, &lo, &hi, &mid);
            let cl = sturm.count_between(&lo, &left);
            let cr = sturm.count_between(&right, &hi);
            stack.push((lo, left, cl));
            stack.push((right, hi, cr));
        } else {
            let cl = sturm.count_between(&lo, &mid);
            stack.push((mid.clone(), hi, count - cl));
            stack.push((lo, mid, cl));
        }
    }
    found
}

/// Shrinks a symmetric window around the exact root `mid` until it contains
/// no other root and its endpoints are not roots.
fn exclude_point(
    p: &Polynomial,
    sturm: &SturmSequence,
    lo: &Rational,
    hi: &Rational,
    mid: &Rational,
) -> (Rational, Rational) {
    let two = Rational::from_integer(2.into());
    let mut delta = (hi - lo) / Rational::from_integer(4.into());
    loop {
        let l = mid - &delta;
        let r = mid + &delta;
        if !p.eval(&l).is_zero() && !p.eval(&r).is_zero() && sturm.count_between(&l, &r) == 1 {
            return (l, r);
        }
        delta /= &two;
    }
}

/// `p` has exactly one root in `(lo, hi)`; neither endpoint is a root.
fn resolve_single(
    p: &Polynomial,
    mut lo: Rational,
    mut hi: Rational,
    lead_scale: &Rational,
    target: &Rational,
    mult: usize,
) -> RootLocation {
    let two = Rational::from_integer(2.into());
    let mut sign_lo = p.sign_at(&lo);
    loop {
        // Candidate rational root: the unique m/|a| strictly inside the bracket.
        if (&hi - &lo) * lead_scale < Rational::one() {
            let m = (&lo * lead_scale).floor() + Rational::one();
            let cand = m / lead_scale;
            if cand > lo && cand < hi && p.eval(&cand).is_zero() {
                return RootLocation::exact(cand, mult);
            }
            if &hi - &lo < *target {
                return RootLocation::bracketed(lo, hi, mult);
            }
        }
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == Ordering::Equal {
            return RootLocation::exact(mid, mult);
        }
        if s == sign_lo {
            lo = mid;
            sign_lo = s;
        } else {
            hi = mid;
        }
    }
}
