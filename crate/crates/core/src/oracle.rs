//! Finite-difference eigensolver for `H- = -1/2 d^2/dx^2 + V-` in a box.
//!
//! The operator is discretized with the 3-point Laplacian and Dirichlet
//! walls at `x = +-L`. Eigenvalues come from bisection on the Sturm count of
//! the resulting symmetric tridiagonal matrix, so level indices are certified
//! by construction; eigenvectors come from inverse iteration.

use serde::Serialize;

use crate::error::{QesError, Result};
use crate::ratfun::{CompiledRational, RationalFunction};
use crate::spectral::LevelPrediction;
use crate::susy::QesModel;
use crate::wavefun::normalize_sup_sign;

/// Absolute width at which eigenvalue bisection stops.
pub const EIGEN_TOLERANCE: f64 = 1e-8;

/// How far `E` may sit from the spectrum before [`eigenvector`] refuses it.
pub const EIGENVECTOR_WINDOW: f64 = 1e-6;

pub const MIN_POINTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Candidate box half-widths, tried smallest first.
    pub ladder: Vec<f64>,
    pub points: usize,
    /// Required height of `V-` at the walls above `eps`.
    pub margin: f64,
    /// Overrides [`default_tolerance`] when set.
    pub tolerance: Option<f64>,
    pub extrapolate: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            ladder: vec![12.0, 16.0, 24.0, 32.0, 48.0, 64.0],
            points: 4000,
            margin: 10.0,
            tolerance: None,
            extrapolate: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscretizationPlan {
    pub half_width: f64,
    pub points: usize,
}

impl DiscretizationPlan {
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// All grid points, walls included.
    pub fn grid(&self) -> Vec<f64> {
        symmetric_grid(self.half_width, self.points)
    }

    /// Same box at half the step.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            points: 2 * self.points - 1,
        }
    }
}

/// `n` uniform points on `[-l, l]`, mirror-symmetric bit for bit.
pub fn symmetric_grid(l: f64, n: usize) -> Vec<f64> {
    let m = (n.max(2) - 1) as f64;
    (0..n).map(|i| l * (2.0 * i as f64 - m) / m).collect()
}

/// 2e-3, loosened to 5e-3 when `V-` grows faster than quadratically (a
/// steeper well leaves a larger `h^2` error at the default resolution).
pub fn default_tolerance(v_minus: &RationalFunction) -> f64 {
    match v_minus.degree_gap() {
        Some(g) if g > 2 => 5e-3,
        _ => 2e-3,
    }
}

pub fn plan_grid(
    v_minus: &RationalFunction,
    epsilon: f64,
    config: &OracleConfig,
) -> Result<DiscretizationPlan> {
    if config.points < MIN_POINTS {
        return Err(QesError::InvalidParameter(format!(
            "point count {} is below {MIN_POINTS}",
            config.points
        )));
    }
    let v = v_minus.compile();
    let floor = epsilon + config.margin;
    let mut ladder: Vec<f64> = config
        .ladder
        .iter()
        .copied()
        .filter(|l| *l > 0.0 && l.is_finite())
        .collect();
    ladder.sort_by(f64::total_cmp);
    let largest = ladder.last().copied().unwrap_or(0.0);
    ladder
        .into_iter()
        .find(|&l| v.eval(l) >= floor && v.eval(-l) >= floor)
        .map(|half_width| DiscretizationPlan {
            half_width,
            points: config.points,
        })
        .ok_or(QesError::BoxTooSmall(floor, largest))
}

/// Interior block of the discretized operator: constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(v: &CompiledRational, plan: &DiscretizationPlan) -> Result<Self> {
        if plan.points < 3 || plan.half_width.is_nan() || plan.half_width <= 0.0 {
            return Err(QesError::InvalidParameter(format!(
                "degenerate plan {plan:?}"
            )));
        }
        let h = plan.step();
        let kinetic = 1.0 / (h * h);
        let grid = plan.grid();
        let diag: Vec<f64> = grid[1..grid.len() - 1]
            .iter()
            .map(|&x| kinetic + v.eval(x))
            .collect();
        if diag.iter().any(|d| !d.is_finite()) {
            return Err(QesError::ConvergenceFailure(
                "potential is not finite on the grid".into(),
            ));
        }
        Ok(Self {
            diag,
            off: -0.5 * kinetic,
        })
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let pivmin = f64::MIN_POSITIVE.max(e2 * f64::EPSILON);
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 {
                d - lambda
            } else {
                d - lambda - e2 / q
            };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(QesError::InvalidParameter(format!(
                "{k} eigenvalues requested from a {}-point interior",
                self.len()
            )));
        }
        let (lo0, mut hi) = self.gershgorin();
        let mut out = vec![0.0; k];
        // top-down so each result caps the bracket of the next one
        for j in (0..k).rev() {
            let mut lo = lo0;
            let mut iterations = 0;
            while hi - lo > EIGEN_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iterations += 1;
                if iterations > 200 {
                    return Err(QesError::ConvergenceFailure(format!(
                        "bisection for eigenvalue {j} stalled"
                    )));
                }
            }
            out[j] = 0.5 * (lo + hi);
            hi = out[j] + EIGEN_TOLERANCE;
        }
        if out.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QesError::ConvergenceFailure(
                "eigenvalues closer than the bisection tolerance".into(),
            ));
        }
        Ok(out)
    }
}

/// The `k` lowest eigenvalues, ascending.
pub fn eigenvalues(
    v_minus: &RationalFunction,
    plan: &DiscretizationPlan,
    k: usize,
) -> Result<Vec<f64>> {
    Tridiagonal::new(&v_minus.compile(), plan)?.lowest(k)
}

/// Richardson combination `(4 E(h/2) - E(h)) / 3` of the plan and its refinement.
pub fn eigenvalues_extrapolated(
    v_minus: &RationalFunction,
    plan: &DiscretizationPlan,
    k: usize,
) -> Result<Vec<f64>> {
    let coarse = eigenvalues(v_minus, plan, k)?;
    let fine = eigenvalues(v_minus, &plan.refined(), k)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

/// Gaussian elimination with partial pivoting on a tridiagonal system whose
/// off-diagonals are all `off`. Overwrites `rhs` with the solution.
fn solve_shifted(diag: &[f64], off: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut d = diag.to_vec();
    let mut du = vec![off; n.saturating_sub(1)];
    let mut du2 = vec![0.0; n.saturating_sub(1)];
    let dl = off;
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl.abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl / d[i];
            d[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
        } else {
            let fact = d[i] / dl;
            d[i] = dl;
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let b = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = b - fact * rhs[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    rhs[n - 1] /= d[n - 1];
    if n > 1 {
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

/// Eigenvector for the eigenvalue near `energy`, on the full grid of `plan`
/// (zero at both walls), sup-normalized with the wavefunction sign rule.
pub fn eigenvector(
    v_minus: &RationalFunction,
    plan: &DiscretizationPlan,
    energy: f64,
) -> Result<Vec<f64>> {
    let t = Tridiagonal::new(&v_minus.compile(), plan)?;
    let inside =
        t.count_below(energy + EIGENVECTOR_WINDOW) - t.count_below(energy - EIGENVECTOR_WINDOW);
    if inside == 0 {
        return Err(QesError::NotAnEigenvalue(energy));
    }
    let shifted: Vec<f64> = t.diag.iter().map(|d| d - energy).collect();
    let n = t.len();
    // lopsided start so no parity class is missed
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / n as f64).collect();
    for _ in 0..4 {
        solve_shifted(&shifted, t.off, &mut v);
        let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(sup.is_finite() && sup > 0.0) {
            return Err(QesError::ConvergenceFailure(
                "inverse iteration broke down".into(),
            ));
        }
        v.iter_mut().for_each(|x| *x /= sup);
    }
    let mut full = Vec::with_capacity(n + 2);
    full.push(0.0);
    full.extend(v);
    full.push(0.0);
    normalize_sup_sign(&mut full);
    Ok(full)
}

/// Sign changes along a vector, ignoring values below `1e-8` of its sup-norm.
pub fn sign_changes(values: &[f64]) -> usize {
    let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values.iter().filter(|v| v.abs() > 1e-8 * sup) {
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub plan: DiscretizationPlan,
    pub extrapolated: bool,
    pub tolerance: f64,
    pub eigenvalues: Vec<f64>,
    pub predicted_zero_index: usize,
    pub predicted_epsilon_index: usize,
    pub matched_zero_index: usize,
    pub matched_epsilon_index: usize,
    pub discrepancy_zero: f64,
    pub discrepancy_epsilon: f64,
    pub verdict: Verdict,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn nearest(values: &[f64], target: f64) -> (usize, f64) {
    values
        .iter()
        .map(|v| (v - target).abs())
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((usize::MAX, f64::INFINITY))
}

/// Checks that the spectrum has `0` and `eps` at the predicted state numbers.
pub fn verify_prediction(
    model: &QesModel,
    prediction: &LevelPrediction,
    config: &OracleConfig,
) -> Result<SpectrumReport> {
    let eps = model.epsilon_f64();
    let plan = plan_grid(&model.v_minus, eps, config)?;
    let k = prediction.index_epsilon.max(prediction.index_zero_energy) + 3;
    let eigenvalues = if config.extrapolate {
        eigenvalues_extrapolated(&model.v_minus, &plan, k)?
    } else {
        eigenvalues(&model.v_minus, &plan, k)?
    };
    let tolerance = config
        .tolerance
        .unwrap_or_else(|| default_tolerance(&model.v_minus));
    let (matched_zero_index, discrepancy_zero) = nearest(&eigenvalues, 0.0);
    let (matched_epsilon_index, discrepancy_epsilon) = nearest(&eigenvalues, eps);
    let ok = matched_zero_index == prediction.index_zero_energy
        && matched_epsilon_index == prediction.index_epsilon
        && discrepancy_zero <= tolerance
        && discrepancy_epsilon <= tolerance;
    Ok(SpectrumReport {
        plan,
        extrapolated: config.extrapolate,
        tolerance,
        eigenvalues,
        predicted_zero_index: prediction.index_zero_energy,
        predicted_epsilon_index: prediction.index_epsilon,
        matched_zero_index,
        matched_epsilon_index,
        discrepancy_zero,
        discrepancy_epsilon,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}
