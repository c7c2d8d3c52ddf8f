//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::error::{QesError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Subinterval budget per call.
pub const MAX_SUBINTERVALS: usize = 4096;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).abs())
}

/// Integral of `f` over `[a, b]` (either orientation) with absolute error at
/// most `density * |b - a|`, subdividing where the local estimate is too large.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, density: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut total = 0.0;
    let mut err_total = 0.0;
    let mut stack = vec![(lo, hi)];
    let mut used = 0;
    while let Some((x0, x1)) = stack.pop() {
        used += 1;
        let (val, err) = kronrod(&f, x0, x1);
        if !val.is_finite() {
            return Err(failure(a, b, density, f64::INFINITY));
        }
        let allowed = density * (x1 - x0);
        let floor = 50.0 * f64::EPSILON * val.abs();
        if err <= allowed.max(floor) || x1 - x0 <= 1e-12 * (hi - lo) {
            total += val;
            err_total += err;
            continue;
        }
        if used + stack.len() >= MAX_SUBINTERVALS {
            return Err(failure(a, b, density, err_total + err));
        }
        let mid = 0.5 * (x0 + x1);
        stack.push((mid, x1));
        stack.push((x0, mid));
    }
    Ok(sign * total)
}

fn failure(a: f64, b: f64, density: f64, estimate: f64) -> QesError {
    QesError::QuadratureFailure {
        a,
        b,
        tolerance: density * (b - a).abs(),
        estimate,
    }
}
