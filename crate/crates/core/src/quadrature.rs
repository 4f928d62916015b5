//! Adaptive Gauss–Kronrod quadrature on a finite interval.
//!
//! Used as the numerical fallback for the phase integrals and as an
//! independent check on their closed forms.

use num_complex::Complex64;

// 15-point Kronrod nodes (non-negative half) and weights; the odd-indexed
// nodes are the embedded 7-point Gauss rule.
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

const MAX_DEPTH: u32 = 60;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local Gauss/Kronrod discrepancies.
    pub error_estimate: f64,
    /// Integral of `|f|`, the natural scale for judging the error.
    pub abs_value: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs(), abs * half.abs())
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: (f64, f64, f64),
    tol: f64,
    depth: u32,
) -> Quadrature {
    let (value, err, abs) = whole;
    if err <= tol || depth >= MAX_DEPTH || (b - a).abs() < f64::EPSILON * a.abs().max(b.abs()) {
        return Quadrature { value, error_estimate: err, abs_value: abs };
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let l = adapt(f, a, mid, left, 0.5 * tol, depth + 1);
    let r = adapt(f, mid, b, right, 0.5 * tol, depth + 1);
    Quadrature {
        value: l.value + r.value,
        error_estimate: l.error_estimate + r.error_estimate,
        abs_value: l.abs_value + r.abs_value,
    }
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `rel_tol` times the integral of `|f|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error_estimate: 0.0, abs_value: 0.0 };
    }
    // A coarse pre-split keeps oscillatory integrands from fooling the
    // first error estimate.
    const PIECES: usize = 16;
    let step = (b - a) / PIECES as f64;
    let mut total = Quadrature { value: 0.0, error_estimate: 0.0, abs_value: 0.0 };
    let first: Vec<_> = (0..PIECES)
        .map(|i| {
            let lo = a + step * i as f64;
            let hi = if i + 1 == PIECES { b } else { lo + step };
            (lo, hi, gk15(&f, lo, hi))
        })
        .collect();
    let scale: f64 = first.iter().map(|(_, _, q)| q.2).sum();
    let tol = rel_tol * scale.max(f64::MIN_POSITIVE) / PIECES as f64;
    for (lo, hi, q) in first {
        let piece = adapt(&f, lo, hi, q, tol, 0);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.abs_value += piece.abs_value;
    }
    total
}

/// Complex-valued integrand, integrated part by part.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    let re = integrate(|x| f(x).re, a, b, rel_tol);
    let im = integrate(|x| f(x).im, a, b, rel_tol);
    Complex64::new(re.value, im.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, 1e-14);
        assert!((q.value - 13.5).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        // ∫₀^{20π} sin²(x) dx = 10π
        let q = integrate(|x| x.sin().powi(2), 0.0, 20.0 * PI, 1e-13);
        assert!((q.value - 10.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let fwd = integrate(f64::exp, 0.0, 1.0, 1e-14).value;
        let back = integrate(f64::exp, 1.0, 0.0, 1e-14).value;
        assert!((fwd + back).abs() < 1e-14);
        assert!((fwd - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn complex_exponential() {
        let z = integrate_complex(|x| Complex64::new(0.0, 3.0 * x).exp(), 0.0, 2.0, 1e-14);
        let exact = (Complex64::new(0.0, 6.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((z - exact).norm() < 1e-14);
    }
}
