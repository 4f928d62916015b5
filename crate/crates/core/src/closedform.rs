//! Closed-form statistics of the interference observable
//! `Â = I_N·sin(g(b + b†))` for a ground-state or thermal oscillator and a
//! coherent laser field.
//!
//! With `u = g² + Nθ_l²` and `φ = θ_g + Nθ_l` the ground-state results are
//!
//! ```text
//! I    = I_N·e^{−u/2}·sin φ
//! ⟨Â²⟩ = (I_N²/2)·(1 − e^{−2u}·cos 2φ)
//! D    = (I_N²/2)·(1 − e^{−u})·(1 + e^{−u}·cos 2φ)
//! ```
//!
//! A thermal oscillator multiplies the mean by `α = exp(−g²·n̄)` and the
//! oscillating part of `⟨Â²⟩` by `α⁴`; equivalently `u` becomes
//! `s = g²(1 + 2n̄) + Nθ_l²`, which is how the dispersion is evaluated
//! without cancellation when `u` is of order 10⁻²⁰.
//!
//! The photon-number average `Σ P(n)e^{inθ}` is taken either in the
//! large-`N` Gaussian form `e^{iNθ − Nθ²/2}` or exactly,
//! `exp(N(e^{iθ} − 1))`, see [`PhotonAverage`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, DerivedCouplings, DetectorParams, ModelError, PhaseState};

/// Tail bound required of [`thermal_trace_factor`].
pub const THERMAL_SUM_TAIL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("generating function diverges for t = {t} (need 0 <= t < 1)")]
    Divergent { t: f64 },
    #[error("thermal sum not converged at n_cut = {n_cut}: tail bound {tail_bound:e}")]
    NonConvergence { n_cut: usize, tail_bound: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `L_n(z)` by the three-term recurrence
/// `(k+1)L_{k+1} = (2k+1−z)L_k − kL_{k−1}`.
pub fn laguerre(n: usize, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn check_unit_interval(t: f64) -> Result<(), ClosedFormError> {
    if (0.0..1.0).contains(&t) {
        Ok(())
    } else {
        Err(ClosedFormError::Divergent { t })
    }
}

/// Partial sum `Σ_{n < n_terms} L_n(z)·tⁿ`.
pub fn laguerre_generating_sum(z: f64, t: f64, n_terms: usize) -> Result<f64, ClosedFormError> {
    check_unit_interval(t)?;
    let mut sum = 0.0;
    let mut power = 1.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n_terms {
        sum += cur * power;
        power *= t;
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - z) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(sum)
}

/// `e^{−zt/(1−t)}/(1−t)`.
pub fn laguerre_generating_function(z: f64, t: f64) -> Result<f64, ClosedFormError> {
    check_unit_interval(t)?;
    let one_minus = 1.0 - t;
    Ok((-z * t / one_minus).exp() / one_minus)
}

/// Thermal occupation and the attenuation it causes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    /// [K]
    pub temperature: f64,
    /// `kT` [J]
    pub theta: f64,
    /// `1/(e^{ħω₀/kT} − 1)`
    pub nbar: f64,
    /// `exp(−g²·n̄)`
    pub alpha: f64,
}

impl ThermalSpec {
    /// Zero temperature: `n̄ = 0`, `α = 1`.
    pub fn ground() -> Self {
        Self { temperature: 0.0, theta: 0.0, nbar: 0.0, alpha: 1.0 }
    }

    /// From the occupation directly; used by rescaled profiles where no
    /// physical temperature exists.
    pub fn from_nbar(g: f64, nbar: f64) -> Self {
        Self { temperature: f64::NAN, theta: f64::NAN, nbar, alpha: (-g * g * nbar).exp() }
    }

    /// `x = ħω₀/kT`.
    pub fn from_energy_ratio(g: f64, x: f64) -> Self {
        let nbar = occupation(x);
        Self { temperature: f64::NAN, theta: f64::NAN, nbar, alpha: (-g * g * nbar).exp() }
    }

    /// `g²(1 + 2n̄)`, the full thermal quadrature variance scaled by `g²`.
    fn quadrature_spread(&self, g: f64) -> f64 {
        g * g * (1.0 + 2.0 * self.nbar)
    }
}

/// Bose–Einstein occupation for `x = ħω₀/kT`; zero for `x = ∞`.
pub fn occupation(x: f64) -> f64 {
    if x.is_infinite() && x > 0.0 {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Thermal state of the oscillator at `temperature`, with `α` computed from
/// the oscillator quantum `ħω₀`.
pub fn thermal_alpha(couplings: &DerivedCouplings, params: &DetectorParams, temperature: f64) -> ThermalSpec {
    if temperature == 0.0 {
        return ThermalSpec::ground();
    }
    let theta = params.k_b * temperature;
    let nbar = occupation(params.hbar * params.omega0 / theta);
    ThermalSpec {
        temperature,
        theta,
        nbar,
        alpha: (-couplings.g * couplings.g * nbar).exp(),
    }
}

/// Normalized Gibbs-weighted Laguerre sum
/// `(1−q)·Σ_{n<n_cut} qⁿ·Σ_k (−1)^k C(n,k) g^{2k}/k!`, `q = e^{−x}`,
/// evaluated term by term. Equals `α` once converged.
pub fn thermal_trace_factor(g: f64, x: f64, n_cut: usize) -> Result<f64, ClosedFormError> {
    let z = g * g;
    let q = (-x).exp();
    let tail_bound = (0.5 * z).exp() * q.powi(n_cut as i32);
    if tail_bound >= THERMAL_SUM_TAIL {
        return Err(ClosedFormError::NonConvergence { n_cut, tail_bound });
    }
    let mut weight = -(-x).exp_m1();
    let mut total = 0.0;
    for n in 0..n_cut {
        if weight == 0.0 {
            break;
        }
        // inner finite sum, one binomial term at a time
        let mut term = 1.0;
        let mut inner = 1.0;
        for k in 0..n {
            let kf = k as f64;
            term *= -((n - k) as f64) * z / ((kf + 1.0) * (kf + 1.0));
            inner += term;
        }
        total += weight * inner;
        weight *= q;
    }
    Ok(total)
}

/// Partially averaged complex signal `e^{−g²/2}·e^{i(θ_g + Nθ_l)}` times the
/// oscillator trace factor, at temperature ratio `x = ħω₀/kT`. Its
/// imaginary part times `I_N` is the thermal mean with the photon-number
/// operator replaced by `N`.
pub fn thermal_sum_direct(inputs: &SignalInputs, x: f64, n_cut: usize) -> Result<Complex64, ClosedFormError> {
    let factor = thermal_trace_factor(inputs.g, x, n_cut)?;
    let phase = inputs.theta_g + inputs.photons * inputs.theta_l;
    Ok(Complex64::from_polar((-0.5 * inputs.g * inputs.g).exp() * factor, phase))
}

/// Exact Poissonian average `⟨e^{inθ}⟩ = exp(N(e^{iθ} − 1))`.
pub fn coherent_average_exact(theta: f64, photons: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    Complex64::new(-2.0 * photons * s * s, photons * theta.sin()).exp()
}

/// Large-`N` surrogate `e^{iNθ − Nθ²/2}`.
pub fn coherent_average_gaussian(theta: f64, photons: f64) -> Complex64 {
    Complex64::from_polar((-0.5 * photons * theta * theta).exp(), photons * theta)
}

/// How the photon-number average is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotonAverage {
    Gaussian,
    Poissonian,
}

/// Dimensionless inputs to the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalInputs {
    pub g: f64,
    pub theta_g: f64,
    pub theta_l: f64,
    /// Mean photon number N.
    pub photons: f64,
    /// Output power scale I_N.
    pub intensity: f64,
}

impl SignalInputs {
    pub fn at(t: f64, params: &DetectorParams) -> Result<Self, ModelError> {
        let couplings = model::derive_couplings(params)?;
        Ok(Self {
            g: couplings.g,
            theta_g: model::theta_g(t, params),
            theta_l: model::theta_l(t, params),
            photons: params.photons,
            intensity: params.intensity,
        })
    }

    pub fn from_phase(g: f64, phase: &PhaseState, photons: f64, intensity: f64) -> Self {
        Self { g, theta_g: phase.theta_g, theta_l: phase.theta_l, photons, intensity }
    }

    fn phase(&self) -> f64 {
        self.theta_g + self.photons * self.theta_l
    }

    fn radiation_spread(&self) -> f64 {
        self.photons * self.theta_l * self.theta_l
    }
}

/// Mean, second moment and dispersion of the output signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalStats {
    pub mean: f64,
    pub second_moment: f64,
    pub dispersion: f64,
}

/// The dispersion computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoutes {
    /// `⟨Â²⟩ − I²`
    pub difference: f64,
    /// `(I_N²/2)(1 − e^{−s})(1 + e^{−s}cos 2φ)`
    pub factored: f64,
}

/// Full statistics for the given oscillator preparation and photon average.
pub fn signal_stats(inputs: &SignalInputs, thermal: &ThermalSpec, average: PhotonAverage) -> SignalStats {
    match average {
        PhotonAverage::Gaussian => {
            let mean = mean_thermal(inputs, thermal);
            let s = thermal.quadrature_spread(inputs.g) + inputs.radiation_spread();
            let sin_phi = inputs.phase().sin();
            let decay2 = (-2.0 * s).exp();
            // 1 − e^{−2s}cos 2φ = (1 − e^{−2s}) + 2e^{−2s}sin²φ
            let second = 0.5
                * inputs.intensity.powi(2)
                * (-(-2.0 * s).exp_m1() + 2.0 * decay2 * sin_phi * sin_phi);
            SignalStats { mean, second_moment: second, dispersion: factored_dispersion(inputs, s) }
        }
        PhotonAverage::Poissonian => {
            let g2 = inputs.g * inputs.g;
            let first = Complex64::from_polar(1.0, inputs.theta_g)
                * coherent_average_exact(inputs.theta_l, inputs.photons);
            let second_h = Complex64::from_polar(1.0, 2.0 * inputs.theta_g)
                * coherent_average_exact(2.0 * inputs.theta_l, inputs.photons);
            let mean = thermal.alpha * inputs.intensity * (-0.5 * g2).exp() * first.im;
            let second = 0.5
                * inputs.intensity.powi(2)
                * (1.0 - thermal.alpha.powi(4) * (-2.0 * g2).exp() * second_h.re);
            SignalStats { mean, second_moment: second, dispersion: second - mean * mean }
        }
    }
}

fn factored_dispersion(inputs: &SignalInputs, s: f64) -> f64 {
    let decay = (-s).exp();
    0.5 * inputs.intensity.powi(2) * (-(-s).exp_m1()) * (1.0 + decay * (2.0 * inputs.phase()).cos())
}

/// Ground-state mean `I_N·e^{−(g²+Nθ_l²)/2}·sin(θ_g + Nθ_l)`.
pub fn mean_ground(inputs: &SignalInputs) -> f64 {
    mean_thermal(inputs, &ThermalSpec::ground())
}

pub fn dispersion_ground(inputs: &SignalInputs) -> SignalStats {
    signal_stats(inputs, &ThermalSpec::ground(), PhotonAverage::Gaussian)
}

/// Both evaluation routes of the ground-state dispersion.
pub fn dispersion_ground_routes(inputs: &SignalInputs) -> DispersionRoutes {
    let u = inputs.g * inputs.g + inputs.radiation_spread();
    let mean = mean_ground(inputs);
    let second = 0.5 * inputs.intensity.powi(2) * (1.0 - (-2.0 * u).exp() * (2.0 * inputs.phase()).cos());
    DispersionRoutes { difference: second - mean * mean, factored: factored_dispersion(inputs, u) }
}

/// Thermal mean `α·I_N·e^{−(g²+Nθ_l²)/2}·sin(θ_g + Nθ_l)`.
pub fn mean_thermal(inputs: &SignalInputs, thermal: &ThermalSpec) -> f64 {
    let u = inputs.g * inputs.g + inputs.radiation_spread();
    thermal.alpha * inputs.intensity * (-0.5 * u).exp() * inputs.phase().sin()
}

pub fn dispersion_thermal(inputs: &SignalInputs, thermal: &ThermalSpec) -> SignalStats {
    signal_stats(inputs, thermal, PhotonAverage::Gaussian)
}

/// Ground-state mean with the exponent `−(g² − Nθ_l²)/2` as originally
/// printed. Kept only so the brute-force check can reject it.
pub fn printed_mean_ground(inputs: &SignalInputs) -> f64 {
    let exponent = -0.5 * (inputs.g * inputs.g - inputs.radiation_spread());
    inputs.intensity * exponent.exp() * inputs.phase().sin()
}

/// Thermal mean with the prefactor `e^{+g²/2}` and no `Nθ_l²` term, as
/// originally printed. Kept only so the brute-force check can reject it.
pub fn printed_mean_thermal(inputs: &SignalInputs, thermal: &ThermalSpec) -> f64 {
    thermal.alpha * inputs.intensity * (0.5 * inputs.g * inputs.g).exp() * inputs.phase().sin()
}
