//! Physical parameters, coupling constants and the time-dependent phase
//! integrals of the driven oscillator.
//!
//! The joint Hamiltonian conserves the photon number, so within the sector
//! holding `n` photons the oscillator sees the real drive
//! `λₙ(τ) = κ·n + f(τ)` with `f(τ) = F_g(τ)/√(2mω₀ħ)`. Everything downstream
//! is expressed through the sector integrals
//!
//! ```text
//! βₙ(t) = ∫₀ᵗ λₙ(τ) e^{iω₀τ} dτ = n·β_κ(t) + β_f(t)
//! Cₙ(t) = ∫₀ᵗ λₙ(τ) e^{iω₀τ} conj(βₙ(τ)) dτ = c₀ + c₁·n + c₂·n²
//! ```
//!
//! and the two interference phases `θ_g` (gravitational) and `θ_l`
//! (light pressure per photon).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature;

/// Reduced Planck constant [J·s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Default relative window `|ω_g − ω₀| < window·ω₀` inside which the drive
/// is treated as exactly resonant.
pub const DEFAULT_RESONANCE_WINDOW: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },
}

/// All physical inputs of the detector model, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Optical angular frequency ω [1/s].
    pub omega: f64,
    /// Cavity length L [m].
    pub length: f64,
    /// Oscillator (mirror) mass m [kg].
    pub mass: f64,
    /// Oscillator eigenfrequency ω₀ [1/s].
    pub omega0: f64,
    /// Gravitational-wave angular frequency ω_g [1/s].
    pub omega_g: f64,
    /// Dimensionless metric-perturbation amplitude h₀.
    pub h0: f64,
    /// Mean photon number N.
    pub photons: f64,
    /// Output power scale I_N (arbitrary units).
    pub intensity: f64,
    /// Temperature T [K].
    pub temperature: f64,
    /// Observation time [s].
    pub t_obs: f64,
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
}

impl Default for DetectorParams {
    /// LIGO-II parameter set, resonant (ω₀ = ω_g), one second of
    /// observation, oscillator in its ground state.
    fn default() -> Self {
        Self {
            omega: 1.8e15,
            length: 4.0e3,
            mass: 10.0,
            omega0: 30.0,
            omega_g: 30.0,
            h0: 1.0e-23,
            photons: 1.0e17,
            intensity: 1.0,
            temperature: 0.0,
            t_obs: 1.0,
            hbar: HBAR,
            c: SPEED_OF_LIGHT,
            k_b: BOLTZMANN,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        Err(ModelError::NonFinite { name })
    } else if value <= 0.0 {
        Err(ModelError::NonPositive { name, value })
    } else {
        Ok(())
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        Err(ModelError::NonFinite { name })
    } else if value < 0.0 {
        Err(ModelError::Negative { name, value })
    } else {
        Ok(())
    }
}

impl DetectorParams {
    /// Checks every parameter invariant. The optical frequency may be zero
    /// (it switches the couplings off) but not negative.
    pub fn validate(&self) -> Result<(), ModelError> {
        non_negative("omega", self.omega)?;
        positive("length", self.length)?;
        positive("mass", self.mass)?;
        positive("omega0", self.omega0)?;
        non_negative("omega_g", self.omega_g)?;
        non_negative("h0", self.h0)?;
        non_negative("photons", self.photons)?;
        positive("intensity", self.intensity)?;
        non_negative("temperature", self.temperature)?;
        non_negative("t_obs", self.t_obs)?;
        positive("hbar", self.hbar)?;
        positive("c", self.c)?;
        positive("k_b", self.k_b)?;
        Ok(())
    }

    /// Thermal energy over oscillator quantum, `kT/(ħω₀)`.
    pub fn thermal_ratio(&self) -> f64 {
        self.k_b * self.temperature / (self.hbar * self.omega0)
    }

    /// Amplitude of `f(τ) = F_g(τ)/√(2mω₀ħ)` [1/s].
    pub fn drive_amplitude(&self) -> f64 {
        self.length * self.mass * self.h0 * self.omega_g * self.omega_g
            / (2.0 * self.mass * self.omega0 * self.hbar).sqrt()
    }
}

/// Dimensionless interference coupling `g` and optomechanical rate `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCouplings {
    pub g: f64,
    /// [1/s]
    pub kappa: f64,
}

/// `g = (ω/c)·√(ħ/(2mω₀))`, `κ = (ω/L)·√(2ħ/(mω₀))`.
pub fn derive_couplings(params: &DetectorParams) -> Result<DerivedCouplings, ModelError> {
    positive("mass", params.mass)?;
    positive("omega0", params.omega0)?;
    positive("length", params.length)?;
    positive("c", params.c)?;
    non_negative("omega", params.omega)?;
    let m_w0 = params.mass * params.omega0;
    Ok(DerivedCouplings {
        g: params.omega / params.c * (params.hbar / (2.0 * m_w0)).sqrt(),
        kappa: params.omega / params.length * (2.0 * params.hbar / m_w0).sqrt(),
    })
}

/// Classical force of the gravitational wave on the mirror,
/// `F_g(τ) = L·m·h₀·ω_g²·cos(ω_g τ)` [N].
pub fn gravitational_force(tau: f64, params: &DetectorParams) -> f64 {
    params.length * params.mass * params.h0 * params.omega_g.powi(2) * (params.omega_g * tau).cos()
}

/// Gravitational phase `θ_g(t) = (ω/ω₀)∫₀ᵗ F_g(τ)/(mc)·sin ω₀(t−τ) dτ`,
/// from the analytic antiderivative for the cosine drive.
pub fn theta_g(t: f64, params: &DetectorParams) -> f64 {
    let prefactor = params.omega * params.length * params.h0 * params.omega_g.powi(2)
        / (params.omega0 * params.c);
    let nu = snap_resonant(params.omega_g, params.omega0, DEFAULT_RESONANCE_WINDOW);
    prefactor * cos_drive_response(nu, params.omega0, t)
}

/// `θ_g(t)` by adaptive quadrature of its defining integral; works for any
/// force profile and serves as the fallback for the analytic route.
pub fn theta_g_quadrature(t: f64, params: &DetectorParams, rel_tol: f64) -> quadrature::Quadrature {
    let scale = params.omega / (params.omega0 * params.mass * params.c);
    let w0 = params.omega0;
    let mut q = quadrature::integrate(
        |tau| gravitational_force(tau, params) * (w0 * (t - tau)).sin(),
        0.0,
        t,
        rel_tol,
    );
    q.value *= scale;
    q.error_estimate *= scale.abs();
    q.abs_value *= scale.abs();
    q
}

/// Light-pressure phase per photon, `θ_l(t) = 2κg(1 − cos ω₀t)/ω₀`.
pub fn theta_l(t: f64, params: &DetectorParams) -> f64 {
    let DerivedCouplings { g, kappa } = couplings_unchecked(params);
    light_pressure_phase(kappa, g, params.omega0, t)
}

/// Largest value of `θ_l` over a drive period, `4κg/ω₀`.
pub fn theta_l_max(params: &DetectorParams) -> f64 {
    let DerivedCouplings { g, kappa } = couplings_unchecked(params);
    4.0 * kappa * g / params.omega0
}

/// Phase integrals at time `t` for the physical parameter set.
pub fn phase_state(t: f64, params: &DetectorParams) -> Result<PhaseState, ModelError> {
    Ok(Dynamics::from_params(params)?.phase_state(t))
}

fn couplings_unchecked(params: &DetectorParams) -> DerivedCouplings {
    let m_w0 = params.mass * params.omega0;
    DerivedCouplings {
        g: params.omega / params.c * (params.hbar / (2.0 * m_w0)).sqrt(),
        kappa: params.omega / params.length * (2.0 * params.hbar / m_w0).sqrt(),
    }
}

fn light_pressure_phase(kappa: f64, g: f64, omega0: f64, t: f64) -> f64 {
    let s = (0.5 * omega0 * t).sin();
    // 1 − cos x = 2 sin²(x/2)
    4.0 * kappa * g * s * s / omega0
}

fn snap_resonant(nu: f64, omega0: f64, window: f64) -> f64 {
    if (nu - omega0).abs() < window * omega0 {
        omega0
    } else {
        nu
    }
}

/// `sin(x)/x`, accurate through `x = 0`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫₀ᵗ cos(ντ) sin(ω₀(t−τ)) dτ`, written so that it stays accurate as
/// `ν → ω₀`; the resonant value is `t·sin(ω₀t)/2`.
fn cos_drive_response(nu: f64, omega0: f64, t: f64) -> f64 {
    let sum = omega0 + nu;
    let diff = omega0 - nu;
    omega0 * t * (0.5 * sum * t).sin() * sinc(0.5 * diff * t) / sum
}

/// `∫₀ᵗ e^{ikτ} dτ`.
fn exp_integral(k: f64, t: f64) -> Complex64 {
    let half = 0.5 * k * t;
    Complex64::from_polar(t * sinc(half), half)
}

/// `∫₀ᵗ τ e^{ipτ} dτ`.
fn weighted_exp_integral(p: f64, t: f64) -> Complex64 {
    let x = p * t;
    if x.abs() < 0.5 {
        // Σ_j (ix)^j / (j!(j+2)), times t²
        let ix = Complex64::new(0.0, x);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.5, 0.0);
        for j in 1..30 {
            term = term * ix / j as f64;
            sum += term / (j as f64 + 2.0);
        }
        sum * t * t
    } else {
        let ip = Complex64::new(0.0, p);
        (Complex64::from_polar(t, x) - exp_integral(p, t)) / ip
    }
}

/// `∫₀ᵗ e^{ipτ} conj(∫₀^τ e^{ikσ} dσ) dτ`.
fn nested_exp_integral(p: f64, k: f64, t: f64) -> Complex64 {
    if k == 0.0 {
        weighted_exp_integral(p, t)
    } else {
        (exp_integral(p, t) - exp_integral(p - k, t)) / Complex64::new(0.0, k)
    }
}

/// One Fourier component `amp·e^{iωτ}` of the rotating-frame drive
/// `λ(τ)e^{iω₀τ}`.
#[derive(Debug, Clone, Copy)]
struct Component {
    freq: f64,
    amp: f64,
}

/// Rate-level description of the driven oscillator, independent of how the
/// couplings were obtained. Physical parameters map onto it through
/// [`Dynamics::from_params`]; rescaled desk-top profiles build it directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dynamics {
    /// Oscillator frequency ω₀ [1/s].
    pub omega0: f64,
    /// Per-photon force rate κ [1/s].
    pub kappa: f64,
    /// Interference coupling g.
    pub g: f64,
    /// Amplitude `a` of `f(τ) = a·cos(ν τ)` [1/s].
    pub drive_amplitude: f64,
    /// Drive frequency ν [1/s].
    pub drive_frequency: f64,
    /// Relative window inside which `ν` is snapped to `ω₀`.
    pub resonance_window: f64,
}

/// Phase integrals at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub theta_g: f64,
    pub theta_l: f64,
    /// `∫₀ᵗ f(τ) e^{iω₀τ} dτ`
    pub beta_f: Complex64,
    /// `κ∫₀ᵗ e^{iω₀τ} dτ`
    pub beta_kappa: Complex64,
    /// Coefficients `[c₀, c₁, c₂]` of `Cₙ(t)` as a polynomial in `n`.
    pub c_parts: [Complex64; 3],
    /// Free-rotation angle `ω₀t`.
    pub rotation: f64,
    /// The drive was treated as exactly resonant.
    pub resonant: bool,
}

impl PhaseState {
    /// `βₙ(t) = n·β_κ + β_f`.
    pub fn beta(&self, n: u32) -> Complex64 {
        self.beta_kappa * n as f64 + self.beta_f
    }

    /// `Cₙ(t)`.
    pub fn c(&self, n: u32) -> Complex64 {
        let n = n as f64;
        self.c_parts[0] + self.c_parts[1] * n + self.c_parts[2] * (n * n)
    }

    /// Coherent amplitude of the oscillator after evolution in sector `n`
    /// from the vacuum: the interaction-picture displacement `i·βₙ` rotated
    /// by the free evolution.
    pub fn coherent_amplitude(&self, n: u32) -> Complex64 {
        Complex64::i() * self.beta(n) * Complex64::from_polar(1.0, -self.rotation)
    }

    /// `2g·Im[e^{iω₀t}·conj(βₙ)]`; equals `θ_g + n·θ_l`.
    pub fn interference_phase(&self, g: f64, n: u32) -> f64 {
        2.0 * g * (Complex64::from_polar(1.0, self.rotation) * self.beta(n).conj()).im
    }
}

impl Dynamics {
    pub fn from_params(params: &DetectorParams) -> Result<Self, ModelError> {
        let DerivedCouplings { g, kappa } = derive_couplings(params)?;
        Ok(Self {
            omega0: params.omega0,
            kappa,
            g,
            drive_amplitude: params.drive_amplitude(),
            drive_frequency: params.omega_g,
            resonance_window: DEFAULT_RESONANCE_WINDOW,
        })
    }

    pub fn is_resonant(&self) -> bool {
        (self.drive_frequency - self.omega0).abs() < self.resonance_window * self.omega0
    }

    fn effective_drive_frequency(&self) -> f64 {
        snap_resonant(self.drive_frequency, self.omega0, self.resonance_window)
    }

    /// `f(τ)` [1/s].
    pub fn drive(&self, tau: f64) -> f64 {
        self.drive_amplitude * (self.drive_frequency * tau).cos()
    }

    pub fn theta_g(&self, t: f64) -> f64 {
        2.0 * self.g * self.drive_amplitude
            * cos_drive_response(self.effective_drive_frequency(), self.omega0, t)
    }

    pub fn theta_l(&self, t: f64) -> f64 {
        light_pressure_phase(self.kappa, self.g, self.omega0, t)
    }

    fn photon_components(&self) -> [Component; 1] {
        [Component { freq: self.omega0, amp: self.kappa }]
    }

    fn drive_components(&self) -> [Component; 2] {
        let nu = self.effective_drive_frequency();
        let half = 0.5 * self.drive_amplitude;
        [
            Component { freq: self.omega0 + nu, amp: half },
            Component { freq: self.omega0 - nu, amp: half },
        ]
    }

    pub fn beta_kappa(&self, t: f64) -> Complex64 {
        exp_integral(self.omega0, t) * self.kappa
    }

    pub fn beta_f(&self, t: f64) -> Complex64 {
        self.drive_components()
            .iter()
            .map(|c| exp_integral(c.freq, t) * c.amp)
            .sum()
    }

    fn cross(ps: &[Component], ks: &[Component], t: f64) -> Complex64 {
        ps.iter()
            .flat_map(|p| ks.iter().map(move |k| (p, k)))
            .map(|(p, k)| nested_exp_integral(p.freq, k.freq, t) * (p.amp * k.amp))
            .sum()
    }

    /// `[c₀, c₁, c₂]` with `Cₙ(t) = c₀ + c₁n + c₂n²`.
    pub fn c_parts(&self, t: f64) -> [Complex64; 3] {
        let ph = self.photon_components();
        let dr = self.drive_components();
        [
            Self::cross(&dr, &dr, t),
            Self::cross(&ph, &dr, t) + Self::cross(&dr, &ph, t),
            Self::cross(&ph, &ph, t),
        ]
    }

    pub fn phase_state(&self, t: f64) -> PhaseState {
        PhaseState {
            t,
            theta_g: self.theta_g(t),
            theta_l: self.theta_l(t),
            beta_f: self.beta_f(t),
            beta_kappa: self.beta_kappa(t),
            c_parts: self.c_parts(t),
            rotation: self.omega0 * t,
            resonant: self.is_resonant(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn ligo_couplings() {
        let c = derive_couplings(&DetectorParams::default()).unwrap();
        // g = (1.8e15/c)·√(ħ/600), κ = 4.5e11·√(2ħ/300)
        assert!(close(c.g, 2.517e-12, 1e-3), "g = {}", c.g);
        assert!(close(c.kappa, 3.773e-7, 1e-3), "kappa = {}", c.kappa);
    }

    #[test]
    fn zero_optical_frequency_switches_couplings_off() {
        let p = DetectorParams { omega: 0.0, ..Default::default() };
        let c = derive_couplings(&p).unwrap();
        assert_eq!(c.g, 0.0);
        assert_eq!(c.kappa, 0.0);
        assert!(p.validate().is_ok());
        assert_eq!(theta_l(0.7, &p), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        for p in [
            DetectorParams { mass: 0.0, ..Default::default() },
            DetectorParams { omega0: -1.0, ..Default::default() },
            DetectorParams { length: 0.0, ..Default::default() },
            DetectorParams { c: 0.0, ..Default::default() },
        ] {
            assert!(derive_couplings(&p).is_err());
            assert!(p.validate().is_err());
        }
        let p = DetectorParams { temperature: -1.0, ..Default::default() };
        assert_eq!(
            p.validate(),
            Err(ModelError::Negative { name: "temperature", value: -1.0 })
        );
        let p = DetectorParams { h0: f64::NAN, ..Default::default() };
        assert_eq!(p.validate(), Err(ModelError::NonFinite { name: "h0" }));
    }

    #[test]
    fn force_values() {
        let p = DetectorParams { h0: 1e-23, ..Default::default() };
        assert!(close(gravitational_force(0.0, &p), 3.6e-16, 1e-12));
        assert!(gravitational_force(PI / (2.0 * p.omega_g), &p).abs() < 1e-30);
        let quiet = DetectorParams { h0: 0.0, ..Default::default() };
        assert_eq!(gravitational_force(0.3, &quiet), 0.0);
    }

    #[test]
    fn phases_vanish_at_start() {
        let p = DetectorParams::default();
        assert_eq!(theta_g(0.0, &p), 0.0);
        assert_eq!(theta_l(0.0, &p), 0.0);
        let s = phase_state(0.0, &p).unwrap();
        assert_eq!(s.beta_f, Complex64::new(0.0, 0.0));
        assert_eq!(s.beta_kappa, Complex64::new(0.0, 0.0));
        assert!(s.c_parts.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn resonant_envelope_amplitude() {
        let p = DetectorParams { h0: 5e-24, ..Default::default() };
        let envelope = p.omega * p.length * p.h0 * p.omega0 / (2.0 * p.c);
        // ω·L·h₀·ω₀/(2c) = 1.8e15·4e3·5e-24·30/(2c)
        assert!(close(envelope, 1.80e-12, 2e-3), "envelope {envelope}");
        let t = 1.0;
        assert!(close(theta_g(t, &p), envelope * t * (p.omega0 * t).sin(), 1e-12));
    }

    #[test]
    fn light_pressure_maximum_matches_quoted_magnitude() {
        let p = DetectorParams::default();
        let peak = theta_l(PI / p.omega0, &p);
        assert!(close(peak, theta_l_max(&p), 1e-14));
        assert!((peak - 1.2e-19).abs() <= 0.1 * 1.2e-19, "θ_l max = {peak}");
    }

    #[test]
    fn resonance_flag() {
        let mut d = Dynamics::from_params(&DetectorParams::default()).unwrap();
        assert!(d.phase_state(0.2).resonant);
        d.drive_frequency = 31.0;
        assert!(!d.phase_state(0.2).resonant);
        d.drive_frequency = 30.0 * (1.0 + 5e-7);
        assert!(d.is_resonant());
    }

    #[test]
    fn beta_kappa_closed_form() {
        let d = Dynamics::from_params(&DetectorParams::default()).unwrap();
        let t = 0.37;
        let expected = (Complex64::new(0.0, d.omega0 * t).exp() - 1.0) / Complex64::new(0.0, d.omega0)
            * d.kappa;
        assert!((d.beta_kappa(t) - expected).norm() <= 1e-14 * expected.norm());
    }

    #[test]
    fn weighted_integral_series_and_closed_form_meet() {
        // the two branches must agree near the switch point |pt| = 0.5
        let t = 2.0;
        for p in [0.2499, 0.2501] {
            let series = {
                let ix = Complex64::new(0.0, p * t);
                let mut term = Complex64::new(1.0, 0.0);
                let mut sum = Complex64::new(0.5, 0.0);
                for j in 1..40 {
                    term = term * ix / j as f64;
                    sum += term / (j as f64 + 2.0);
                }
                sum * t * t
            };
            assert!((weighted_exp_integral(p, t) - series).norm() < 1e-13);
        }
    }
}
