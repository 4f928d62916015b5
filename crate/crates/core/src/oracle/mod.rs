//! Brute-force evolution of the field ⊗ oscillator system on a truncated
//! Fock space.
//!
//! The Hamiltonian commutes with the photon number, so a coherent laser
//! state splits into independent sectors with Poisson weights. In sector
//! `n` the oscillator evolves under
//!
//! ```text
//! Uₙ(t) = e^{−iΦₙ} · e^{−iω₀t·b†b} · D(i·βₙ(t)),   Φₙ = Im Cₙ(t)
//! ```
//!
//! with every factor built as a dense matrix: the displacement by spectral
//! decomposition of its Hermitian generator, the free rotation as a
//! diagonal phase. Expectations of `Â = I_N·sin(g(b + b†))` are then plain
//! traces. None of this uses the closed forms it is meant to check.

mod report;

pub use report::{adjudicate, AdjudicationOptions, Check, VerificationReport};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::SignalStats;
use crate::model::{Dynamics, PhaseState};

pub type CMatrix = DMatrix<Complex64>;

/// Smallest oscillator truncation accepted.
pub const MIN_OSC_DIM: usize = 16;

/// Number of top basis levels whose population is tracked as leakage.
pub const EDGE_LEVELS: usize = 4;

/// Tolerance between the spectral and normal-ordered observables.
pub const OBSERVABLE_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oscillator truncation {n_osc} is below the minimum of {MIN_OSC_DIM}")]
    TruncationTooSmall { n_osc: usize },
    #[error("Poisson weight beyond n_field = {n_field} is {tail:e} (limit {tol:e})")]
    PhotonTail { n_field: usize, tail: f64, tol: f64 },
    #[error("thermal state loses {deficit:e} of its trace at n_osc = {n_osc} (limit {tol:e})")]
    ThermalDeficit { n_osc: usize, deficit: f64, tol: f64 },
    #[error("displacement |amp|² = {amp2} exceeds the guard {limit} for n_osc = {n_osc}")]
    DisplacementGuard { amp2: f64, limit: f64, n_osc: usize },
    #[error("spectral and normal-ordered observables differ by {deviation:e}")]
    ObservableMismatch { deviation: f64 },
    #[error("truncation budget {budget:e} exceeds {tol:e}")]
    TruncationBudget { budget: f64, tol: f64 },
    #[error("invalid desk profile: {0}")]
    Profile(String),
}

impl OracleError {
    /// The error comes from the finite basis rather than from the inputs.
    pub fn is_truncation(&self) -> bool {
        !matches!(self, Self::Profile(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Oscillator Fock dimension.
    pub n_osc: usize,
    /// Highest photon sector evaluated.
    pub n_field: usize,
    /// Allowed probability mass lost to truncation.
    pub tol_trunc: f64,
    /// Closed-form comparison tolerance, in units of `I_N` (or `I_N²`).
    pub tol_match: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n_osc: 60, n_field: 40, tol_trunc: 1e-12, tol_match: 1e-10 }
    }
}

impl OracleConfig {
    /// Checks the truncation against a laser with mean photon number
    /// `photons`.
    pub fn validate(&self, photons: f64) -> Result<(), OracleError> {
        if self.n_osc < MIN_OSC_DIM {
            return Err(OracleError::TruncationTooSmall { n_osc: self.n_osc });
        }
        let tail = poisson_tail(photons, self.n_field);
        if tail >= self.tol_trunc {
            return Err(OracleError::PhotonTail { n_field: self.n_field, tail, tol: self.tol_trunc });
        }
        Ok(())
    }

    fn displacement_limit(&self) -> f64 {
        self.n_osc as f64 / 2.0
    }

    fn edge_width(&self) -> usize {
        EDGE_LEVELS
    }
}

/// Poisson weights `e^{−N}Nⁿ/n!` for `n = 0..=n_max`.
pub fn poisson_weights(photons: f64, n_max: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n_max + 1);
    let mut cur = (-photons).exp();
    w.push(cur);
    for n in 1..=n_max {
        cur *= photons / n as f64;
        w.push(cur);
    }
    w
}

/// Poisson mass above `n_max`.
pub fn poisson_tail(photons: f64, n_max: usize) -> f64 {
    // summing the tail directly avoids the cancellation in 1 − Σ
    let mut cur = poisson_weights(photons, n_max)[n_max];
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        cur *= photons / n as f64;
        tail += cur;
        if cur <= tail * 1e-17 || cur == 0.0 {
            break;
        }
        n += 1;
    }
    tail
}

/// Highest sector actually evolved: `n_field`, or earlier once the
/// remaining Poisson mass is below `10⁻³·tol_trunc`.
pub fn sector_cutoff(photons: f64, config: &OracleConfig) -> usize {
    if photons == 0.0 {
        return 0;
    }
    let negligible = 1e-3 * config.tol_trunc;
    (0..config.n_field)
        .find(|&n| n as f64 > photons && poisson_tail(photons, n) < negligible)
        .unwrap_or(config.n_field)
}

/// Truncated annihilation operator `b`.
pub fn annihilation(n_osc: usize) -> CMatrix {
    let mut b = CMatrix::zeros(n_osc, n_osc);
    for k in 1..n_osc {
        b[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    b
}

/// Gibbs state `diag((1−q)qᵏ)`, `q = n̄/(1+n̄)`, truncated to `n_osc`
/// levels.
pub fn build_thermal_state(n_osc: usize, nbar: f64, tol_trunc: f64) -> Result<CMatrix, OracleError> {
    if n_osc < MIN_OSC_DIM {
        return Err(OracleError::TruncationTooSmall { n_osc });
    }
    let q = nbar / (1.0 + nbar);
    let deficit = q.powi(n_osc as i32);
    if deficit >= tol_trunc {
        return Err(OracleError::ThermalDeficit { n_osc, deficit, tol: tol_trunc });
    }
    let mut rho = CMatrix::zeros(n_osc, n_osc);
    let mut p = 1.0 - q;
    for k in 0..n_osc {
        rho[(k, k)] = Complex64::new(p, 0.0);
        p *= q;
    }
    Ok(rho)
}

/// `V·f(Λ)·V†` for a Hermitian `h = VΛV†`.
pub fn hermitian_function<F: Fn(f64) -> Complex64>(h: &CMatrix, f: F) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let fj = f(lambda);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= fj;
        }
    }
    scaled * v.adjoint()
}

/// `exp(amp·b† − conj(amp)·b)` on the truncated space.
pub fn displacement_matrix(amp: Complex64, n_osc: usize) -> Result<CMatrix, OracleError> {
    let limit = n_osc as f64 / 2.0;
    if amp.norm_sqr() >= limit {
        return Err(OracleError::DisplacementGuard { amp2: amp.norm_sqr(), limit, n_osc });
    }
    displacement_unguarded(amp, n_osc)
}

fn displacement_unguarded(amp: Complex64, n_osc: usize) -> Result<CMatrix, OracleError> {
    if amp == Complex64::new(0.0, 0.0) {
        return Ok(CMatrix::identity(n_osc, n_osc));
    }
    let b = annihilation(n_osc);
    let generator = b.adjoint() * amp - &b * amp.conj();
    // generator = −i·H with H = i·generator Hermitian
    let h = generator * Complex64::i();
    Ok(hermitian_function(&h, |lambda| Complex64::from_polar(1.0, -lambda)))
}

/// Diagonal `e^{−iθ·b†b}`.
pub fn free_rotation(angle: f64, n_osc: usize) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n_osc, |k, _| {
        Complex64::from_polar(1.0, -angle * k as f64)
    }))
}

/// `Â/I_N` and `Â²/I_N²`.
#[derive(Debug, Clone)]
pub struct ObservableMatrices {
    pub a: CMatrix,
    pub a2: CMatrix,
}

fn exp_nilpotent(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=n {
        term = &term * m / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    sum
}

/// Normal-ordered forms
/// `Â = e^{−g²/2}(e^{igb†}e^{igb} − e^{−igb†}e^{−igb})/(2i)` and
/// `Â² = 1/2 − e^{−2g²}(e^{2igb†}e^{2igb} + e^{−2igb†}e^{−2igb})/4`.
/// Exact on the truncated block because every factor is triangular.
pub fn normal_ordered_observable(g: f64, n_osc: usize) -> ObservableMatrices {
    let b = annihilation(n_osc);
    let bd = b.adjoint();
    let pair = |c: f64| {
        let k = Complex64::new(0.0, c);
        exp_nilpotent(&(&bd * k)) * exp_nilpotent(&(&b * k))
    };
    let a = (pair(g) - pair(-g)) * Complex64::new(0.0, -0.5 * (-0.5 * g * g).exp());
    let a2 = CMatrix::identity(n_osc, n_osc) * Complex64::new(0.5, 0.0)
        - (pair(2.0 * g) + pair(-2.0 * g)) * Complex64::new(0.25 * (-2.0 * g * g).exp(), 0.0);
    ObservableMatrices { a, a2 }
}

/// Builds `sin(gX)` and `sin²(gX)` from the eigendecomposition of the
/// truncated quadrature `X = b + b†`, and checks them against the
/// normal-ordered construction on the leading half of the basis.
pub fn observable_matrices(g: f64, n_osc: usize) -> Result<ObservableMatrices, OracleError> {
    if n_osc < MIN_OSC_DIM {
        return Err(OracleError::TruncationTooSmall { n_osc });
    }
    let b = annihilation(n_osc);
    let x = &b + b.adjoint();
    let a = hermitian_function(&x, |l| Complex64::new((g * l).sin(), 0.0));
    let a2 = hermitian_function(&x, |l| Complex64::new((g * l).sin().powi(2), 0.0));

    let reference = normal_ordered_observable(g, n_osc);
    let block = n_osc / 2;
    let deviation = |m: &CMatrix, r: &CMatrix| {
        (m.view((0, 0), (block, block)) - r.view((0, 0), (block, block))).camax()
    };
    let worst = deviation(&a, &reference.a).max(deviation(&a2, &reference.a2));
    if worst > OBSERVABLE_AGREEMENT {
        return Err(OracleError::ObservableMismatch { deviation: worst });
    }
    Ok(ObservableMatrices { a, a2 })
}

/// Oscillator state of one photon-number sector.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub n_photons: u32,
    /// Poisson probability of the sector.
    pub weight: f64,
    pub osc_state: CMatrix,
    /// Population in the top levels of the truncated basis.
    pub edge_population: f64,
}

/// Per-run switches of the sector evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvolveOptions {
    /// Apply the sector phase `e^{−i Im Cₙ}`.
    pub sector_phase: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { sector_phase: true }
    }
}

/// `Uₙ ρ₀ Uₙ†` for photon sector `n_photons`.
pub fn evolve_sector(
    n_photons: u32,
    weight: f64,
    phase: &PhaseState,
    initial: &CMatrix,
    config: &OracleConfig,
    options: EvolveOptions,
) -> Result<SectorState, OracleError> {
    let n_osc = initial.nrows();
    let amp = Complex64::i() * phase.beta(n_photons);
    let limit = config.displacement_limit();
    if amp.norm_sqr() >= limit {
        return Err(OracleError::DisplacementGuard { amp2: amp.norm_sqr(), limit, n_osc });
    }
    let mut u = free_rotation(phase.rotation, n_osc) * displacement_unguarded(amp, n_osc)?;
    if options.sector_phase {
        u *= Complex64::from_polar(1.0, -phase.c(n_photons).im);
    }
    let rho = &u * initial * u.adjoint();
    let edge = config.edge_width().min(n_osc);
    let edge_population = (n_osc - edge..n_osc).map(|k| rho[(k, k)].re).sum();
    Ok(SectorState { n_photons, weight, osc_state: rho, edge_population })
}

/// Oracle statistics plus the truncation mass that was neglected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub stats: SignalStats,
    /// Poisson tail + thermal trace deficit + weighted edge population.
    pub truncation_budget: f64,
    pub sectors: usize,
}

fn trace_product(a: &CMatrix, rho: &CMatrix) -> f64 {
    // Tr(Aρ) = Σ_ij A_ij ρ_ji
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * rho[(j, i)];
        }
    }
    acc.re
}

/// `⟨Â⟩`, `⟨Â²⟩` and `D` at time `t` for a laser with mean photon number
/// `photons` and an oscillator starting in the Gibbs state with occupation
/// `nbar`.
pub fn expectation(
    t: f64,
    dynamics: &Dynamics,
    photons: f64,
    intensity: f64,
    nbar: f64,
    config: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    expectation_with(t, dynamics, photons, intensity, nbar, config, EvolveOptions::default())
}

pub fn expectation_with(
    t: f64,
    dynamics: &Dynamics,
    photons: f64,
    intensity: f64,
    nbar: f64,
    config: &OracleConfig,
    options: EvolveOptions,
) -> Result<OracleResult, OracleError> {
    config.validate(photons)?;
    let rho0 = build_thermal_state(config.n_osc, nbar, config.tol_trunc)?;
    let obs = observable_matrices(dynamics.g, config.n_osc)?;
    let phase = dynamics.phase_state(t);

    let n_max = sector_cutoff(photons, config);
    let weights = poisson_weights(photons, n_max);
    let sectors = weights
        .iter()
        .enumerate()
        .map(|(n, &w)| evolve_sector(n as u32, w, &phase, &rho0, config, options))
        .collect::<Result<Vec<_>, _>>()?;

    // sectors are already in index order, so the reduction is deterministic
    let mut mean = 0.0;
    let mut second = 0.0;
    let mut edge = 0.0;
    for s in &sectors {
        mean += s.weight * trace_product(&obs.a, &s.osc_state);
        second += s.weight * trace_product(&obs.a2, &s.osc_state);
        edge += s.weight * s.edge_population;
    }
    let q = nbar / (1.0 + nbar);
    // The norm deficits are bounded by construction; the edge population is
    // a pessimistic leakage proxy and only has to stay below the matching
    // tolerance.
    if edge >= config.tol_match {
        return Err(OracleError::TruncationBudget { budget: edge, tol: config.tol_match });
    }
    let budget = poisson_tail(photons, n_max) + q.powi(config.n_osc as i32) + edge;
    let mean = intensity * mean;
    let second = intensity * intensity * second;
    Ok(OracleResult {
        stats: SignalStats { mean, second_moment: second, dispersion: second - mean * mean },
        truncation_budget: budget,
        sectors: sectors.len(),
    })
}

/// Rescaled parameters at which every quantum effect is visible and the
/// truncated simulation is exact to many digits.
///
/// The oscillator frequency is 1, the drive runs at half of it, and the
/// evaluation time `π` puts `θ_l` at its maximum; `κ` and the drive
/// amplitude are solved so that `θ_l` and `θ_g` hit the requested values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeskProfile {
    pub g: f64,
    pub photons: f64,
    pub theta_g: f64,
    pub theta_l: f64,
    pub intensity: f64,
}

impl Default for DeskProfile {
    fn default() -> Self {
        Self { g: 0.2, photons: 5.0, theta_g: 0.3, theta_l: 0.05, intensity: 1.0 }
    }
}

impl DeskProfile {
    pub const OMEGA0: f64 = 1.0;
    pub const DRIVE_FREQUENCY: f64 = 0.5;

    pub fn time(&self) -> f64 {
        std::f64::consts::PI / Self::OMEGA0
    }

    pub fn dynamics(&self) -> Result<Dynamics, OracleError> {
        if self.g.is_nan() || self.g <= 0.0 {
            return Err(OracleError::Profile(format!("g must be positive, got {}", self.g)));
        }
        if self.photons.is_nan() || self.photons < 0.0 {
            return Err(OracleError::Profile(format!("photon number must be non-negative, got {}", self.photons)));
        }
        let unit = Dynamics {
            omega0: Self::OMEGA0,
            kappa: 1.0,
            g: self.g,
            drive_amplitude: 1.0,
            drive_frequency: Self::DRIVE_FREQUENCY,
            resonance_window: crate::model::DEFAULT_RESONANCE_WINDOW,
        };
        let t = self.time();
        Ok(Dynamics {
            kappa: self.theta_l / unit.theta_l(t),
            drive_amplitude: self.theta_g / unit.theta_g(t),
            ..unit
        })
    }
}
