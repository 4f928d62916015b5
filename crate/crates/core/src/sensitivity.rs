//! Minimal detectable strain.
//!
//! A wave is detected when the mean output exceeds its standard deviation,
//! `I > √D`. At resonance and zero temperature this reproduces the
//! standard quantum limit
//!
//! ```text
//! h_SQL = (1/(L·t·ω₀))·√(ħ/(m·ω₀))
//! ```
//!
//! and a thermal oscillator raises it by `√(1 + kT/(ħω₀))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{occupation, SignalStats};
use crate::model::{self, DetectorParams, ModelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensitivityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("observation time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),
    #[error("no threshold in [{lo:e}, {hi:e}]: condition is {state} across the whole bracket")]
    NotBracketed { lo: f64, hi: f64, state: &'static str },
    #[error("linearization invalid: {0}")]
    OutsideLinearRegime(String),
    #[error("empty grid")]
    EmptyGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqlMethod {
    /// Closed-form vacuum limit.
    VacuumFormula,
    /// Vacuum limit scaled by `√(1 + kT/ħω₀)`.
    ThermalFormula,
    /// Bisection on the linearized detection condition.
    LinearizedSolve,
}

impl SqlMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::VacuumFormula => "vacuum_formula",
            Self::ThermalFormula => "thermal_formula",
            Self::LinearizedSolve => "linearized_solve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqlResult {
    pub h_threshold: f64,
    pub temperature: f64,
    pub t_obs: f64,
    pub method: SqlMethod,
}

/// Thermal contribution to the variance of the linearized signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalNoise {
    /// `g²·kT/(ħω₀)`, the usual high-temperature form.
    #[default]
    AsPrinted,
    /// `2g²·n̄`, what the α⁴ algebra gives.
    ExactAlgebra,
}

impl ThermalNoise {
    /// Multiplier of `g²` in the variance, `1 + …`.
    fn factor(self, params: &DetectorParams, temperature: f64) -> f64 {
        if temperature == 0.0 {
            return 1.0;
        }
        let x = params.hbar * params.omega0 / (params.k_b * temperature);
        match self {
            Self::AsPrinted => 1.0 + 1.0 / x,
            Self::ExactAlgebra => 1.0 + 2.0 * occupation(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearizedVariant {
    /// Photon number does not fluctuate: drop every `Nθ_l` term.
    #[default]
    Semiclassical,
    /// Keep the radiation-pressure offset `Nθ_l` and its spread `Nθ_l²`.
    WithRadiationPressure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    pub variant: LinearizedVariant,
    pub noise: ThermalNoise,
    /// Relative width at which bisection stops.
    pub rel_tol: f64,
    pub bracket: (f64, f64),
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            variant: LinearizedVariant::Semiclassical,
            noise: ThermalNoise::AsPrinted,
            rel_tol: 1e-3,
            bracket: (1e-30, 1e-10),
        }
    }
}

/// `I − √D`; positive means detection.
pub fn detection_margin(stats: &SignalStats) -> f64 {
    stats.mean - stats.dispersion.max(0.0).sqrt()
}

pub fn is_detected(stats: &SignalStats) -> bool {
    detection_margin(stats) > 0.0
}

fn check_time(t_obs: f64) -> Result<(), SensitivityError> {
    if t_obs > 0.0 && t_obs.is_finite() {
        Ok(())
    } else {
        Err(SensitivityError::NonPositiveTime(t_obs))
    }
}

fn check_temperature(temperature: f64) -> Result<(), SensitivityError> {
    if temperature >= 0.0 {
        Ok(())
    } else {
        Err(SensitivityError::NegativeTemperature(temperature))
    }
}

/// Vacuum standard quantum limit at observation time `t_obs`.
pub fn h_sql(params: &DetectorParams, t_obs: f64) -> Result<SqlResult, SensitivityError> {
    check_time(t_obs)?;
    params.validate()?;
    let h = (params.hbar / (params.mass * params.omega0)).sqrt() / (params.length * t_obs * params.omega0);
    Ok(SqlResult {
        h_threshold: h,
        temperature: 0.0,
        t_obs,
        method: SqlMethod::VacuumFormula,
    })
}

/// Temperature-dependent limit `h_SQL·√(1 + kT/ħω₀)`, or with the exact
/// thermal variance `h_SQL·√(1 + 2n̄)`.
pub fn h_sql_thermal(
    params: &DetectorParams,
    t_obs: f64,
    temperature: f64,
    noise: ThermalNoise,
) -> Result<SqlResult, SensitivityError> {
    check_temperature(temperature)?;
    let vacuum = h_sql(params, t_obs)?;
    Ok(SqlResult {
        h_threshold: vacuum.h_threshold * noise.factor(params, temperature).sqrt(),
        temperature,
        t_obs,
        method: SqlMethod::ThermalFormula,
    })
}

/// Time nearest `t_obs` at which `|sin ω₀t| = 1`.
pub fn envelope_time(omega0: f64, t_obs: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let k = ((omega0 * t_obs - half_pi) / std::f64::consts::PI).round().max(0.0);
    (half_pi + k * std::f64::consts::PI) / omega0
}

/// `|θ_g + Nθ_l| − √(g²·(1 + thermal) + Nθ_l²)` at time `t` for strain `h0`
/// (photon terms dropped for the semiclassical variant).
pub fn linearized_margin(
    params: &DetectorParams,
    t: f64,
    h0: f64,
    temperature: f64,
    options: &ThresholdOptions,
) -> Result<f64, SensitivityError> {
    let couplings = model::derive_couplings(params)?;
    let p = DetectorParams { h0, ..*params };
    let theta_g = model::theta_g(t, &p);
    let g2 = couplings.g * couplings.g;
    let (offset, spread) = match options.variant {
        LinearizedVariant::Semiclassical => (0.0, 0.0),
        LinearizedVariant::WithRadiationPressure => {
            let theta_l = model::theta_l(t, params);
            (params.photons * theta_l, params.photons * theta_l * theta_l)
        }
    };
    let radicand = g2 * options.noise.factor(params, temperature) + spread;
    Ok((theta_g + offset).abs() - radicand.sqrt())
}

/// Smallest `h0` satisfying the linearized detection condition at the
/// envelope time nearest `t_obs`.
pub fn solve_h_threshold_linearized(
    params: &DetectorParams,
    t_obs: f64,
    temperature: f64,
    options: &ThresholdOptions,
) -> Result<SqlResult, SensitivityError> {
    check_time(t_obs)?;
    check_temperature(temperature)?;
    params.validate()?;
    let couplings = model::derive_couplings(params)?;
    if couplings.g >= 0.1 {
        return Err(SensitivityError::OutsideLinearRegime(format!(
            "g = {} is not small",
            couplings.g
        )));
    }
    let t = envelope_time(params.omega0, t_obs);
    let margin = |h: f64| linearized_margin(params, t, h, temperature, options);

    let (mut lo, mut hi) = options.bracket;
    if margin(lo)? > 0.0 {
        return Err(SensitivityError::NotBracketed { lo, hi, state: "satisfied" });
    }
    if margin(hi)? <= 0.0 {
        return Err(SensitivityError::NotBracketed { lo, hi, state: "violated" });
    }
    while hi / lo - 1.0 > options.rel_tol {
        let mid = (lo * hi).sqrt();
        if margin(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let p = DetectorParams { h0: hi, ..*params };
    let phase = model::theta_g(t, &p).abs()
        + match options.variant {
            LinearizedVariant::Semiclassical => 0.0,
            LinearizedVariant::WithRadiationPressure => params.photons * model::theta_l(t, params).abs(),
        };
    if phase >= 0.1 {
        return Err(SensitivityError::OutsideLinearRegime(format!(
            "phase {phase} at threshold is not small"
        )));
    }
    Ok(SqlResult {
        h_threshold: hi,
        temperature,
        t_obs,
        method: SqlMethod::LinearizedSolve,
    })
}

/// Independent variable of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    /// Temperatures [K] at fixed observation time.
    Temperature(Vec<f64>),
    /// Observation times [s] at fixed temperature.
    Time(Vec<f64>),
}

/// One grid point; each method fails or succeeds on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub temperature: f64,
    pub t_obs: f64,
    pub vacuum: Result<SqlResult, SensitivityError>,
    pub thermal: Result<SqlResult, SensitivityError>,
    pub linearized: Result<SqlResult, SensitivityError>,
}

/// Evaluates all three methods at every grid point, in grid order. The
/// fixed coordinate (`t_obs` or temperature) is taken from the arguments.
pub fn sweep(
    params: &DetectorParams,
    t_obs: f64,
    temperature: f64,
    grid: &SweepGrid,
    options: &ThresholdOptions,
) -> Result<Vec<SweepRow>, SensitivityError> {
    let points: Vec<(f64, f64)> = match grid {
        SweepGrid::Temperature(ts) => ts.iter().map(|&temp| (temp, t_obs)).collect(),
        SweepGrid::Time(ts) => ts.iter().map(|&t| (temperature, t)).collect(),
    };
    if points.is_empty() {
        return Err(SensitivityError::EmptyGrid);
    }
    Ok(points
        .into_iter()
        .map(|(temp, t)| SweepRow {
            temperature: temp,
            t_obs: t,
            vacuum: h_sql(params, t),
            thermal: h_sql_thermal(params, t, temp, options.noise),
            linearized: solve_h_threshold_linearized(params, t, temp, options),
        })
        .collect())
}
