//! Oracle-versus-closed-form comparison at desk scale.

use serde::{Deserialize, Serialize};

use super::{expectation, DeskProfile, OracleConfig, OracleError};
use crate::closedform::{
    self, coherent_average_exact, coherent_average_gaussian, PhotonAverage, SignalInputs, ThermalSpec,
};

/// One comparison line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|actual − expected| <= tol`.
    pub fn within(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let abs_err = (actual - expected).abs();
        Self {
            check: name.into(),
            expected,
            actual,
            abs_err,
            rel_err: relative(abs_err, expected),
            tol,
            pass: abs_err <= tol,
        }
    }

    /// Passes when `|actual − expected| >= tol`; used to reject formulas.
    pub fn beyond(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        let mut c = Self::within(name, expected, actual, tol);
        c.pass = c.abs_err >= tol;
        c
    }
}

fn relative(abs_err: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if abs_err == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        abs_err / reference.abs()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Which mean-signal formula the comparisons use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjudicationOptions {
    /// Compare the ground-state mean in its originally printed form.
    pub printed_ground: bool,
    /// Compare the thermal mean in its originally printed form.
    pub printed_thermal: bool,
}

/// Runs the oracle for every occupation in `nbars` and compares it with
/// the closed forms (exact Poissonian photon average).
///
/// Besides the agreement checks, the report carries rejection checks for
/// the printed mean formulas (they must miss by at least `10·tol_match`),
/// the Gaussian-surrogate gap, the thermal Laguerre sum against `α`, the
/// phase bridge and the truncation budget.
pub fn adjudicate(
    profile: &DeskProfile,
    nbars: &[f64],
    config: &OracleConfig,
    options: AdjudicationOptions,
) -> Result<VerificationReport, OracleError> {
    let dynamics = profile.dynamics()?;
    let t = profile.time();
    let phase = dynamics.phase_state(t);
    let inputs = SignalInputs::from_phase(dynamics.g, &phase, profile.photons, profile.intensity);
    let tol = config.tol_match;
    let i1 = profile.intensity;
    let i2 = i1 * i1;
    let mut report = VerificationReport::default();

    for n in [0u32, 1, 5] {
        let bridge = phase.interference_phase(dynamics.g, n);
        report.checks.push(Check::within(
            format!("phase_bridge[n={n}]"),
            phase.theta_g + n as f64 * phase.theta_l,
            bridge,
            1e-14 * (1.0 + n as f64),
        ));
    }

    let surrogate_gap = (coherent_average_exact(inputs.theta_l, inputs.photons)
        - coherent_average_gaussian(inputs.theta_l, inputs.photons))
    .norm();
    report.checks.push(Check::within("photon_average_surrogate_gap", 0.0, surrogate_gap, 1e-3));

    for &nbar in nbars {
        let label = format!("nbar={nbar}");
        let thermal = ThermalSpec::from_nbar(dynamics.g, nbar);
        let oracle = expectation(t, &dynamics, profile.photons, profile.intensity, nbar, config)?;
        let closed = closedform::signal_stats(&inputs, &thermal, PhotonAverage::Poissonian);

        let printed = if nbar == 0.0 {
            closedform::printed_mean_ground(&inputs)
        } else {
            closedform::printed_mean_thermal(&inputs, &thermal)
        };
        let use_printed = if nbar == 0.0 { options.printed_ground } else { options.printed_thermal };
        let mean_reference = if use_printed { printed } else { closed.mean };

        report.checks.push(Check::within(format!("mean[{label}]"), mean_reference, oracle.stats.mean, tol * i1));
        report.checks.push(Check::within(
            format!("second_moment[{label}]"),
            closed.second_moment,
            oracle.stats.second_moment,
            tol * i2,
        ));
        report.checks.push(Check::within(
            format!("dispersion[{label}]"),
            closed.dispersion,
            oracle.stats.dispersion,
            tol * i2,
        ));
        if !use_printed {
            report.checks.push(Check::beyond(
                format!("printed_mean_rejected[{label}]"),
                printed,
                oracle.stats.mean,
                10.0 * tol * i1,
            ));
        }
        if nbar > 0.0 {
            let x = (1.0 + 1.0 / nbar).ln();
            match closedform::thermal_trace_factor(dynamics.g, x, 400) {
                Ok(direct) => report.checks.push(Check::within(
                    format!("thermal_laguerre_sum[{label}]"),
                    thermal.alpha,
                    direct,
                    1e-12,
                )),
                Err(e) => report.checks.push(Check {
                    check: format!("thermal_laguerre_sum[{label}]: {e}"),
                    expected: thermal.alpha,
                    actual: f64::NAN,
                    abs_err: f64::NAN,
                    rel_err: f64::NAN,
                    tol: 1e-12,
                    pass: false,
                }),
            }
        }
        report.checks.push(Check::within(
            format!("truncation_budget[{label}]"),
            0.0,
            oracle.truncation_budget,
            config.tol_match,
        ));
    }
    Ok(report)
}
