use gwsql::closedform::{self, SignalInputs};
use gwsql::model::{self, DetectorParams};
use gwsql::oracle::{self, AdjudicationOptions};
use gwsql::sensitivity::{self, LinearizedVariant, SweepRow, ThresholdOptions};
use gwsql::{DeskProfile, OracleConfig, PhotonAverage, SweepGrid, ThermalNoise, ThermalSpec};

use crate::args::{AverageArg, NoiseArg, SignalArgs, SweepArgs, ThresholdArgs, VerifyArgs};
use crate::error::CliError;
use crate::table::{Cell, Table};

/// Largest coupling and photon number the brute-force check accepts.
pub const DESK_MAX_G: f64 = 0.5;
pub const DESK_MAX_PHOTONS: f64 = 50.0;

const SIGNAL_STEPS: usize = 101;

/// A table plus, when the command ran but its result is a failure, the
/// error that sets the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self { table, failure: None }
    }
}

/// `steps` points from `min` to `max`, endpoints included.
pub fn grid(axis: &str, min: f64, max: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| Err(CliError::Validation(format!("{axis} grid: {msg}")));
    if steps == 0 {
        return bad("empty grid (steps = 0)".into());
    }
    if !(min.is_finite() && max.is_finite()) || min > max {
        return bad(format!("need min <= max, got [{min}, {max}]"));
    }
    if log && min <= 0.0 {
        return bad(format!("a log grid needs min > 0, got {min}"));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let last = (steps - 1) as f64;
    let mut points: Vec<f64> = (0..steps)
        .map(|i| {
            let f = i as f64 / last;
            if log {
                (min.ln() + f * (max.ln() - min.ln())).exp()
            } else {
                min + f * (max - min)
            }
        })
        .collect();
    points[0] = min;
    points[steps - 1] = max;
    Ok(points)
}

pub fn constants(params: &DetectorParams) -> Result<Outcome, CliError> {
    let couplings = model::derive_couplings(params)?;
    let thermal = closedform::thermal_alpha(&couplings, params, params.temperature);
    let mut t = Table::new([
        "g[-]",
        "kappa[1/s]",
        "T[K]",
        "nbar[-]",
        "alpha[-]",
        "kT_over_hbar_omega0[-]",
        "theta_l_max[-]",
    ]);
    t.push(vec![
        couplings.g.into(),
        couplings.kappa.into(),
        params.temperature.into(),
        thermal.nbar.into(),
        thermal.alpha.into(),
        params.thermal_ratio().into(),
        model::theta_l_max(params).into(),
    ]);
    Ok(t.into())
}

pub fn signal(params: &DetectorParams, args: &SignalArgs) -> Result<Outcome, CliError> {
    let times = grid(
        "time",
        args.grid.t_min.unwrap_or(0.0),
        args.grid.t_max.unwrap_or(params.t_obs),
        args.grid.t_steps.unwrap_or(SIGNAL_STEPS),
        args.log_grid,
    )?;
    let average = match args.photon_average {
        AverageArg::Gaussian => PhotonAverage::Gaussian,
        AverageArg::Poissonian => PhotonAverage::Poissonian,
    };
    let couplings = model::derive_couplings(params)?;
    let ground = ThermalSpec::ground();
    let thermal = closedform::thermal_alpha(&couplings, params, params.temperature);

    let mut t = Table::new([
        "t[s]",
        "theta_g[-]",
        "theta_l[-]",
        "I_ground_over_IN[-]",
        "D_ground_over_IN2[-]",
        "I_thermal_over_IN[-]",
        "D_thermal_over_IN2[-]",
    ]);
    for (index, &time) in times.iter().enumerate() {
        let inputs = SignalInputs::at(time, params)
            .map_err(|e| CliError::Row { index, source: Box::new(e.into()) })?;
        let g = closedform::signal_stats(&inputs, &ground, average);
        let h = closedform::signal_stats(&inputs, &thermal, average);
        t.push(vec![
            time.into(),
            inputs.theta_g.into(),
            inputs.theta_l.into(),
            g.mean.into(),
            g.dispersion.into(),
            h.mean.into(),
            h.dispersion.into(),
        ]);
    }
    Ok(t.into())
}

fn threshold_options(args: &ThresholdArgs) -> ThresholdOptions {
    ThresholdOptions {
        noise: match args.noise {
            NoiseArg::AsPrinted => ThermalNoise::AsPrinted,
            NoiseArg::Exact => ThermalNoise::ExactAlgebra,
        },
        variant: if args.radiation_pressure {
            LinearizedVariant::WithRadiationPressure
        } else {
            LinearizedVariant::Semiclassical
        },
        ..ThresholdOptions::default()
    }
}

fn sql_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new([
        "T[K]",
        "t_obs[s]",
        "h_vacuum[-]",
        "h_thermal[-]",
        "h_linearized[-]",
        "thermal_over_vacuum[-]",
        "note",
    ]);
    for row in rows {
        let value = |r: &Result<gwsql::SqlResult, _>| r.as_ref().map_or(Cell::Missing, |s| s.h_threshold.into());
        let mut notes = Vec::new();
        let ratio = match (&row.vacuum, &row.thermal) {
            (Ok(v), Ok(h)) => h.h_threshold / v.h_threshold,
            _ => f64::NAN,
        };
        if ratio > 1.0 {
            notes.push(format!("exceeds vacuum limit by {ratio:.2e}"));
        }
        for (name, r) in [("vacuum", &row.vacuum), ("thermal", &row.thermal), ("linearized", &row.linearized)] {
            if let Err(e) = r {
                notes.push(format!("{name}: {e}"));
            }
        }
        t.push(vec![
            row.temperature.into(),
            row.t_obs.into(),
            value(&row.vacuum),
            value(&row.thermal),
            value(&row.linearized),
            ratio.into(),
            notes.join("; ").into(),
        ]);
    }
    t
}

pub fn sql(params: &DetectorParams, args: &ThresholdArgs) -> Result<Outcome, CliError> {
    let grid = SweepGrid::Temperature(vec![params.temperature]);
    let rows = sensitivity::sweep(params, params.t_obs, params.temperature, &grid, &threshold_options(args))?;
    // a single point has nothing to keep going for
    if let Err(e) = &rows[0].vacuum {
        return Err(e.clone().into());
    }
    Ok(sql_table(&rows).into())
}

pub fn sweep(params: &DetectorParams, args: &SweepArgs) -> Result<Outcome, CliError> {
    let temp = &args.temperature;
    let time = &args.time;
    let has_temp = temp.temp_min.is_some() || temp.temp_max.is_some() || temp.temp_steps.is_some();
    let has_time = time.t_min.is_some() || time.t_max.is_some() || time.t_steps.is_some();
    let sweep_grid = match (has_temp, has_time) {
        (true, true) => {
            return Err(CliError::Validation("sweep over temperature or time, not both".into()));
        }
        (false, false) => {
            return Err(CliError::Validation(
                "sweep needs a grid: --T-min/--T-max/--T-steps or --t-min/--t-max/--t-steps".into(),
            ));
        }
        (true, false) => SweepGrid::Temperature(grid(
            "temperature",
            temp.temp_min.unwrap_or(0.0),
            temp.temp_max.unwrap_or(params.temperature),
            temp.temp_steps.unwrap_or(1),
            args.log_grid,
        )?),
        (false, true) => SweepGrid::Time(grid(
            "time",
            time.t_min.unwrap_or(params.t_obs),
            time.t_max.unwrap_or(params.t_obs),
            time.t_steps.unwrap_or(1),
            args.log_grid,
        )?),
    };
    if let SweepGrid::Temperature(ts) = &sweep_grid {
        if ts[0] < 0.0 {
            return Err(CliError::Validation(format!("temperature grid starts below zero at {}", ts[0])));
        }
    }
    let rows = sensitivity::sweep(params, params.t_obs, params.temperature, &sweep_grid, &threshold_options(&args.threshold))?;
    Ok(sql_table(&rows).into())
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if args.desk_g > DESK_MAX_G || args.desk_photons > DESK_MAX_PHOTONS {
        return Err(CliError::Validation(format!(
            "verify runs at desk-top scale only (g <= {DESK_MAX_G}, photons <= {DESK_MAX_PHOTONS}); \
             got g = {}, photons = {}. Detector-scale parameters are covered by the closed forms, \
             not by brute force.",
            args.desk_g, args.desk_photons
        )));
    }
    if args.nbar.is_empty() || args.nbar.iter().any(|&n| !n.is_finite() || n < 0.0) {
        return Err(CliError::Validation(format!("--nbar needs non-negative values, got {:?}", args.nbar)));
    }
    let profile = DeskProfile {
        g: args.desk_g,
        photons: args.desk_photons,
        theta_g: args.desk_theta_g,
        theta_l: args.desk_theta_l,
        intensity: 1.0,
    };
    let config = OracleConfig { n_osc: args.n_osc, n_field: args.n_field, ..OracleConfig::default() };
    let options = AdjudicationOptions { printed_ground: args.printed_ground, printed_thermal: args.printed_thermal };
    let report = oracle::adjudicate(&profile, &args.nbar, &config, options)?;

    let mut t = Table::new(["check", "expected", "actual", "abs_err", "rel_err", "tol", "pass"]);
    for c in &report.checks {
        t.push(vec![
            c.check.as_str().into(),
            c.expected.into(),
            c.actual.into(),
            c.abs_err.into(),
            c.rel_err.into(),
            c.tol.into(),
            c.pass.into(),
        ]);
    }
    let failed = report.failures().count();
    Ok(Outcome { table: t, failure: (failed > 0).then_some(CliError::VerificationFailed { failed }) })
}
