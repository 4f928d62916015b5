use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gwsql",
    version,
    about = "Quantum-limited sensitivity of an interferometric gravitational-wave detector",
    long_about = "Quantum-limited sensitivity of an interferometric gravitational-wave detector.\n\n\
                  Parameters default to the LIGO-II design values and can be overridden by a \
                  key=value config file and then by command-line flags."
)]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamFlags,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the table to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Flat key=value parameter file; keys are the flag names without the
    /// leading dashes.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Physical parameter overrides, shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamFlags {
    /// Optical angular frequency ω [1/s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Cavity length L [m].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub length: Option<f64>,
    /// Mirror mass m [kg].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Mirror eigenfrequency ω₀ [1/s].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Gravitational-wave angular frequency ω_g [1/s].
    #[arg(long = "omega-g", global = true, allow_negative_numbers = true)]
    pub omega_g: Option<f64>,
    /// Strain amplitude h₀.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h0: Option<f64>,
    /// Mean photon number N of the laser.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub photons: Option<f64>,
    /// Mirror temperature T [K].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Observation time [s].
    #[arg(long = "t-obs", global = true, allow_negative_numbers = true)]
    pub t_obs: Option<f64>,
}

impl ParamFlags {
    /// The flags that were given, as `(key, value)` pairs in config-file
    /// spelling.
    pub fn overrides(&self) -> Vec<(&'static str, f64)> {
        [
            ("omega", self.omega),
            ("length", self.length),
            ("mass", self.mass),
            ("omega0", self.omega0),
            ("omega-g", self.omega_g),
            ("h0", self.h0),
            ("photons", self.photons),
            ("temperature", self.temperature),
            ("t-obs", self.t_obs),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Couplings, thermal occupation and light-pressure phase scale.
    Constants,
    /// Mean and dispersion of the output signal over a time grid.
    Signal(SignalArgs),
    /// Minimal detectable strain at the configured time and temperature.
    Sql(SqlArgs),
    /// Minimal detectable strain over a temperature or time grid.
    Sweep(SweepArgs),
    /// Check the closed forms against a brute-force simulation at desk-top scale.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TimeGridArgs {
    /// First time of the grid [s].
    #[arg(long = "t-min", allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    /// Last time of the grid [s].
    #[arg(long = "t-max", allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Number of grid points.
    #[arg(long = "t-steps")]
    pub t_steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TemperatureGridArgs {
    /// Lowest temperature of the grid [K].
    #[arg(long = "T-min", allow_negative_numbers = true)]
    pub temp_min: Option<f64>,
    /// Highest temperature of the grid [K].
    #[arg(long = "T-max", allow_negative_numbers = true)]
    pub temp_max: Option<f64>,
    /// Number of grid points.
    #[arg(long = "T-steps")]
    pub temp_steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    #[command(flatten)]
    pub grid: TimeGridArgs,
    /// Geometric instead of linear spacing.
    #[arg(long = "log-grid")]
    pub log_grid: bool,
    /// How the photon-number fluctuations are averaged.
    #[arg(long = "photon-average", value_enum, default_value_t = AverageArg::Gaussian)]
    pub photon_average: AverageArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AverageArg {
    /// Large-N Gaussian surrogate.
    Gaussian,
    /// Exact Poissonian average.
    Poissonian,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    /// Thermal variance term of the linearized threshold.
    #[arg(long, value_enum, default_value_t = NoiseArg::AsPrinted)]
    pub noise: NoiseArg,
    /// Keep the radiation-pressure phase in the linearized threshold.
    #[arg(long = "radiation-pressure")]
    pub radiation_pressure: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    /// `1 + kT/(ħω₀)`.
    AsPrinted,
    /// `1 + 2n̄`.
    Exact,
}

#[derive(Debug, Clone, Args)]
pub struct SqlArgs {
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub temperature: TemperatureGridArgs,
    #[command(flatten)]
    pub time: TimeGridArgs,
    /// Geometric instead of linear spacing.
    #[arg(long = "log-grid")]
    pub log_grid: bool,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Interference coupling g of the desk-top profile.
    #[arg(long = "desk-g", default_value_t = 0.2, allow_negative_numbers = true)]
    pub desk_g: f64,
    /// Mean photon number of the desk-top profile.
    #[arg(long = "desk-photons", default_value_t = 5.0, allow_negative_numbers = true)]
    pub desk_photons: f64,
    /// Gravitational phase θ_g at the comparison time.
    #[arg(long = "desk-theta-g", default_value_t = 0.3, allow_negative_numbers = true)]
    pub desk_theta_g: f64,
    /// Light-pressure phase per photon θ_l at the comparison time.
    #[arg(long = "desk-theta-l", default_value_t = 0.05, allow_negative_numbers = true)]
    pub desk_theta_l: f64,
    /// Thermal occupations to test, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0])]
    pub nbar: Vec<f64>,
    /// Oscillator Fock-space dimension.
    #[arg(long = "n-osc", default_value_t = 60)]
    pub n_osc: usize,
    /// Highest photon sector.
    #[arg(long = "n-field", default_value_t = 40)]
    pub n_field: usize,
    /// Substitute the ground-state mean with the sign error in the
    /// `Nθ_l²` exponent.
    #[arg(long = "use-printed-ground-mean", visible_alias = "use-printed-eq5")]
    pub printed_ground: bool,
    /// Substitute the thermal mean with the `e^{+g²/2}` prefactor.
    #[arg(long = "use-printed-thermal-mean", visible_alias = "use-printed-eq12")]
    pub printed_thermal: bool,
}
