//! Parameter resolution: built-in defaults, then a key=value file, then
//! command-line flags.

use std::path::Path;

use gwsql::DetectorParams;

use crate::args::{Cli, Command, Format};
use crate::error::CliError;

/// Keys accepted in config files, spelled like the flags.
pub const PARAM_KEYS: [&str; 9] =
    ["omega", "length", "mass", "omega0", "omega-g", "h0", "photons", "temperature", "t-obs"];

/// Everything a subcommand needs.
#[derive(Debug)]
pub struct RunConfig<'a> {
    pub params: DetectorParams,
    pub command: &'a Command,
    pub output_format: Format,
    pub output_path: Option<&'a Path>,
    /// Every override in the order it was applied.
    pub overrides: Vec<(String, f64)>,
}

fn set(params: &mut DetectorParams, key: &str, value: f64) -> Result<(), CliError> {
    let slot = match key {
        "omega" => &mut params.omega,
        "length" => &mut params.length,
        "mass" => &mut params.mass,
        "omega0" => &mut params.omega0,
        "omega-g" => &mut params.omega_g,
        "h0" => &mut params.h0,
        "photons" => &mut params.photons,
        "temperature" => &mut params.temperature,
        "t-obs" => &mut params.t_obs,
        _ => return Err(unknown_key(key)),
    };
    *slot = value;
    Ok(())
}

fn unknown_key(key: &str) -> CliError {
    CliError::Validation(format!("unknown parameter `{key}`; valid keys: {}", PARAM_KEYS.join(", ")))
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped,
/// underscores in keys are read as dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, f64)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key=value, got `{raw}`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !PARAM_KEYS.contains(&key.as_str()) {
            return Err(unknown_key(&key));
        }
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Validation(format!("config line {}: `{}` is not a number", i + 1, value.trim()))
        })?;
        out.push((key, value));
    }
    Ok(out)
}

impl<'a> RunConfig<'a> {
    pub fn resolve(cli: &'a Cli) -> Result<Self, CliError> {
        let mut overrides = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                parse_config(&text)?
            }
            None => Vec::new(),
        };
        overrides.extend(cli.params.overrides().into_iter().map(|(k, v)| (k.to_string(), v)));

        let mut params = DetectorParams::default();
        for (key, value) in &overrides {
            set(&mut params, key, *value)?;
        }
        params.validate()?;
        Ok(Self {
            params,
            command: &cli.command,
            output_format: cli.format.unwrap_or_default(),
            output_path: cli.out.as_deref(),
            overrides,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_spellings() {
        let parsed = parse_config("# LIGO tweak\nmass = 40\n\nomega_g=31.5 # detuned\nt-obs=2\n").unwrap();
        assert_eq!(
            parsed,
            vec![("mass".to_string(), 40.0), ("omega-g".to_string(), 31.5), ("t-obs".to_string(), 2.0)]
        );
    }

    #[test]
    fn unknown_keys_list_the_valid_ones() {
        let err = parse_config("massive = 3").unwrap_err().to_string();
        assert!(err.contains("massive"));
        for key in PARAM_KEYS {
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse_config("mass 3").is_err());
        assert!(parse_config("mass = heavy").is_err());
    }

    #[test]
    fn every_key_has_a_slot() {
        let mut p = DetectorParams::default();
        for (i, key) in PARAM_KEYS.iter().enumerate() {
            set(&mut p, key, 100.0 + i as f64).unwrap();
        }
        assert_eq!(p.omega, 100.0);
        assert_eq!(p.t_obs, 108.0);
    }
}
