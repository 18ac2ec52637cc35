use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::model::SystemParams;
use crate::spectrum::{Channel, FrequencyGrid};

use super::CliError;

/// Parameter flags shared by every subcommand. Unset flags fall back to
/// the config file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Total excited-state decay rate
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Cross-damping rate, in [-gamma/3, 0]
    #[arg(long, allow_negative_numbers = true)]
    pub gamma12: Option<f64>,
    /// Laser detuning
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Rabi frequency of the linearly polarized field
    #[arg(long = "omega-a", allow_negative_numbers = true)]
    pub omega_a: Option<f64>,
    /// Rabi frequency of the sigma-minus field
    #[arg(long = "omega-b", allow_negative_numbers = true)]
    pub omega_b: Option<f64>,
    /// Relative phase of the two fields, radians
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// JSON file with any of the flag values; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long = "omega-min", allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    #[arg(long = "omega-max", allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub gamma: Option<f64>,
    pub gamma12: Option<f64>,
    pub delta: Option<f64>,
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub phi: Option<f64>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub points: Option<usize>,
    pub channel: Option<Channel>,
    pub no_vic_detector: Option<bool>,
    pub output: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

impl ParamArgs {
    pub fn config_file(&self) -> Result<ConfigFile, CliError> {
        self.config.as_deref().map_or(Ok(ConfigFile::default()), ConfigFile::load)
    }

    /// Flags over file over defaults, then validated.
    pub fn resolve(&self, file: &ConfigFile) -> Result<SystemParams, CliError> {
        let d = SystemParams::default();
        let p = SystemParams {
            gamma: self.gamma.or(file.gamma).unwrap_or(d.gamma),
            gamma12: self.gamma12.or(file.gamma12).unwrap_or(d.gamma12),
            delta: self.delta.or(file.delta).unwrap_or(d.delta),
            omega_a: self.omega_a.or(file.omega_a).unwrap_or(d.omega_a),
            omega_b: self.omega_b.or(file.omega_b).unwrap_or(d.omega_b),
            phi: self.phi.or(file.phi).unwrap_or(d.phi),
        };
        p.validate()?;
        Ok(p)
    }
}

impl GridArgs {
    pub fn resolve(&self, file: &ConfigFile, params: &SystemParams) -> Result<FrequencyGrid, CliError> {
        let d = FrequencyGrid::default_for(params);
        Ok(FrequencyGrid::new(
            self.omega_min.or(file.omega_min).unwrap_or(d.min),
            self.omega_max.or(file.omega_max).unwrap_or(d.max),
            self.points.or(file.points).unwrap_or(d.points),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: ConfigFile = serde_json::from_str(r#"{"omega_a": 3.0, "delta": 2.0, "channel": "sigma"}"#).unwrap();
        let flags = ParamArgs {
            delta: Some(-1.0),
            ..ParamArgs::default()
        };
        let p = flags.resolve(&file).unwrap();
        assert_eq!((p.delta, p.omega_a, p.gamma), (-1.0, 3.0, 1.0));
        assert_eq!(file.channel, Some(Channel::Sigma));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"omegaa": 3.0}"#).is_err());
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        let flags = ParamArgs {
            gamma12: Some(0.5),
            ..ParamArgs::default()
        };
        assert_eq!(flags.resolve(&ConfigFile::default()).unwrap_err().exit_code(), 2);
    }
}
