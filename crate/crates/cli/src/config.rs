//! Scenario configuration.
//!
//! A config file is one flat JSON object. Every key is optional; keys that a
//! command does not use are ignored, unknown keys are rejected. Command-line
//! flags overlay the file key by key, and built-in defaults fill whatever
//! is still unset.

use std::fs;
use std::path::Path;

use relengine::engine::EngineConfig;
use relengine::{DetectorSpec, TemperatureMode};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub beta_a: Option<f64>,
    pub beta_b: Option<f64>,
    pub velocity_a: Option<f64>,
    pub velocity_b: Option<f64>,
    pub temperature_mode: Option<String>,

    // teff
    pub beta: Option<f64>,
    pub velocities: Option<Vec<f64>>,

    // engine
    pub scenarios: Option<Vec<String>>,
    pub scenario_velocity: Option<f64>,

    // optimize
    pub regime: Option<String>,
    pub vary: Option<String>,

    pub sweep_parameter: Option<String>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_count: Option<usize>,
    pub sweep_spacing: Option<String>,
    pub sweep_values: Option<Vec<f64>>,

    pub format: Option<String>,
    pub out: Option<String>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        Settings { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Settings {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Validation(format!("config `{}`: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::Validation(format!("`{}`: {e}", path.display())))
    }

    /// `top` wins wherever it sets a key.
    pub fn overlay(self, top: Settings) -> Settings {
        let base = self;
        overlay_fields!(base, top;
            omega_a, omega_b, beta_a, beta_b, velocity_a, velocity_b, temperature_mode,
            beta, velocities, scenarios, scenario_velocity, regime, vary,
            sweep_parameter, sweep_start, sweep_stop, sweep_count, sweep_spacing, sweep_values,
            format, out,
        )
    }

    pub fn format(&self) -> CliResult<Format> {
        match self.format.as_deref() {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(CliError::field("format", other, "csv or json")),
        }
    }

    pub fn temperature_mode_or(&self, default: TemperatureMode) -> CliResult<TemperatureMode> {
        match &self.temperature_mode {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::field("temperature_mode", s, "full, high_t or rest")),
        }
    }

    /// Rest-frame engine parameters with defaults `ω_A = 1`, `ω_B = 0.5`,
    /// `β_A = 1`, `β_B = 2`, both qubits at rest.
    pub fn engine_config(&self, mode: TemperatureMode) -> CliResult<EngineConfig> {
        let omega_a = positive("omega_a", self.omega_a.unwrap_or(1.0))?;
        let omega_b = positive("omega_b", self.omega_b.unwrap_or(0.5))?;
        let beta_a = positive("beta_a", self.beta_a.unwrap_or(1.0))?;
        let beta_b = positive("beta_b", self.beta_b.unwrap_or(2.0))?;
        let velocity_a = velocity("velocity_a", self.velocity_a.unwrap_or(0.0))?;
        let velocity_b = velocity("velocity_b", self.velocity_b.unwrap_or(0.0))?;
        Ok(EngineConfig::new(
            DetectorSpec::new(omega_a, velocity_a, beta_a)?,
            DetectorSpec::new(omega_b, velocity_b, beta_b)?,
            mode,
        )?)
    }

    /// The sweep, after checking that its parameter is one `allowed` for the
    /// command (the first entry is the default).
    pub fn sweep(&self, allowed: &[&str], default: Grid) -> CliResult<Sweep> {
        let parameter = match &self.sweep_parameter {
            None => allowed[0].to_string(),
            Some(p) if allowed.contains(&p.as_str()) => p.clone(),
            Some(p) => return Err(CliError::field("sweep_parameter", p, &allowed.join(", "))),
        };
        let grid = match &self.sweep_values {
            Some(values) => Grid::Values(values.clone()),
            None => {
                let (start, stop, count, spacing) = match default {
                    Grid::Range {
                        start,
                        stop,
                        count,
                        spacing,
                    } => (start, stop, count, spacing),
                    Grid::Values(_) => unreachable!("range defaults only"),
                };
                let spacing = match self.sweep_spacing.as_deref() {
                    None => spacing,
                    Some("linear") => Spacing::Linear,
                    Some("log") => Spacing::Log,
                    Some(other) => return Err(CliError::field("sweep_spacing", other, "linear or log")),
                };
                Grid::Range {
                    start: self.sweep_start.unwrap_or(start),
                    stop: self.sweep_stop.unwrap_or(stop),
                    count: self.sweep_count.unwrap_or(count),
                    spacing,
                }
            }
        };
        grid.validate()?;
        Ok(Sweep { parameter, grid })
    }
}

pub fn positive(name: &str, value: f64) -> CliResult<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::field(name, value, "a finite number > 0"))
    }
}

pub fn velocity(name: &str, value: f64) -> CliResult<f64> {
    if (0.0..1.0).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::field(name, value, "a speed in [0, 1)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// Explicit points, emitted in the given order.
    Values(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        spacing: Spacing,
    },
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range {
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range {
            start,
            stop,
            count,
            spacing: Spacing::Log,
        }
    }

    fn validate(&self) -> CliResult<()> {
        match *self {
            Grid::Values(ref values) => {
                if values.is_empty() {
                    return Err(CliError::field("sweep_values", "[]", "at least one value"));
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(CliError::field("sweep_values", bad, "finite numbers"));
                }
            }
            Grid::Range {
                start,
                stop,
                count,
                spacing,
            } => {
                if !start.is_finite() {
                    return Err(CliError::field("sweep_start", start, "a finite number"));
                }
                if !(stop.is_finite() && stop > start) {
                    return Err(CliError::field(
                        "sweep_stop",
                        stop,
                        &format!("a finite number > sweep_start ({start})"),
                    ));
                }
                if count < 2 {
                    return Err(CliError::field("sweep_count", count, "at least 2"));
                }
                if spacing == Spacing::Log && start <= 0.0 {
                    return Err(CliError::field("sweep_start", start, "a number > 0 for log spacing"));
                }
            }
        }
        Ok(())
    }

    /// Checks every grid point against `ok`, naming the config key that
    /// produced the offending value.
    pub fn require(&self, ok: impl Fn(f64) -> bool, expected: &str) -> CliResult<()> {
        match *self {
            Grid::Values(ref values) => match values.iter().find(|&&v| !ok(v)) {
                Some(bad) => Err(CliError::field("sweep_values", bad, expected)),
                None => Ok(()),
            },
            // grids are monotone, so the endpoints decide for interval-shaped `ok`
            Grid::Range { start, stop, .. } => {
                if !ok(start) {
                    Err(CliError::field("sweep_start", start, expected))
                } else if !ok(stop) {
                    Err(CliError::field("sweep_stop", stop, expected))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Values(ref values) => values.clone(),
            Grid::Range {
                start,
                stop,
                count,
                spacing,
            } => {
                let last = (count - 1) as f64;
                let mut points: Vec<f64> = match spacing {
                    Spacing::Linear => (0..count).map(|i| start + (stop - start) * (i as f64 / last)).collect(),
                    Spacing::Log => {
                        let (l0, l1) = (start.ln(), stop.ln());
                        (0..count).map(|i| (l0 + (l1 - l0) * (i as f64 / last)).exp()).collect()
                    }
                };
                points[0] = start;
                points[count - 1] = stop;
                points
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    pub grid: Grid,
}
