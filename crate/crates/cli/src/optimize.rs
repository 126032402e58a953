//! `optimize`: efficiency at maximum power along a scan of one speed or of
//! the effective temperature ratio, with the Carnot and Curzon-Ahlborn
//! references from rest-frame and effective temperatures.

use std::str::FromStr;

use rayon::prelude::*;
use relengine::engine::EngineConfig;
use relengine::optimizer::{scan_point, Regime, ScanParameter, VariedFrequency};
use relengine::TemperatureMode;
use serde::Serialize;

use crate::config::{Grid, Settings};
use crate::error::{CliError, CliResult};
use crate::output::Row;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeRow {
    pub scan_value: f64,
    pub eta_star: Option<f64>,
    pub eta_ca_rest: f64,
    pub eta_ca_eff: f64,
    pub eta_c_rest: f64,
    pub eta_c_eff: f64,
    pub optimal_ratio: Option<f64>,
    pub max_work: Option<f64>,
    /// `engine` at an optimum; otherwise the mode at the configured gaps.
    pub mode: String,
}

impl Row for OptimizeRow {
    const HEADER: &'static [&'static str] = &[
        "scan_value",
        "eta_star",
        "eta_ca_rest",
        "eta_ca_eff",
        "eta_c_rest",
        "eta_c_eff",
        "optimal_ratio",
        "max_work",
        "mode",
    ];
}

/// Optimization regime as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeChoice {
    HighT,
    LowT,
    NumericFull,
}

impl FromStr for RegimeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "high_t" => Ok(RegimeChoice::HighT),
            "low_t" => Ok(RegimeChoice::LowT),
            "numeric-full" => Ok(RegimeChoice::NumericFull),
            other => Err(format!("unknown regime `{other}`")),
        }
    }
}

impl RegimeChoice {
    /// The closed forms default to the gap-independent high-temperature law;
    /// the numeric search defaults to the full law.
    pub fn default_temperature_mode(self) -> TemperatureMode {
        match self {
            RegimeChoice::HighT | RegimeChoice::LowT => TemperatureMode::HighT,
            RegimeChoice::NumericFull => TemperatureMode::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeSetup {
    pub base: EngineConfig,
    pub scan: ScanParameter,
    pub regime: Regime,
}

impl OptimizeSetup {
    pub fn from_settings(settings: &Settings) -> CliResult<(Self, Grid)> {
        let choice: RegimeChoice = match &settings.regime {
            None => RegimeChoice::HighT,
            Some(r) => r
                .parse()
                .map_err(|_| CliError::field("regime", r, "high_t, low_t or numeric-full"))?,
        };
        let regime = match choice {
            RegimeChoice::HighT => Regime::HighT,
            RegimeChoice::LowT => Regime::LowT,
            RegimeChoice::NumericFull => {
                let vary = match &settings.vary {
                    None => VariedFrequency::OmegaA,
                    Some(v) => v
                        .parse()
                        .map_err(|_| CliError::field("vary", v, "omega_a or omega_b"))?,
                };
                Regime::Numeric(vary)
            }
        };
        let mode = settings.temperature_mode_or(choice.default_temperature_mode())?;
        let base = settings.engine_config(mode)?;

        let sweep = settings.sweep(
            &["velocity_b", "velocity_a", "effective_ratio"],
            Grid::linear(0.0, 0.95, 20),
        )?;
        let scan: ScanParameter = sweep.parameter.parse().map_err(|e: String| CliError::Validation(e))?;
        match scan {
            ScanParameter::VelocityA | ScanParameter::VelocityB => {
                sweep.grid.require(|v| (0.0..1.0).contains(&v), "a speed in [0, 1)")?
            }
            ScanParameter::EffectiveRatio => {
                if mode == TemperatureMode::Full {
                    return Err(CliError::field(
                        "temperature_mode",
                        mode,
                        "high_t or rest when scanning effective_ratio",
                    ));
                }
                sweep
                    .grid
                    .require(|r| r > 0.0 && r.is_finite(), "a temperature ratio > 0")?;
            }
        }
        Ok((OptimizeSetup { base, scan, regime }, sweep.grid))
    }
}

pub fn optimize_row(setup: &OptimizeSetup, value: f64) -> CliResult<OptimizeRow> {
    let point = scan_point(&setup.base, setup.scan, value, setup.regime)?;
    Ok(OptimizeRow {
        scan_value: value,
        eta_star: point.optimum.map(|o| o.eta_star),
        eta_ca_rest: point.bounds.eta_ca_rest,
        eta_ca_eff: point.bounds.eta_ca_eff,
        eta_c_rest: point.bounds.eta_c_rest,
        eta_c_eff: point.bounds.eta_c_eff,
        optimal_ratio: point.optimum.map(|o| o.frequency_ratio),
        max_work: point.optimum.map(|o| o.max_work),
        mode: point.mode.to_string(),
    })
}

/// Rows in grid order; fails with an empty-result error when no grid point
/// admits an engine optimum.
pub fn compute(settings: &Settings) -> CliResult<Vec<OptimizeRow>> {
    let (setup, grid) = OptimizeSetup::from_settings(settings)?;
    let rows: Vec<OptimizeRow> = grid
        .points()
        .par_iter()
        .map(|&v| optimize_row(&setup, v))
        .collect::<CliResult<_>>()?;
    if rows.iter().all(|r| r.eta_star.is_none()) {
        return Err(CliError::Empty(format!(
            "no engine optimum anywhere on the {} grid ({} points)",
            setup.scan.as_str(),
            rows.len()
        )));
    }
    Ok(rows)
}
