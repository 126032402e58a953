//! `engine`: work, heat, entropy production and operating mode against the
//! frequency ratio `ω_B/ω_A`, for several motion scenarios.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use relengine::engine::{cycle_observables, EngineConfig};
use relengine::{DetectorSpec, TemperatureMode};
use serde::Serialize;

use crate::config::{positive, velocity, Grid, Settings};
use crate::error::{CliError, CliResult};
use crate::output::Row;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    BothMoving,
    OnlyAMoving,
    OnlyBMoving,
    BothRest,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::BothMoving,
        Scenario::OnlyAMoving,
        Scenario::OnlyBMoving,
        Scenario::BothRest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::BothMoving => "both-moving",
            Scenario::OnlyAMoving => "only-a-moving",
            Scenario::OnlyBMoving => "only-b-moving",
            Scenario::BothRest => "both-rest",
        }
    }

    /// `(υ_A, υ_B)` when the moving qubits travel at `speed`.
    pub fn velocities(self, speed: f64) -> (f64, f64) {
        match self {
            Scenario::BothMoving => (speed, speed),
            Scenario::OnlyAMoving => (speed, 0.0),
            Scenario::OnlyBMoving => (0.0, speed),
            Scenario::BothRest => (0.0, 0.0),
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == lower)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

/// What a row was computed for: a motion scenario, or the rest-frame
/// engine/refrigerator boundary `ω_B/ω_A = β_A/β_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Scenario(Scenario),
    Boundary,
}

pub const BOUNDARY_LABEL: &str = "boundary";

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::Scenario(s) => f.write_str(s.as_str()),
            RowKind::Boundary => f.write_str(BOUNDARY_LABEL),
        }
    }
}

impl FromStr for RowKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == BOUNDARY_LABEL {
            Ok(RowKind::Boundary)
        } else {
            s.parse().map(RowKind::Scenario)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineRow {
    pub omega_ratio: f64,
    pub scenario: String,
    pub w_ext: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub sigma: f64,
    pub eta_or_blank: Option<f64>,
    pub mode: String,
}

impl Row for EngineRow {
    const HEADER: &'static [&'static str] = &[
        "omega_ratio",
        "scenario",
        "w_ext",
        "q_h",
        "q_c",
        "sigma",
        "eta_or_blank",
        "mode",
    ];
}

/// Everything a row depends on besides its ratio and kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSetup {
    pub omega_a: f64,
    pub beta_a: f64,
    pub beta_b: f64,
    pub speed: f64,
    pub temperature_mode: TemperatureMode,
}

impl EngineSetup {
    pub fn from_settings(settings: &Settings) -> CliResult<Self> {
        Ok(EngineSetup {
            omega_a: positive("omega_a", settings.omega_a.unwrap_or(1.0))?,
            beta_a: positive("beta_a", settings.beta_a.unwrap_or(1.0))?,
            beta_b: positive("beta_b", settings.beta_b.unwrap_or(2.0))?,
            speed: velocity("scenario_velocity", settings.scenario_velocity.unwrap_or(0.8))?,
            temperature_mode: settings.temperature_mode_or(TemperatureMode::HighT)?,
        })
    }

    pub fn config(&self, ratio: f64, kind: RowKind) -> CliResult<EngineConfig> {
        let ((v_a, v_b), mode) = match kind {
            RowKind::Scenario(s) => (s.velocities(self.speed), self.temperature_mode),
            RowKind::Boundary => ((0.0, 0.0), TemperatureMode::Rest),
        };
        Ok(EngineConfig::new(
            DetectorSpec::new(self.omega_a, v_a, self.beta_a)?,
            DetectorSpec::new(ratio * self.omega_a, v_b, self.beta_b)?,
            mode,
        )?)
    }

    pub fn boundary_ratio(&self) -> f64 {
        self.beta_a / self.beta_b
    }
}

pub fn engine_row(setup: &EngineSetup, ratio: f64, kind: RowKind) -> CliResult<EngineRow> {
    let obs = cycle_observables(&setup.config(ratio, kind)?)?;
    Ok(EngineRow {
        omega_ratio: ratio,
        scenario: kind.to_string(),
        w_ext: obs.w_ext,
        q_h: obs.q_h,
        q_c: obs.q_c,
        sigma: obs.sigma,
        eta_or_blank: obs.eta,
        mode: obs.mode.to_string(),
    })
}

pub fn scenarios(settings: &Settings) -> CliResult<Vec<Scenario>> {
    match &settings.scenarios {
        None => Ok(Scenario::ALL.to_vec()),
        Some(names) if names.is_empty() => Err(CliError::field("scenarios", "[]", "at least one scenario")),
        Some(names) => names
            .iter()
            .map(|n| {
                n.parse().map_err(|_| {
                    CliError::field("scenarios", n, "both-moving, only-a-moving, only-b-moving or both-rest")
                })
            })
            .collect(),
    }
}

/// Rows by ratio in grid order, scenarios in configured order within a
/// ratio. The boundary row goes just before the first ratio above it.
pub fn compute(settings: &Settings) -> CliResult<Vec<EngineRow>> {
    let setup = EngineSetup::from_settings(settings)?;
    let scenarios = scenarios(settings)?;
    let sweep = settings.sweep(&["omega_ratio"], Grid::linear(0.05, 1.0, 20))?;
    sweep
        .grid
        .require(|r| r > 0.0 && r <= 1.0, "a frequency ratio in (0, 1]")?;

    let boundary = setup.boundary_ratio();
    let mut plan: Vec<(f64, RowKind)> = Vec::new();
    let mut boundary_placed = !(boundary > 0.0 && boundary <= 1.0);
    for ratio in sweep.grid.points() {
        if !boundary_placed && ratio > boundary {
            plan.push((boundary, RowKind::Boundary));
            boundary_placed = true;
        }
        plan.extend(scenarios.iter().map(|&s| (ratio, RowKind::Scenario(s))));
    }
    if !boundary_placed {
        plan.push((boundary, RowKind::Boundary));
    }
    plan.par_iter().map(|&(r, k)| engine_row(&setup, r, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(mode: TemperatureMode) -> EngineSetup {
        EngineSetup {
            omega_a: 1.0,
            beta_a: 1.0,
            beta_b: 2.0,
            speed: 0.8,
            temperature_mode: mode,
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.as_str().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("only-B-moving".parse::<Scenario>().unwrap(), Scenario::OnlyBMoving);
        assert!("sideways".parse::<Scenario>().is_err());
        assert_eq!("boundary".parse::<RowKind>().unwrap(), RowKind::Boundary);
    }

    #[test]
    fn boundary_row_does_no_work() {
        let row = engine_row(&setup(TemperatureMode::HighT), 0.5, RowKind::Boundary).unwrap();
        assert!(row.w_ext.abs() < 1e-15);
        assert_ne!(row.mode, "engine");
        assert_eq!(row.eta_or_blank, None);
    }

    #[test]
    fn moving_cold_qubit_opens_the_window() {
        let row = engine_row(
            &setup(TemperatureMode::HighT),
            0.45,
            RowKind::Scenario(Scenario::OnlyBMoving),
        )
        .unwrap();
        assert_eq!(row.mode, "engine");
        let eta = row.eta_or_blank.unwrap();
        assert!((eta - 0.55).abs() < 1e-15);
        let rest = engine_row(
            &setup(TemperatureMode::HighT),
            0.45,
            RowKind::Scenario(Scenario::BothRest),
        )
        .unwrap();
        assert_ne!(rest.mode, "engine");
    }

    #[test]
    fn boundary_is_placed_in_ratio_order() {
        let s = Settings {
            scenarios: Some(vec!["both-rest".into()]),
            sweep_values: Some(vec![0.25, 0.5, 0.75]),
            ..Settings::default()
        };
        let rows = compute(&s).unwrap();
        let labels: Vec<(f64, &str)> = rows.iter().map(|r| (r.omega_ratio, r.scenario.as_str())).collect();
        assert_eq!(
            labels,
            vec![
                (0.25, "both-rest"),
                (0.5, "both-rest"),
                (0.5, "boundary"),
                (0.75, "both-rest")
            ]
        );
    }

    #[test]
    fn sigma_never_negative() {
        let rows = compute(&Settings::default()).unwrap();
        assert_eq!(rows.len(), 20 * 4 + 1);
        assert!(rows.iter().all(|r| r.sigma >= -1e-12));
    }

    #[test]
    fn rejects_ratio_above_one_and_bad_scenario() {
        let s = Settings {
            sweep_values: Some(vec![0.5, 1.5]),
            ..Settings::default()
        };
        assert!(compute(&s).unwrap_err().to_string().contains("sweep_values"));
        let s = Settings {
            scenarios: Some(vec!["sideways".into()]),
            ..Settings::default()
        };
        let err = compute(&s).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("scenarios"));
    }
}
