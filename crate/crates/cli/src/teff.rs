//! `teff`: effective temperature of a moving qubit over a grid of gaps and
//! speeds at one bath temperature.

use rayon::prelude::*;
use relengine::detector::effective_temperature;
use relengine::DetectorSpec;
use serde::Serialize;

use crate::config::{positive, velocity, Grid, Settings};
use crate::error::CliResult;
use crate::output::Row;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeffRow {
    pub omega: f64,
    pub velocity: f64,
    pub beta: f64,
    pub t_eff: f64,
    pub t_eff_over_t: f64,
}

impl Row for TeffRow {
    const HEADER: &'static [&'static str] = &["omega", "velocity", "beta", "t_eff", "t_eff_over_t"];
}

pub const DEFAULT_VELOCITIES: [f64; 5] = [0.0, 0.5, 0.8, 0.9, 0.99];

pub fn teff_row(omega: f64, velocity: f64, beta: f64) -> CliResult<TeffRow> {
    let bath = effective_temperature(&DetectorSpec::new(omega, velocity, beta)?)?;
    Ok(TeffRow {
        omega,
        velocity,
        beta,
        t_eff: bath.t_eff,
        // β / β_eff, exactly 1 at rest
        t_eff_over_t: beta / bath.beta_eff,
    })
}

/// Rows ordered by gap, then by speed in the configured order.
pub fn compute(settings: &Settings) -> CliResult<Vec<TeffRow>> {
    let beta = positive("beta", settings.beta.unwrap_or(1.0))?;
    let velocities = settings
        .velocities
        .clone()
        .unwrap_or_else(|| DEFAULT_VELOCITIES.to_vec());
    if velocities.is_empty() {
        return Err(crate::error::CliError::field("velocities", "[]", "at least one speed"));
    }
    for &v in &velocities {
        velocity("velocities", v)?;
    }
    let sweep = settings.sweep(&["omega"], Grid::log(1e-3, 20.0, 60))?;
    sweep.grid.require(|w| w > 0.0, "gaps > 0")?;

    let points: Vec<(f64, f64)> = sweep
        .grid
        .points()
        .into_iter()
        .flat_map(|w| velocities.iter().map(move |&v| (w, v)))
        .collect();
    points.par_iter().map(|&(w, v)| teff_row(w, v, beta)).collect()
}
