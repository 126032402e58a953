//! Two-stroke SWAP engine with moving qubits.
//!
//! Qubit A (gap `ω_A`) thermalizes with the hot bath and qubit B (gap `ω_B`)
//! with the cold one, each at the effective temperature its motion implies.
//! A SWAP then exchanges their states. In the two-point-measurement picture
//! the initial joint eigenstate `(a, b)` is sent to `(b, a)`, so the four
//! initial states fully determine the joint statistics of the work `W`
//! (total energy change of the pair) and the hot heat `Q_H` (minus the
//! energy change of A).
//!
//! Sign conventions: `w_mean = <W>` is work done on the qubits; the cycle
//! runs as an engine when `w_ext = -<W>` and `q_h` are both positive. The
//! cold heat `q_c` is fixed by the first law, `w_ext = q_h + q_c`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detector::{effective_temperature, effective_temperature_high_t, DetectorSpec, EffectiveBath};
use crate::error::{Error, Result};
use crate::special::tanh_diff;

/// Quantities within this distance of zero count as zero when classifying.
pub const MODE_TOLERANCE: f64 = 1e-14;

/// Which effective-temperature law feeds the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperatureMode {
    /// Frequency-dependent effective temperature (nested-log law).
    Full,
    /// Small-frequency expansion, independent of the gap.
    HighT,
    /// Velocities ignored; rest-frame bath temperatures.
    Rest,
}

impl TemperatureMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TemperatureMode::Full => "full",
            TemperatureMode::HighT => "high_t",
            TemperatureMode::Rest => "rest",
        }
    }
}

impl fmt::Display for TemperatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemperatureMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "full" => Ok(TemperatureMode::Full),
            "high_t" => Ok(TemperatureMode::HighT),
            "rest" => Ok(TemperatureMode::Rest),
            other => Err(format!(
                "unknown temperature mode `{other}` (expected full, high_t or rest)"
            )),
        }
    }
}

/// Hot-side qubit A, cold-side qubit B, and the temperature law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub spec_a: DetectorSpec,
    pub spec_b: DetectorSpec,
    pub temperature_mode: TemperatureMode,
}

impl EngineConfig {
    pub fn new(spec_a: DetectorSpec, spec_b: DetectorSpec, temperature_mode: TemperatureMode) -> Result<Self> {
        let config = EngineConfig {
            spec_a,
            spec_b,
            temperature_mode,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec_a.validate()?;
        self.spec_b.validate()
    }

    /// `ω_B / ω_A`.
    pub fn frequency_ratio(&self) -> f64 {
        self.spec_b.omega / self.spec_a.omega
    }
}

/// Thermal state of one qubit with `H = ω σ_z / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitThermalState {
    pub omega: f64,
    pub beta_eff: f64,
    /// Population of the upper level, `1 / (1 + e^{βω})`.
    pub p_excited: f64,
}

impl QubitThermalState {
    pub fn new(omega: f64, beta_eff: f64) -> Self {
        let x = beta_eff * omega;
        let p_excited = if x >= 0.0 {
            let u = (-x).exp();
            u / (1.0 + u)
        } else {
            1.0 / (1.0 + x.exp())
        };
        QubitThermalState {
            omega,
            beta_eff,
            p_excited,
        }
    }

    pub fn p_ground(&self) -> f64 {
        1.0 - self.p_excited
    }

    /// Population of `level` (0 = ground, 1 = excited).
    pub fn population(&self, level: u8) -> f64 {
        if level == 0 {
            self.p_ground()
        } else {
            self.p_excited
        }
    }
}

/// `σ_z / 2` eigenvalue of level 0 (ground) or 1 (excited).
fn half_spin(level: u8) -> f64 {
    if level == 0 {
        -0.5
    } else {
        0.5
    }
}

/// One initial joint eigenstate and the work and hot heat it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkHeatOutcome {
    pub initial_a: u8,
    pub initial_b: u8,
    pub probability: f64,
    pub w: f64,
    pub q_h: f64,
}

/// Exact joint distribution of `(W, Q_H)` over the four initial eigenstates,
/// ordered `(0,0), (0,1), (1,0), (1,1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointWorkHeatDistribution {
    pub outcomes: [WorkHeatOutcome; 4],
}

impl JointWorkHeatDistribution {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// `<W^m Q_H^n>` by direct enumeration.
    pub fn moment(&self, m: u32, n: u32) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.probability * o.w.powi(m as i32) * o.q_h.powi(n as i32))
            .sum()
    }

    /// `E[exp(i χ_W W + i χ_H Q_H)]`, normalized by the total probability so
    /// that the origin maps to exactly 1.
    pub fn characteristic(&self, chi_w: f64, chi_h: f64) -> Complex64 {
        let sum: Complex64 = self
            .outcomes
            .iter()
            .map(|o| o.probability * Complex64::new(0.0, chi_w * o.w + chi_h * o.q_h).exp())
            .sum();
        sum / self.total_probability()
    }
}

/// Per-cycle means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleObservables {
    /// `<W>`, work done on the qubits during the SWAP.
    pub w_mean: f64,
    /// `-<W>`.
    pub w_ext: f64,
    pub q_h: f64,
    /// `w_ext - q_h`.
    pub q_c: f64,
    pub sigma: f64,
    /// `1 - ω_B/ω_A`, only in engine mode.
    pub eta: Option<f64>,
    pub mode: OperatingMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatingMode {
    Engine,
    Refrigerator,
    Heater,
    Accelerator,
}

impl OperatingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatingMode::Engine => "engine",
            OperatingMode::Refrigerator => "refrigerator",
            OperatingMode::Heater => "heater",
            OperatingMode::Accelerator => "accelerator",
        }
    }

    /// Sign-based classification. Boundary values fall to the neighbouring
    /// non-engine mode: `w_ext = q_h = q_c = 0` is a refrigerator, and
    /// `w_ext = 0` with heat flowing hot to cold is an accelerator.
    pub fn classify(w_ext: f64, q_h: f64, q_c: f64) -> Self {
        let tol = MODE_TOLERANCE;
        if w_ext > tol && q_h > tol {
            OperatingMode::Engine
        } else if q_c > -tol && w_ext < tol {
            OperatingMode::Refrigerator
        } else if q_h < tol && q_c < tol {
            OperatingMode::Heater
        } else {
            OperatingMode::Accelerator
        }
    }
}

impl fmt::Display for OperatingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reference efficiencies from rest-frame and effective temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarnotBounds {
    pub eta_c_rest: f64,
    pub eta_c_eff: f64,
    pub eta_ca_rest: f64,
    pub eta_ca_eff: f64,
}

impl CarnotBounds {
    /// From the cold-to-hot temperature ratios `T_B/T_A` (rest and effective).
    pub fn from_ratios(rest_ratio: f64, eff_ratio: f64) -> Self {
        CarnotBounds {
            eta_c_rest: 1.0 - rest_ratio,
            eta_c_eff: 1.0 - eff_ratio,
            eta_ca_rest: 1.0 - rest_ratio.sqrt(),
            eta_ca_eff: 1.0 - eff_ratio.sqrt(),
        }
    }
}

/// The engine reduced to what the cycle depends on: two gaps and two
/// effective inverse temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveEngine {
    pub omega_a: f64,
    pub omega_b: f64,
    pub beta_a_eff: f64,
    pub beta_b_eff: f64,
}

impl EffectiveEngine {
    pub fn new(omega_a: f64, omega_b: f64, beta_a_eff: f64, beta_b_eff: f64) -> Result<Self> {
        for (name, value) in [
            ("omega_a", omega_a),
            ("omega_b", omega_b),
            ("beta_a_eff", beta_a_eff),
            ("beta_b_eff", beta_b_eff),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(name, value, "(0, +inf)"));
            }
        }
        Ok(EffectiveEngine {
            omega_a,
            omega_b,
            beta_a_eff,
            beta_b_eff,
        })
    }

    pub fn resolve(config: &EngineConfig) -> Result<Self> {
        let (a, b) = effective_baths(config)?;
        EffectiveEngine::new(config.spec_a.omega, config.spec_b.omega, a.beta_eff, b.beta_eff)
    }

    /// `tanh(β_B ω_B / 2) - tanh(β_A ω_A / 2)`.
    fn tanh_gap(&self) -> f64 {
        tanh_diff(
            0.5 * self.beta_b_eff * self.omega_b,
            0.5 * self.beta_a_eff * self.omega_a,
        )
    }

    pub fn state_a(&self) -> QubitThermalState {
        QubitThermalState::new(self.omega_a, self.beta_a_eff)
    }

    pub fn state_b(&self) -> QubitThermalState {
        QubitThermalState::new(self.omega_b, self.beta_b_eff)
    }

    /// Closed-form `<W> = (ω_B - ω_A)/2 · (tanh(β_B ω_B/2) - tanh(β_A ω_A/2))`.
    pub fn mean_work(&self) -> f64 {
        0.5 * (self.omega_b - self.omega_a) * self.tanh_gap()
    }

    /// Closed-form `<Q_H> = ω_A/2 · (tanh(β_B ω_B/2) - tanh(β_A ω_A/2))`.
    pub fn mean_hot_heat(&self) -> f64 {
        0.5 * self.omega_a * self.tanh_gap()
    }

    pub fn extracted_work(&self) -> f64 {
        0.5 * (self.omega_a - self.omega_b) * self.tanh_gap()
    }

    pub fn distribution(&self) -> JointWorkHeatDistribution {
        let (pa, pb) = (self.state_a(), self.state_b());
        let outcome = |a: u8, b: u8| {
            // SWAP: (a, b) -> (b, a)
            let de_a = self.omega_a * (half_spin(b) - half_spin(a));
            let de_b = self.omega_b * (half_spin(a) - half_spin(b));
            WorkHeatOutcome {
                initial_a: a,
                initial_b: b,
                probability: pa.population(a) * pb.population(b),
                w: de_a + de_b,
                q_h: 0.0 - de_a,
            }
        };
        JointWorkHeatDistribution {
            outcomes: [outcome(0, 0), outcome(0, 1), outcome(1, 0), outcome(1, 1)],
        }
    }

    pub fn observables(&self) -> CycleObservables {
        let w_mean = self.mean_work();
        let q_h = self.mean_hot_heat();
        let w_ext = -w_mean;
        let q_c = w_ext - q_h;
        // bath entropy change, -β_A q_h - β_B q_c
        let sigma = (self.beta_b_eff - self.beta_a_eff) * q_h + self.beta_b_eff * w_mean;
        let mode = OperatingMode::classify(w_ext, q_h, q_c);
        let eta = (mode == OperatingMode::Engine).then(|| 1.0 - self.omega_b / self.omega_a);
        CycleObservables {
            w_mean,
            w_ext,
            q_h,
            q_c,
            sigma,
            eta,
            mode,
        }
    }

    /// `β_A/β_B < ω_B/ω_A < 1`.
    pub fn in_engine_window(&self) -> bool {
        let ratio = self.omega_b / self.omega_a;
        self.beta_a_eff / self.beta_b_eff < ratio && ratio < 1.0
    }

    /// Effective cold-to-hot temperature ratio `T_B/T_A = β_A/β_B`.
    pub fn effective_ratio(&self) -> f64 {
        self.beta_a_eff / self.beta_b_eff
    }
}

pub fn effective_baths(config: &EngineConfig) -> Result<(EffectiveBath, EffectiveBath)> {
    config.validate()?;
    let law = |spec: &DetectorSpec| match config.temperature_mode {
        TemperatureMode::Full => effective_temperature(spec),
        TemperatureMode::HighT => effective_temperature_high_t(spec),
        TemperatureMode::Rest => Ok(EffectiveBath::from_beta(spec.beta_bath)),
    };
    Ok((law(&config.spec_a)?, law(&config.spec_b)?))
}

pub fn joint_distribution(config: &EngineConfig) -> Result<JointWorkHeatDistribution> {
    Ok(EffectiveEngine::resolve(config)?.distribution())
}

pub fn characteristic_function(config: &EngineConfig, chi_w: f64, chi_h: f64) -> Result<Complex64> {
    Ok(joint_distribution(config)?.characteristic(chi_w, chi_h))
}

pub fn moment(config: &EngineConfig, m: u32, n: u32) -> Result<f64> {
    Ok(joint_distribution(config)?.moment(m, n))
}

pub fn cycle_observables(config: &EngineConfig) -> Result<CycleObservables> {
    Ok(EffectiveEngine::resolve(config)?.observables())
}

pub fn classify_mode(config: &EngineConfig) -> Result<OperatingMode> {
    Ok(cycle_observables(config)?.mode)
}

pub fn carnot_bounds(config: &EngineConfig) -> Result<CarnotBounds> {
    let engine = EffectiveEngine::resolve(config)?;
    let rest_ratio = config.spec_a.beta_bath / config.spec_b.beta_bath;
    Ok(CarnotBounds::from_ratios(rest_ratio, engine.effective_ratio()))
}
