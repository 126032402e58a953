//! A qubit (Unruh-DeWitt detector) moving at constant velocity through a
//! thermal bath of a massless scalar field.
//!
//! The detector sees the bath through two Doppler factors, `γ(1 ± υ)`. Its
//! transition rate is
//!
//! ```text
//! G(ω) = λ² / (4π β γ υ) · ln[(1 - e^{-βγ(1+υ)ω}) / (1 - e^{-βγ(1-υ)ω})]
//! ```
//!
//! and the ratio of excitation to de-excitation rates defines a
//! frequency-dependent effective temperature through detailed balance,
//! `G(-ω) = e^{ω/T_eff} G(ω)`.
//!
//! All evaluations go through the split `a = βγ(1+υ)|ω|`, `b = βγ(1-υ)|ω|`,
//! `Δ = a - b = 2βγυ|ω|` and
//!
//! ```text
//! D = ln[(1 - e^{-a}) / (1 - e^{-b})] = ln(1 + (1 - e^{-Δ}) / (e^b - 1))
//! ```
//!
//! so that `G(ω) ∝ D`, `G(-ω) ∝ Δ + D` and `β_eff ω = ln(1 + Δ/D)`. Nothing
//! here cancels catastrophically or overflows, including the `υ → 0` limit.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{log1mexp, log_add_exp, log_expm1};

/// Below this `βω` the effective temperature uses the small-frequency
/// expansion, which is exact to `O((βω)²)`.
pub const SMALL_FREQUENCY_CUTOFF: f64 = 1e-6;

/// A moving qubit: gap, speed (fraction of `c`), rest-frame inverse bath
/// temperature and coupling strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub omega: f64,
    pub velocity: f64,
    pub beta_bath: f64,
    #[serde(default = "unit_coupling")]
    pub coupling: f64,
}

fn unit_coupling() -> f64 {
    1.0
}

impl DetectorSpec {
    pub fn new(omega: f64, velocity: f64, beta_bath: f64) -> Result<Self> {
        let spec = DetectorSpec {
            omega,
            velocity,
            beta_bath,
            coupling: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Self> {
        let spec = DetectorSpec { coupling, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        let spec = DetectorSpec { omega, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_velocity(self, velocity: f64) -> Result<Self> {
        let spec = DetectorSpec { velocity, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::domain("omega", self.omega, "(0, +inf)"));
        }
        check_velocity(self.velocity)?;
        if !(self.beta_bath > 0.0 && self.beta_bath.is_finite()) {
            return Err(Error::domain("beta_bath", self.beta_bath, "(0, +inf)"));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(Error::domain("coupling", self.coupling, "(0, +inf)"));
        }
        Ok(())
    }

    /// Rest-frame bath temperature.
    pub fn temperature(&self) -> f64 {
        1.0 / self.beta_bath
    }
}

fn check_velocity(velocity: f64) -> Result<()> {
    if !(0.0..1.0).contains(&velocity) {
        return Err(Error::domain("velocity", velocity, "[0, 1)"));
    }
    Ok(())
}

/// Blue- and red-shifted Doppler factors `γ(1 + υ)` and `γ(1 - υ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DopplerPair {
    pub blue: f64,
    pub red: f64,
}

pub fn doppler_factors(velocity: f64) -> Result<DopplerPair> {
    check_velocity(velocity)?;
    Ok(DopplerPair {
        blue: ((1.0 + velocity) / (1.0 - velocity)).sqrt(),
        red: ((1.0 - velocity) / (1.0 + velocity)).sqrt(),
    })
}

/// `γυ = υ / sqrt((1 - υ)(1 + υ))`.
fn gamma_velocity(velocity: f64) -> f64 {
    velocity / ((1.0 - velocity) * (1.0 + velocity)).sqrt()
}

/// Effective (inverse) temperature perceived by a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveBath {
    pub t_eff: f64,
    pub beta_eff: f64,
}

impl EffectiveBath {
    pub fn from_beta(beta_eff: f64) -> Self {
        EffectiveBath {
            t_eff: 1.0 / beta_eff,
            beta_eff,
        }
    }

    pub fn from_temperature(t_eff: f64) -> Self {
        EffectiveBath {
            t_eff,
            beta_eff: 1.0 / t_eff,
        }
    }
}

/// `ln Δ` and `ln D` for a moving detector at gap `omega_abs > 0`.
struct RateTerms {
    ln_delta: f64,
    ln_d: f64,
}

fn rate_terms(beta: f64, velocity: f64, omega_abs: f64) -> Result<RateTerms> {
    let x = beta * omega_abs;
    let two_gv = 2.0 * gamma_velocity(velocity);
    let red = doppler_factors(velocity)?.red;
    let delta = x * two_gv;
    let b = x * red;

    let ln_delta = x.ln() + two_gv.ln();
    // r = (1 - e^{-Δ}) / (e^b - 1), D = ln(1 + r)
    let ln_r = log1mexp(delta)? - log_expm1(b)?;
    let ln_d = if ln_r > -700.0 && b < 700.0 {
        let r = -(-delta).exp_m1() / b.exp_m1();
        r.ln_1p().ln()
    } else {
        // ln(1 + r) = r to double precision
        ln_r
    };
    Ok(RateTerms { ln_delta, ln_d })
}

fn check_signed_omega(omega_signed: f64) -> Result<()> {
    if omega_signed == 0.0 || !omega_signed.is_finite() {
        return Err(Error::domain("omega_signed", omega_signed, "finite and nonzero"));
    }
    Ok(())
}

/// Natural log of the transition rate `G(omega_signed)`.
///
/// Positive `omega_signed` is the de-excitation channel, negative the
/// excitation channel. The gap stored in `spec.omega` is not consulted; only
/// the velocity, bath temperature and coupling are. Finite for `|βω|` up to
/// `1e300`, where the rate itself under- or overflows.
pub fn log_transition_rate(spec: &DetectorSpec, omega_signed: f64) -> Result<f64> {
    spec.validate()?;
    check_signed_omega(omega_signed)?;
    let beta = spec.beta_bath;
    let ln_coupling2 = 2.0 * spec.coupling.ln();

    if spec.velocity == 0.0 {
        // Planck limit: λ²/(2πβ) · x / (e^x - 1), x = βω
        let x = beta * omega_signed;
        let ln_shape = if x > 0.0 {
            x.ln() - log_expm1(x)?
        } else {
            (-x).ln() - log1mexp(-x)?
        };
        return Ok(ln_coupling2 - (2.0 * PI * beta).ln() + ln_shape);
    }

    let terms = rate_terms(beta, spec.velocity, omega_signed.abs())?;
    let ln_prefactor = ln_coupling2 - (4.0 * PI).ln() - beta.ln() - gamma_velocity(spec.velocity).ln();
    if omega_signed > 0.0 {
        Ok(ln_prefactor + terms.ln_d)
    } else {
        Ok(ln_prefactor + log_add_exp(terms.ln_delta, terms.ln_d))
    }
}

/// Transition rate `G(omega_signed)`, always positive where representable.
pub fn transition_rate(spec: &DetectorSpec, omega_signed: f64) -> Result<f64> {
    log_transition_rate(spec, omega_signed).map(f64::exp)
}

/// Frequency-dependent effective temperature at the detector's own gap.
pub fn effective_temperature(spec: &DetectorSpec) -> Result<EffectiveBath> {
    spec.validate()?;
    if spec.velocity == 0.0 {
        return Ok(EffectiveBath::from_beta(spec.beta_bath));
    }
    if spec.beta_bath * spec.omega < SMALL_FREQUENCY_CUTOFF {
        return effective_temperature_high_t(spec);
    }

    let terms = rate_terms(spec.beta_bath, spec.velocity, spec.omega)?;
    // β_eff ω = ln(1 + Δ/D)
    let s = terms.ln_delta - terms.ln_d;
    let log_ratio = if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    };
    Ok(EffectiveBath {
        t_eff: spec.omega / log_ratio,
        beta_eff: log_ratio / spec.omega,
    })
}

/// `ln((1+υ)/(1-υ)) / (2γυ)`, the small-frequency ratio `T_eff / T`.
/// Equals 1 at rest and decreases to 0 as `υ → 1`.
pub fn high_temperature_factor(velocity: f64) -> Result<f64> {
    check_velocity(velocity)?;
    if velocity == 0.0 {
        return Ok(1.0);
    }
    Ok(velocity.atanh() * ((1.0 - velocity) * (1.0 + velocity)).sqrt() / velocity)
}

/// Leading-order small-frequency effective temperature; independent of `ω`.
pub fn effective_temperature_high_t(spec: &DetectorSpec) -> Result<EffectiveBath> {
    spec.validate()?;
    if spec.velocity == 0.0 {
        return Ok(EffectiveBath::from_beta(spec.beta_bath));
    }
    let factor = high_temperature_factor(spec.velocity)?;
    Ok(EffectiveBath::from_temperature(spec.temperature() * factor))
}
