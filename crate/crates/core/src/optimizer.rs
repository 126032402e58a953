//! Efficiency at maximum power.
//!
//! The cycle duration is taken to be independent of the qubit gaps, so
//! maximizing power is maximizing the extracted work per cycle.
//!
//! Two closed forms are available: a high-temperature one (optimize `ω_A`
//! at fixed `ω_B`, with `tanh x ≈ x`) and a low-temperature one (optimize
//! `ω_B` at fixed `ω_A`, with `tanh(x/2) ≈ 1 - 2e^{-x}`), which involves the
//! Lambert W function. [`max_power_numeric`] maximizes the exact work by
//! golden-section search and serves as the reference for both.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detector::high_temperature_factor;
use crate::engine::{
    carnot_bounds, effective_baths, CarnotBounds, EffectiveEngine, EngineConfig, OperatingMode, TemperatureMode,
};
use crate::error::{Error, Result};
use crate::special::lambert_w0_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumMethod {
    ClosedFormHighT,
    ClosedFormLowT,
    Numeric,
}

/// Optimal operating point of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerOptimum {
    /// Value of the varied gap at the optimum.
    pub optimal_frequency: f64,
    /// Extracted work per cycle at the optimum (exact `tanh` expression).
    pub max_work: f64,
    pub eta_star: f64,
    /// `ω_B / ω_A` at the optimum.
    pub frequency_ratio: f64,
    pub method: OptimumMethod,
}

/// Which gap the numeric optimizer varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariedFrequency {
    OmegaA,
    OmegaB,
}

impl FromStr for VariedFrequency {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "omega_a" => Ok(VariedFrequency::OmegaA),
            "omega_b" => Ok(VariedFrequency::OmegaB),
            other => Err(format!("unknown frequency `{other}` (expected omega_a or omega_b)")),
        }
    }
}

fn check_betas(beta_a_eff: f64, beta_b_eff: f64) -> Result<()> {
    for (name, value) in [("beta_a_eff", beta_a_eff), ("beta_b_eff", beta_b_eff)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::domain(name, value, "(0, +inf)"));
        }
    }
    if beta_a_eff >= beta_b_eff {
        return Err(Error::NoEngineWindow { beta_a_eff, beta_b_eff });
    }
    Ok(())
}

fn check_frequency(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::domain(name, value, "(0, +inf)"));
    }
    Ok(())
}

/// High-temperature optimum over `ω_A` at fixed `ω_B`:
/// `ω_B/ω_A = 2β_A/(β_A + β_B)` and `η* = (β_B - β_A)/(β_A + β_B)`.
pub fn max_power_high_t(beta_a_eff: f64, beta_b_eff: f64, omega_b: f64) -> Result<PowerOptimum> {
    check_betas(beta_a_eff, beta_b_eff)?;
    check_frequency("omega_b", omega_b)?;
    let sum = beta_a_eff + beta_b_eff;
    let omega_a = omega_b * sum / (2.0 * beta_a_eff);
    let engine = EffectiveEngine::new(omega_a, omega_b, beta_a_eff, beta_b_eff)?;
    Ok(PowerOptimum {
        optimal_frequency: omega_a,
        max_work: engine.extracted_work(),
        eta_star: (beta_b_eff - beta_a_eff) / sum,
        frequency_ratio: 2.0 * beta_a_eff / sum,
        method: OptimumMethod::ClosedFormHighT,
    })
}

/// Low-temperature optimal `ω_B` at fixed `ω_A`:
/// `ω_B = ω_A + (1 - W(e^{ω_A(β_B - β_A) + 1})) / β_B`.
///
/// Returns `ω_A` itself when `β_A = β_B`.
pub fn low_t_optimal_omega_b(beta_a_eff: f64, beta_b_eff: f64, omega_a: f64) -> Result<f64> {
    let w = lambert_w0_exp(omega_a * (beta_b_eff - beta_a_eff) + 1.0)?;
    Ok(omega_a + (1.0 - w) / beta_b_eff)
}

pub fn max_power_low_t(beta_a_eff: f64, beta_b_eff: f64, omega_a: f64) -> Result<PowerOptimum> {
    check_betas(beta_a_eff, beta_b_eff)?;
    check_frequency("omega_a", omega_a)?;
    let w = lambert_w0_exp(omega_a * (beta_b_eff - beta_a_eff) + 1.0)?;
    let gap = (w - 1.0) / beta_b_eff;
    let omega_b = omega_a - gap;
    if !(omega_b > 0.0 && omega_b < omega_a) {
        return Err(Error::OptimumOutsideWindow { omega_a, omega_b });
    }
    let engine = EffectiveEngine::new(omega_a, omega_b, beta_a_eff, beta_b_eff)?;
    Ok(PowerOptimum {
        optimal_frequency: omega_b,
        max_work: engine.extracted_work(),
        eta_star: gap / omega_a,
        frequency_ratio: omega_b / omega_a,
        method: OptimumMethod::ClosedFormLowT,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of `f` on `[lo, hi]`, stopping
/// once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if b - a <= tol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Extracted work as a function of one gap, with effective temperatures
/// recomputed per trial in [`TemperatureMode::Full`].
struct WorkProfile {
    config: EngineConfig,
    vary: VariedFrequency,
    fixed_baths: Option<(f64, f64)>,
}

impl WorkProfile {
    fn new(config: &EngineConfig, vary: VariedFrequency) -> Result<Self> {
        let fixed_baths = match config.temperature_mode {
            TemperatureMode::Full => None,
            _ => {
                let (a, b) = effective_baths(config)?;
                Some((a.beta_eff, b.beta_eff))
            }
        };
        Ok(WorkProfile {
            config: *config,
            vary,
            fixed_baths,
        })
    }

    fn engine_at(&self, frequency: f64) -> Result<EffectiveEngine> {
        let mut trial = self.config;
        match self.vary {
            VariedFrequency::OmegaA => trial.spec_a.omega = frequency,
            VariedFrequency::OmegaB => trial.spec_b.omega = frequency,
        }
        match self.fixed_baths {
            Some((beta_a, beta_b)) => EffectiveEngine::new(trial.spec_a.omega, trial.spec_b.omega, beta_a, beta_b),
            None => EffectiveEngine::resolve(&trial),
        }
    }

    fn work(&self, frequency: f64) -> f64 {
        self.engine_at(frequency)
            .map(|e| e.extracted_work())
            .unwrap_or(f64::NEG_INFINITY)
    }

    fn config_at(&self, frequency: f64) -> EngineConfig {
        let mut trial = self.config;
        match self.vary {
            VariedFrequency::OmegaA => trial.spec_a.omega = frequency,
            VariedFrequency::OmegaB => trial.spec_b.omega = frequency,
        }
        trial
    }
}

/// Maximizes extracted work over one gap inside `bracket`.
pub fn max_power_numeric(config: &EngineConfig, vary: VariedFrequency, bracket: (f64, f64)) -> Result<PowerOptimum> {
    config.validate()?;
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "endpoints must satisfy 0 < lo < hi < inf",
        });
    }
    let profile = WorkProfile::new(config, vary)?;
    let tol = 1e-10 * (hi - lo);
    let (x, best) = golden_section_max(|f| profile.work(f), lo, hi, tol);
    if !(best > 0.0) {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "no positive extracted work inside the bracket",
        });
    }
    if profile.work(lo) >= best || profile.work(hi) >= best || x - lo <= tol || hi - x <= tol {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "maximum sits on the bracket edge",
        });
    }
    let engine = profile.engine_at(x)?;
    Ok(PowerOptimum {
        optimal_frequency: x,
        max_work: best,
        eta_star: (engine.omega_a - engine.omega_b) / engine.omega_a,
        frequency_ratio: engine.omega_b / engine.omega_a,
        method: OptimumMethod::Numeric,
    })
}

/// Coarse log-spaced scan of the extracted work over `span`; returns the
/// neighbours of the best positive sample as a bracket for
/// [`max_power_numeric`], or `None` when no sample extracts work.
pub fn locate_bracket(
    config: &EngineConfig,
    vary: VariedFrequency,
    span: (f64, f64),
    samples: usize,
) -> Result<Option<(f64, f64)>> {
    config.validate()?;
    let (lo, hi) = span;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || samples < 3 {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "span must satisfy 0 < lo < hi < inf with at least 3 samples",
        });
    }
    let profile = WorkProfile::new(config, vary)?;
    let step = (hi / lo).ln() / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| lo * (step * i as f64).exp()).collect();
    let (best, value) = xs
        .iter()
        .map(|&x| profile.work(x))
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, w)| if w > acc.1 { (i, w) } else { acc },
        );
    if !(value > 0.0) {
        return Ok(None);
    }
    let left = xs[best.saturating_sub(1)];
    let right = xs[(best + 1).min(samples - 1)];
    Ok(Some((left, right)))
}

/// Default search span for the varied gap: from the fixed gap out to four
/// times the effective-temperature window edge.
pub fn default_span(config: &EngineConfig, vary: VariedFrequency) -> Result<(f64, f64)> {
    let (a, b) = effective_baths(config)?;
    let window = b.beta_eff / a.beta_eff;
    Ok(match vary {
        VariedFrequency::OmegaA => {
            let w = config.spec_b.omega;
            (w, w * (4.0 * window).max(4.0))
        }
        VariedFrequency::OmegaB => {
            let w = config.spec_a.omega;
            (w * (0.25 / window).min(0.25), w)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanParameter {
    VelocityA,
    VelocityB,
    /// `T_B^eff / T_A^eff`.
    EffectiveRatio,
}

impl ScanParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanParameter::VelocityA => "velocity_a",
            ScanParameter::VelocityB => "velocity_b",
            ScanParameter::EffectiveRatio => "effective_ratio",
        }
    }
}

impl FromStr for ScanParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "velocity_a" => Ok(ScanParameter::VelocityA),
            "velocity_b" => Ok(ScanParameter::VelocityB),
            "effective_ratio" => Ok(ScanParameter::EffectiveRatio),
            other => Err(format!(
                "unknown scan parameter `{other}` (expected velocity_a, velocity_b or effective_ratio)"
            )),
        }
    }
}

/// How the optimum at each scan point is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Closed form over `ω_A` at fixed `ω_B`.
    HighT,
    /// Lambert-W closed form over `ω_B` at fixed `ω_A`.
    LowT,
    /// Golden-section search over the chosen gap.
    Numeric(VariedFrequency),
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::HighT => f.write_str("high_t"),
            Regime::LowT => f.write_str("low_t"),
            Regime::Numeric(VariedFrequency::OmegaA) => f.write_str("numeric(omega_a)"),
            Regime::Numeric(VariedFrequency::OmegaB) => f.write_str("numeric(omega_b)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub value: f64,
    pub optimum: Option<PowerOptimum>,
    pub bounds: CarnotBounds,
    /// `Engine` when an optimum exists, otherwise the mode at the configured gaps.
    pub mode: OperatingMode,
}

/// Applies one scan value to `base`.
///
/// Effective-ratio scans need a gap-independent temperature law
/// (`high_t` or `rest`). They rescale one rest-frame bath temperature so that
/// `β_A^eff / β_B^eff` hits the target, holding the cold bath fixed except in
/// the low-temperature regime, where the hot bath (and with it `β_A ω_A`) is
/// held instead.
pub fn apply_scan(base: &EngineConfig, scan: ScanParameter, value: f64, regime: Regime) -> Result<EngineConfig> {
    let mut config = *base;
    match scan {
        ScanParameter::VelocityA => config.spec_a.velocity = value,
        ScanParameter::VelocityB => config.spec_b.velocity = value,
        ScanParameter::EffectiveRatio => {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain("effective_ratio", value, "(0, +inf)"));
            }
            let factor = |v: f64| match config.temperature_mode {
                TemperatureMode::HighT => high_temperature_factor(v),
                TemperatureMode::Rest => Ok(1.0),
                TemperatureMode::Full => Err(Error::domain(
                    "effective_ratio",
                    value,
                    "scans under a gap-independent temperature law (high_t or rest)",
                )),
            };
            let (fa, fb) = (factor(config.spec_a.velocity)?, factor(config.spec_b.velocity)?);
            // β_A^eff / β_B^eff = (β_A / f_A) / (β_B / f_B)
            match regime {
                Regime::LowT => config.spec_b.beta_bath = config.spec_a.beta_bath * fb / (fa * value),
                _ => config.spec_a.beta_bath = value * fa * config.spec_b.beta_bath / fb,
            }
        }
    }
    config.validate()?;
    Ok(config)
}

/// Optimum and reference efficiencies at one scan value.
pub fn scan_point(base: &EngineConfig, scan: ScanParameter, value: f64, regime: Regime) -> Result<ScanPoint> {
    let config = apply_scan(base, scan, value, regime)?;
    let engine = EffectiveEngine::resolve(&config)?;
    let (optimum, bounds_config) = match regime {
        Regime::HighT => (
            max_power_high_t(engine.beta_a_eff, engine.beta_b_eff, engine.omega_b),
            config,
        ),
        Regime::LowT => (
            max_power_low_t(engine.beta_a_eff, engine.beta_b_eff, engine.omega_a),
            config,
        ),
        Regime::Numeric(vary) => {
            let span = default_span(&config, vary)?;
            let optimum = match locate_bracket(&config, vary, span, 65)? {
                Some(bracket) => max_power_numeric(&config, vary, bracket),
                None => Err(Error::Bracket {
                    lo: span.0,
                    hi: span.1,
                    reason: "no positive extracted work in the search span",
                }),
            };
            // bounds from the temperatures the optimum actually runs at
            let at = match &optimum {
                Ok(opt) => WorkProfile::new(&config, vary)?.config_at(opt.optimal_frequency),
                Err(_) => config,
            };
            (optimum, at)
        }
    };
    let optimum = match optimum {
        Ok(opt) => Some(opt),
        Err(Error::NoEngineWindow { .. } | Error::OptimumOutsideWindow { .. } | Error::Bracket { .. }) => None,
        Err(other) => return Err(other),
    };
    let mode = match optimum {
        Some(_) => OperatingMode::Engine,
        None => engine.observables().mode,
    };
    Ok(ScanPoint {
        value,
        optimum,
        bounds: carnot_bounds(&bounds_config)?,
        mode,
    })
}

/// Efficiency at maximum power along a grid, in grid order.
pub fn eta_star_scan(base: &EngineConfig, scan: ScanParameter, grid: &[f64], regime: Regime) -> Result<Vec<ScanPoint>> {
    grid.iter().map(|&v| scan_point(base, scan, v, regime)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::DetectorSpec;
    use proptest::prelude::*;

    fn config(
        omega_a: f64,
        omega_b: f64,
        beta_a: f64,
        beta_b: f64,
        v_a: f64,
        v_b: f64,
        mode: TemperatureMode,
    ) -> EngineConfig {
        EngineConfig::new(
            DetectorSpec::new(omega_a, v_a, beta_a).unwrap(),
            DetectorSpec::new(omega_b, v_b, beta_b).unwrap(),
            mode,
        )
        .unwrap()
    }

    /// Dense-grid maximum refined by bisection on the sign of a central
    /// difference; independent of the golden-section code path.
    fn brute_force_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let n = 20_000;
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let i = (0..=n).max_by(|&i, &j| f(xs[i]).total_cmp(&f(xs[j]))).unwrap();
        let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(n)]);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            let h = 1e-5;
            if f(m + h) > f(m - h) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn high_t_reference_values() {
        let opt = max_power_high_t(0.5, 1.0, 0.12).unwrap();
        assert_eq!(opt.eta_star, 1.0 / 3.0);
        assert!(opt.eta_star > 1.0 - 0.5f64.sqrt());
        assert!((opt.frequency_ratio - 2.0 / 3.0).abs() < 1e-16);
        assert!((opt.optimal_frequency - 0.18).abs() < 1e-16);
        assert!(opt.max_work > 0.0);
        assert_eq!(opt.method, OptimumMethod::ClosedFormHighT);
    }

    #[test]
    fn high_t_vanishing_gradient() {
        for eps in [1e-2, 1e-4, 1e-6] {
            let opt = max_power_high_t(1.0 - eps, 1.0, 0.1).unwrap();
            assert!((opt.eta_star - eps / 2.0).abs() < eps * eps);
        }
        assert!(matches!(
            max_power_high_t(1.0, 1.0, 0.1),
            Err(Error::NoEngineWindow { .. })
        ));
        assert!(matches!(
            max_power_high_t(2.0, 1.0, 0.1),
            Err(Error::NoEngineWindow { .. })
        ));
    }

    #[test]
    fn high_t_at_rest_is_otto_result() {
        let (ba, bb) = (0.3, 1.7);
        let opt = max_power_high_t(ba, bb, 0.05).unwrap();
        assert!((opt.eta_star - (bb - ba) / (ba + bb)).abs() < 1e-16);
    }

    #[test]
    fn low_t_degenerate_and_direction() {
        let wb = low_t_optimal_omega_b(1.3, 1.3, 6.5).unwrap();
        assert!((wb - 6.5).abs() < 1e-14);
        assert!(matches!(
            max_power_low_t(1.3, 1.3, 6.5),
            Err(Error::NoEngineWindow { .. })
        ));
        for (ba, bb, wa) in [(1.0, 2.0, 6.5), (0.2, 0.3, 1.0), (1.0, 50.0, 30.0)] {
            let opt = max_power_low_t(ba, bb, wa).unwrap();
            assert!(opt.optimal_frequency < wa);
            assert!(opt.frequency_ratio > ba / bb, "inside the engine window");
            assert!(opt.max_work > 0.0);
        }
    }

    #[test]
    fn low_t_matches_brute_force_maximum() {
        let (ba, bb, wa) = (1.0, 2.0, 6.5);
        // root of d(w_ext)/d(ω_B) at 40 digits
        let exact = 4.125_095_937_174_631;
        let brute = brute_force_argmax(
            |wb| EffectiveEngine::new(wa, wb, ba, bb).unwrap().extracted_work(),
            0.1,
            6.4,
        );
        assert!((brute - exact).abs() / exact < 1e-6);
        let closed = max_power_low_t(ba, bb, wa).unwrap().optimal_frequency;
        // the closed form drops e^{-2x} terms; at β_A ω_A = 6.5 it is good to ~1e-4
        assert!((closed - exact).abs() / exact < 2e-4);
        let numeric = max_power_numeric(
            &config(wa, 3.0, ba, bb, 0.0, 0.0, TemperatureMode::Rest),
            VariedFrequency::OmegaB,
            (3.0, 5.5),
        )
        .unwrap();
        // golden section is limited by the flatness of the peak
        assert!((numeric.optimal_frequency - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 1.234).powi(2) + 2.0, 0.0, 5.0, 1e-12);
        assert!((x - 1.234).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn numeric_matches_high_t_closed_form_deep_in_regime() {
        // β_B ω_B = 1e-4: the tanh expansion error is ~1e-10
        let (ba, bb, wb) = (0.5, 1.0, 1e-4);
        let c = config(2.0 * wb, wb, ba, bb, 0.0, 0.0, TemperatureMode::Rest);
        let numeric = max_power_numeric(&c, VariedFrequency::OmegaA, (wb, wb * bb / ba)).unwrap();
        let closed = max_power_high_t(ba, bb, wb).unwrap();
        assert!((numeric.frequency_ratio - closed.frequency_ratio).abs() <= 1e-8 * closed.frequency_ratio);
    }

    #[test]
    fn numeric_rejects_degenerate_bracket() {
        let c = config(1.0, 0.5, 0.8, 0.8, 0.0, 0.0, TemperatureMode::Rest);
        let err = max_power_numeric(&c, VariedFrequency::OmegaA, (0.5, 5.0)).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
        assert!(max_power_numeric(&c, VariedFrequency::OmegaA, (1.0, 0.5)).is_err());
    }

    #[test]
    fn numeric_detects_edge_maximum() {
        let c = config(1.0, 0.5, 0.5, 1.0, 0.0, 0.0, TemperatureMode::Rest);
        // the optimum ω_A ≈ 0.75 lies outside [0.55, 0.6]
        let err = max_power_numeric(&c, VariedFrequency::OmegaA, (0.55, 0.6)).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn numeric_full_mode_recomputes_temperatures() {
        let c = config(1.0, 0.5, 0.5, 1.0, 0.0, 0.8, TemperatureMode::Full);
        let span = default_span(&c, VariedFrequency::OmegaA).unwrap();
        let bracket = locate_bracket(&c, VariedFrequency::OmegaA, span, 65).unwrap().unwrap();
        let opt = max_power_numeric(&c, VariedFrequency::OmegaA, bracket).unwrap();
        let mut at = c;
        at.spec_a.omega = opt.optimal_frequency;
        let direct = crate::engine::cycle_observables(&at).unwrap().w_ext;
        assert!((direct - opt.max_work).abs() < 1e-15);
        // stationarity
        for dx in [-1e-4, 1e-4] {
            at.spec_a.omega = opt.optimal_frequency * (1.0 + dx);
            assert!(crate::engine::cycle_observables(&at).unwrap().w_ext <= opt.max_work);
        }
    }

    #[test]
    fn scan_crosses_rest_carnot() {
        let base = config(0.24, 0.12, 0.5, 1.0, 0.0, 0.0, TemperatureMode::HighT);
        let points = eta_star_scan(&base, ScanParameter::VelocityB, &[0.0, 0.92, 0.93], Regime::HighT).unwrap();
        let eta0 = points[0].optimum.unwrap().eta_star;
        assert_eq!(eta0, 1.0 / 3.0);
        assert!(eta0 < points[0].bounds.eta_c_rest);
        assert!(points[1].optimum.unwrap().eta_star < 0.5);
        assert!(points[2].optimum.unwrap().eta_star > 0.5);
        for p in &points {
            assert!(p.optimum.unwrap().eta_star < p.bounds.eta_c_eff);
        }
    }

    #[test]
    fn scan_emits_null_outside_window() {
        let base = config(1.0, 0.5, 0.5, 1.0, 0.0, 0.0, TemperatureMode::HighT);
        let points = eta_star_scan(&base, ScanParameter::EffectiveRatio, &[0.5, 1.5], Regime::HighT).unwrap();
        assert!(points[0].optimum.is_some());
        assert!(points[1].optimum.is_none());
        assert_ne!(points[1].mode, OperatingMode::Engine);
    }

    #[test]
    fn effective_ratio_scan_hits_target() {
        let base = config(1.0, 0.5, 0.5, 1.0, 0.3, 0.7, TemperatureMode::HighT);
        for regime in [Regime::HighT, Regime::LowT] {
            for r in [0.2, 0.5, 0.9] {
                let c = apply_scan(&base, ScanParameter::EffectiveRatio, r, regime).unwrap();
                let e = EffectiveEngine::resolve(&c).unwrap();
                assert!((e.effective_ratio() - r).abs() < 1e-14);
            }
        }
        let full = config(1.0, 0.5, 0.5, 1.0, 0.3, 0.7, TemperatureMode::Full);
        assert!(apply_scan(&full, ScanParameter::EffectiveRatio, 0.5, Regime::HighT).is_err());
    }

    proptest! {
        #[test]
        fn high_t_eta_star_beats_curzon_ahlborn(r in 1e-6f64..0.999_999) {
            let opt = max_power_high_t(r, 1.0, 1.0).unwrap();
            prop_assert!(opt.eta_star >= 1.0 - r.sqrt());
            prop_assert!(opt.eta_star <= 1.0 - r);
        }

        #[test]
        fn closed_forms_respect_effective_carnot(ba in 0.05f64..5.0, gap in 0.01f64..5.0, w in 0.1f64..10.0) {
            let bb = ba + gap;
            let bound = 1.0 - ba / bb;
            let high = max_power_high_t(ba, bb, w).unwrap();
            prop_assert!(high.eta_star <= bound + 1e-12);
            if let Ok(low) = max_power_low_t(ba, bb, w) {
                prop_assert!(low.eta_star <= bound + 1e-12);
                prop_assert!(low.max_work > 0.0);
            }
        }
    }
}
