//! `fcs`: joint counting statistics of work and hot heat for one engine.
//!
//! The report lists the four outcomes, the raw moments `<W^m Q_H^n>` up to
//! `m, n <= 2`, cumulants checked against central differences of the log
//! characteristic function, and a probability-sum footer.

use num_complex::Complex64;
use relengine::engine::{EffectiveEngine, JointWorkHeatDistribution};
use relengine::TemperatureMode;
use serde::Serialize;

use crate::config::Settings;
use crate::error::CliResult;
use crate::output::Row;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FcsRow {
    pub kind: &'static str,
    pub label: String,
    pub probability: Option<f64>,
    pub w: Option<f64>,
    pub q_h: Option<f64>,
    pub value: Option<f64>,
    pub finite_difference: Option<f64>,
    pub abs_diff: Option<f64>,
}

impl Row for FcsRow {
    const HEADER: &'static [&'static str] = &[
        "kind",
        "label",
        "probability",
        "w",
        "q_h",
        "value",
        "finite_difference",
        "abs_diff",
    ];
}

impl FcsRow {
    fn blank(kind: &'static str, label: String) -> Self {
        FcsRow {
            kind,
            label,
            probability: None,
            w: None,
            q_h: None,
            value: None,
            finite_difference: None,
            abs_diff: None,
        }
    }
}

/// A cumulant by enumeration and by finite differences of `ln χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantCheck {
    pub label: &'static str,
    pub enumeration: f64,
    pub finite_difference: f64,
}

/// Largest energy quantum in the distribution; sets the step sizes.
fn energy_scale(dist: &JointWorkHeatDistribution) -> f64 {
    dist.outcomes
        .iter()
        .map(|o| o.w.abs().max(o.q_h.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// Mean and covariance of `(W, Q_H)`, by enumeration and by central
/// differences of `ln χ(χ_W, χ_H)` at the origin.
pub fn cumulant_checks(dist: &JointWorkHeatDistribution) -> [CumulantCheck; 5] {
    let scale = energy_scale(dist);
    let ln_chi = |a: f64, b: f64| -> Complex64 { dist.characteristic(a, b).ln() };
    // truncation ~ (h s)^2 s^k, rounding ~ eps / (h s)^k
    let h1 = 1e-5 / scale;
    let h2 = 3e-4 / scale;

    let first = |dir: (f64, f64)| {
        let (p, m) = (ln_chi(h1 * dir.0, h1 * dir.1), ln_chi(-h1 * dir.0, -h1 * dir.1));
        (p - m).im / (2.0 * h1)
    };
    let second = |dir: (f64, f64)| {
        let (p, m) = (ln_chi(h2 * dir.0, h2 * dir.1), ln_chi(-h2 * dir.0, -h2 * dir.1));
        -(p + m).re / (h2 * h2)
    };
    let mixed = {
        let s = ln_chi(h2, h2) - ln_chi(h2, -h2) - ln_chi(-h2, h2) + ln_chi(-h2, -h2);
        -s.re / (4.0 * h2 * h2)
    };

    let mean_w = dist.moment(1, 0);
    let mean_q = dist.moment(0, 1);
    [
        CumulantCheck {
            label: "mean_w",
            enumeration: mean_w,
            finite_difference: first((1.0, 0.0)),
        },
        CumulantCheck {
            label: "mean_q_h",
            enumeration: mean_q,
            finite_difference: first((0.0, 1.0)),
        },
        CumulantCheck {
            label: "var_w",
            enumeration: dist.moment(2, 0) - mean_w * mean_w,
            finite_difference: second((1.0, 0.0)),
        },
        CumulantCheck {
            label: "var_q_h",
            enumeration: dist.moment(0, 2) - mean_q * mean_q,
            finite_difference: second((0.0, 1.0)),
        },
        CumulantCheck {
            label: "cov_w_q_h",
            enumeration: dist.moment(1, 1) - mean_w * mean_q,
            finite_difference: mixed,
        },
    ]
}

pub fn report(engine: &EffectiveEngine) -> Vec<FcsRow> {
    let dist = engine.distribution();
    let mut rows = Vec::new();
    for o in &dist.outcomes {
        rows.push(FcsRow {
            probability: Some(o.probability),
            w: Some(o.w),
            q_h: Some(o.q_h),
            ..FcsRow::blank("outcome", format!("a{}b{}", o.initial_a, o.initial_b))
        });
    }
    for m in 0..=2 {
        for n in 0..=2 {
            rows.push(FcsRow {
                value: Some(dist.moment(m, n)),
                ..FcsRow::blank("moment", format!("w{m}q{n}"))
            });
        }
    }
    for c in cumulant_checks(&dist) {
        rows.push(FcsRow {
            value: Some(c.enumeration),
            finite_difference: Some(c.finite_difference),
            abs_diff: Some((c.enumeration - c.finite_difference).abs()),
            ..FcsRow::blank("cumulant", c.label.to_string())
        });
    }
    rows.push(FcsRow {
        value: Some(dist.total_probability()),
        ..FcsRow::blank("footer", "probability_sum".to_string())
    });
    rows
}

/// Engine parameters as for the other commands; full temperature law by default.
pub fn compute(settings: &Settings) -> CliResult<Vec<FcsRow>> {
    let config = settings.engine_config(settings.temperature_mode_or(TemperatureMode::Full)?)?;
    Ok(report(&EffectiveEngine::resolve(&config)?))
}
