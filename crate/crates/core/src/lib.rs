//! Thermodynamics of a two-qubit SWAP heat engine whose qubits move at
//! constant velocity through thermal massless scalar-field baths.
//!
//! Natural units (`hbar = c = k_B = 1`) are used throughout.
//!
//! - [`special`]: Lambert W and stable log/exp compositions.
//! - [`detector`]: transition rate and effective temperature of a moving qubit.
//! - [`engine`]: counting statistics, mean work and heat, entropy production,
//!   operating modes and Carnot-type bounds.
//! - [`optimizer`]: efficiency at maximum power, closed form and numeric.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detector;
pub mod engine;
pub mod error;
pub mod optimizer;
pub mod special;

pub use detector::{DetectorSpec, DopplerPair, EffectiveBath};
pub use engine::{
    CarnotBounds, CycleObservables, EngineConfig, JointWorkHeatDistribution, OperatingMode, TemperatureMode,
};
pub use error::{Error, Result};
pub use optimizer::{OptimumMethod, PowerOptimum};
