use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The effective temperatures leave no frequency window where the cycle
    /// extracts work.
    #[error("no engine window: beta_a_eff = {beta_a_eff} must be below beta_b_eff = {beta_b_eff}")]
    NoEngineWindow { beta_a_eff: f64, beta_b_eff: f64 },

    /// A closed-form optimum fell outside the engine window.
    #[error("optimum omega_b = {omega_b} lies outside the engine window (0, {omega_a})")]
    OptimumOutsideWindow { omega_a: f64, omega_b: f64 },

    /// The search bracket does not enclose a positive interior maximum.
    #[error("bracket [{lo}, {hi}]: {reason}")]
    Bracket { lo: f64, hi: f64, reason: &'static str },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain { name, value, domain }
    }
}
