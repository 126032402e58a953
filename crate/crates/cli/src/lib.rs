//! Command-line front end for `relengine`: effective-temperature maps,
//! engine performance against the frequency ratio, efficiency at maximum
//! power, and counting statistics, written as CSV or JSON tables.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod config;
pub mod engine;
pub mod error;
pub mod fcs;
pub mod optimize;
pub mod output;
pub mod teff;

use config::Settings;
use error::CliResult;
use output::{emit, render, Row};

const PRECEDENCE: &str = "\
Settings are resolved per key: built-in defaults < --config file < flags.
The config file is one flat JSON object using the long flag names with
underscores (e.g. {\"omega_a\": 6.5, \"sweep_values\": [0.5]}); unknown keys
are rejected, keys a command does not use are ignored. An explicit
sweep_values list replaces start/stop/count/spacing.

Exit codes: 0 success, 2 invalid configuration, 3 no grid point inside the
engine window (optimize), 1 internal error.";

#[derive(Debug, Parser)]
#[command(name = "relengine", version, about, after_help = PRECEDENCE)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective temperature over a (gap, speed) grid at one bath temperature.
    #[command(after_help = PRECEDENCE, allow_negative_numbers = true)]
    Teff(TeffArgs),
    /// Work, heat, entropy production and mode against ω_B/ω_A per motion scenario.
    #[command(after_help = PRECEDENCE, allow_negative_numbers = true)]
    Engine(EngineArgs),
    /// Efficiency at maximum power along a scan.
    #[command(after_help = PRECEDENCE, allow_negative_numbers = true)]
    Optimize(OptimizeArgs),
    /// Joint work/heat counting statistics of one engine.
    #[command(after_help = PRECEDENCE, allow_negative_numbers = true)]
    Fcs(FcsArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct IoArgs {
    /// Flat JSON config file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format: csv (default) or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file, or `-` for standard output (default).
    #[arg(long, value_name = "PATH|-")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QubitArgs {
    /// Gap of the hot-side qubit A [default: 1].
    #[arg(long)]
    pub omega_a: Option<f64>,
    /// Gap of the cold-side qubit B [default: 0.5].
    #[arg(long)]
    pub omega_b: Option<f64>,
    /// Rest-frame inverse temperature of the hot bath [default: 1].
    #[arg(long)]
    pub beta_a: Option<f64>,
    /// Rest-frame inverse temperature of the cold bath [default: 2].
    #[arg(long)]
    pub beta_b: Option<f64>,
    /// Speed of qubit A in units of c [default: 0].
    #[arg(long)]
    pub velocity_a: Option<f64>,
    /// Speed of qubit B in units of c [default: 0].
    #[arg(long)]
    pub velocity_b: Option<f64>,
    /// Temperature law: full, high_t or rest.
    #[arg(long)]
    pub temperature_mode: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Swept quantity (see the command's description for choices).
    #[arg(long = "sweep-parameter")]
    pub parameter: Option<String>,
    #[arg(long = "sweep-start")]
    pub start: Option<f64>,
    #[arg(long = "sweep-stop")]
    pub stop: Option<f64>,
    /// Number of points, at least 2.
    #[arg(long = "sweep-count")]
    pub count: Option<usize>,
    /// linear or log (log needs a positive start).
    #[arg(long = "sweep-spacing")]
    pub spacing: Option<String>,
    /// Explicit comma-separated grid; overrides start/stop/count/spacing.
    #[arg(long = "sweep-values", value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

/// Sweeps the gap `omega` [default: log grid 1e-3..20, 60 points].
#[derive(Debug, Clone, Default, Args)]
pub struct TeffArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Rest-frame inverse bath temperature [default: 1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Comma-separated speeds [default: 0,0.5,0.8,0.9,0.99].
    #[arg(long, value_delimiter = ',')]
    pub velocities: Option<Vec<f64>>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

/// Sweeps `omega_ratio` = ω_B/ω_A in (0, 1] [default: linear 0.05..1, 20
/// points] with ω_A fixed. Temperature law defaults to high_t. Qubit speeds
/// come from the scenarios, not from --velocity-a/b.
#[derive(Debug, Clone, Default, Args)]
pub struct EngineArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub qubits: QubitArgs,
    /// Comma-separated: both-moving, only-a-moving, only-b-moving, both-rest [default: all].
    #[arg(long, value_delimiter = ',')]
    pub scenarios: Option<Vec<String>>,
    /// Speed of the moving qubit(s) [default: 0.8].
    #[arg(long)]
    pub scenario_velocity: Option<f64>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

/// Sweeps velocity_b (default; linear 0..0.95, 20 points), velocity_a or
/// effective_ratio (= T_B^eff/T_A^eff, needs temperature law high_t or rest).
#[derive(Debug, Clone, Default, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub qubits: QubitArgs,
    /// high_t (closed form over ω_A), low_t (closed form over ω_B) or
    /// numeric-full (golden-section search) [default: high_t].
    #[arg(long)]
    pub regime: Option<String>,
    /// Gap varied by numeric-full: omega_a or omega_b [default: omega_a].
    #[arg(long)]
    pub vary: Option<String>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

/// One engine; temperature law defaults to full.
#[derive(Debug, Clone, Default, Args)]
pub struct FcsArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub qubits: QubitArgs,
}

impl IoArgs {
    fn apply(&self, s: &mut Settings) {
        s.format = self.format.clone();
        s.out = self.out.clone();
    }
}

impl QubitArgs {
    fn apply(&self, s: &mut Settings) {
        s.omega_a = self.omega_a;
        s.omega_b = self.omega_b;
        s.beta_a = self.beta_a;
        s.beta_b = self.beta_b;
        s.velocity_a = self.velocity_a;
        s.velocity_b = self.velocity_b;
        s.temperature_mode = self.temperature_mode.clone();
    }
}

impl SweepArgs {
    fn apply(&self, s: &mut Settings) {
        s.sweep_parameter = self.parameter.clone();
        s.sweep_start = self.start;
        s.sweep_stop = self.stop;
        s.sweep_count = self.count;
        s.sweep_spacing = self.spacing.clone();
        s.sweep_values = self.values.clone();
    }
}

impl Command {
    fn io(&self) -> &IoArgs {
        match self {
            Command::Teff(a) => &a.io,
            Command::Engine(a) => &a.io,
            Command::Optimize(a) => &a.io,
            Command::Fcs(a) => &a.io,
        }
    }

    /// Settings given on the command line only.
    pub fn flag_settings(&self) -> Settings {
        let mut s = Settings::default();
        self.io().apply(&mut s);
        match self {
            Command::Teff(a) => {
                s.beta = a.beta;
                s.velocities = a.velocities.clone();
                a.sweep.apply(&mut s);
            }
            Command::Engine(a) => {
                a.qubits.apply(&mut s);
                s.scenarios = a.scenarios.clone();
                s.scenario_velocity = a.scenario_velocity;
                a.sweep.apply(&mut s);
            }
            Command::Optimize(a) => {
                a.qubits.apply(&mut s);
                s.regime = a.regime.clone();
                s.vary = a.vary.clone();
                a.sweep.apply(&mut s);
            }
            Command::Fcs(a) => a.qubits.apply(&mut s),
        }
        s
    }

    /// File settings overlaid with flags.
    pub fn settings(&self) -> CliResult<Settings> {
        let file = match &self.io().config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(file.overlay(self.flag_settings()))
    }

    /// The rendered table for `settings`.
    pub fn table(&self, settings: &Settings) -> CliResult<Vec<u8>> {
        let format = settings.format()?;
        fn table<R: Row>(rows: CliResult<Vec<R>>, format: config::Format) -> CliResult<Vec<u8>> {
            render(&rows?, format)
        }
        match self {
            Command::Teff(_) => table(teff::compute(settings), format),
            Command::Engine(_) => table(engine::compute(settings), format),
            Command::Optimize(_) => table(optimize::compute(settings), format),
            Command::Fcs(_) => table(fcs::compute(settings), format),
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let settings = cli.command.settings()?;
    let bytes = cli.command.table(&settings)?;
    emit(&bytes, settings.out.as_deref())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("relengine: {e}");
            e.exit_code()
        }
    }
}
