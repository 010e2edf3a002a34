//! losmimo: capacity statistics and outage probability for pure
//! line-of-sight MIMO satellite channels with uniform linear receive
//! arrays. Closed-form Bessel-series moments, a Gaussian outage
//! approximation, and the Monte Carlo machinery that validates both.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Failure classification for exit codes: usage 1, failed checks 2,
/// runtime faults 3 (0 is success).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Check(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<losmimo::Error> for CliError {
    fn from(e: losmimo::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o failure: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "losmimo",
    version,
    about = "Line-of-sight MIMO capacity statistics and outage probability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form trace moments and row statistics as JSON.
    Moments(CommonArgs),
    /// Outage probability curves as CSV.
    Outage(OutageArgs),
    /// Outage curves swept over array sizes and SNRs, as long-format CSV.
    Sweep(SweepArgs),
    /// Raw Monte Carlo capacity samples as CSV.
    CapacityMc(CommonArgs),
    /// Row-statistic machinery, analytic against simulated, as JSON.
    Cf(CommonArgs),
    /// Run the self-check suite; exit 0 only if every check passes.
    Verify(CommonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Y,
    Z,
}

impl From<AxisArg> for losmimo::Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Y => losmimo::Axis::Y,
            AxisArg::Z => losmimo::Axis::Z,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Gaussian approximation from Taylor trace moments (small SNR).
    GaussianAnalytic,
    /// Gaussian approximation from simulated mean and variance.
    GaussianMc,
    /// Empirical distribution of the capacity samples.
    Empirical,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Number of transmitters (satellites).
    #[arg(long)]
    pub ntx: Option<usize>,
    /// Number of receive array elements.
    #[arg(long)]
    pub nrx: Option<usize>,
    /// Element spacing in phase units: kd = 2 pi d / lambda (default pi).
    #[arg(long)]
    pub kd: Option<f64>,
    /// Receive array axis (default y).
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    /// Signal-to-noise ratio in dB (default 10).
    #[arg(long)]
    pub snr_db: Option<f64>,
    /// Monte Carlo trials (default 100000).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed for the per-trial RNG split (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; never changes results (default 1).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output path (default depends on the command).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file supplying defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct OutageArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lowest threshold (default: 0.05% capacity quantile).
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Highest threshold (default: 99.95% capacity quantile).
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of grid points.
    #[arg(long, default_value_t = 101)]
    pub r_steps: usize,
    /// Curve methods to emit.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [MethodArg::GaussianMc, MethodArg::Empirical]
    )]
    pub methods: Vec<MethodArg>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// SNR values in dB (default 0,10).
    #[arg(long, value_delimiter = ',')]
    pub snr_list: Vec<f64>,
    /// Array size pairs like 4x4,8x8 (default: the --ntx/--nrx pair).
    #[arg(long, value_delimiter = ',')]
    pub pairs: Vec<String>,
    /// Lowest threshold (default: per-cell 0.05% quantile).
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Highest threshold (default: per-cell 99.95% quantile).
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of grid points per cell.
    #[arg(long, default_value_t = 101)]
    pub r_steps: usize,
    /// Curve methods to emit.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [MethodArg::GaussianMc, MethodArg::Empirical]
    )]
    pub methods: Vec<MethodArg>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Moments(args) => commands::moments(&args),
        Command::Outage(args) => commands::outage(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::CapacityMc(args) => commands::capacity_mc(&args),
        Command::Cf(args) => commands::cf(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
