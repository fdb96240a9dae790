//! `unmask`: curves, schedules, simulation and checks for discrete
//! distributions given as JSON specs.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or spec error,
//! 3 an enumeration guard was hit.

mod commands;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "unmask", version, about = "Information curves and parallel unmasking schedules")]
struct Cli {
    /// Seed for every random choice (Monte Carlo curves, partitions, draws).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    /// Exact when enumerable, Monte Carlo otherwise.
    Auto,
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// Levels `2^i ≥ ε`.
    Power,
    /// Levels `2^i` with `i ≥ ε`.
    Exponent,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Distribution spec (JSON).
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Subsets per level for `--method mc`.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ScheduleArgs {
    /// Schedule JSON: `{"steps":[..]}`, or a plan/sweep report.
    #[arg(long, conflicts_with = "steps")]
    pub schedule: Option<PathBuf>,
    /// Step sizes, e.g. `2,3`.
    #[arg(long, value_delimiter = ',')]
    pub steps: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Information curve `Z_j` and entropy curve `H_j`.
    Curve(CurveArgs),
    /// TC, DTC and `Z_n`, from the curve and directly.
    Summary(CurveArgs),
    /// Plan a schedule from a curve or from TC/DTC estimates.
    Plan(PlanArgs),
    /// Expected KL of the random-partition sampler for a schedule.
    Simulate(SimulateArgs),
    /// Draw sequences from the parallel sampler.
    Sample(SampleArgs),
    /// Run the identity battery on a distribution.
    Verify(VerifyArgs),
    /// Sweep TC/DTC estimates over a power-of-two grid.
    Sweep(SweepArgs),
    /// Step-fit experiment on the hard curve family.
    Hardcurve(HardcurveArgs),
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    /// Curve file written by `curve` (CSV or JSON).
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Number of rounds for the optimal plan (needs `--curve`).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub tc_hat: Option<f64>,
    #[arg(long)]
    pub dtc_hat: Option<f64>,
    /// Use equal blocks after a unit prefix (needs `--dtc-hat`).
    #[arg(long)]
    pub austin: bool,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub dist: PathBuf,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long, value_enum, default_value_t = SimMethod::Auto)]
    pub method: SimMethod,
    /// Partitions drawn by the Monte Carlo estimate.
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    /// Also draw this many sequences.
    #[arg(long)]
    pub samples: Option<usize>,
    /// File for the drawn sequences (one per line); embedded in the report otherwise.
    #[arg(long, requires = "samples")]
    pub samples_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub dist: PathBuf,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Fixed blocks of 0-based positions, e.g. `0,1;2,3,4`.
    #[arg(long, conflicts_with_all = ["schedule", "steps"])]
    pub blocks: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub draws: usize,
    /// Smooth every oracle row towards uniform by this weight.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Oracle smoothing used by the decoupling check.
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = Grid::Power)]
    pub grid: Grid,
}

#[derive(Args, Debug)]
pub struct HardcurveArgs {
    /// Comma-separated values of n.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub n_grid: Vec<usize>,
    /// A number, or `inverse-log` for ε = 1/ln n.
    #[arg(long, default_value = "inverse-log")]
    pub eps: String,
    #[arg(long, default_value_t = 0.05)]
    pub c: f64,
}

/// A bad flag combination (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "usage error: {}", self.0)
    }
}

impl std::error::Error for Usage {}

/// What a command produced: text for the output sink and its exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

pub struct Ctx {
    pub seed: u64,
    pub format: Option<Format>,
}

impl Ctx {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<unmask_core::Error>() {
        Some(e) if e.is_infeasible() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { seed: cli.seed, format: cli.format };
    let result = match &cli.command {
        Command::Curve(a) => commands::curve(&ctx, a),
        Command::Summary(a) => commands::summary(&ctx, a),
        Command::Plan(a) => commands::plan(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Sample(a) => commands::sample(&ctx, a),
        Command::Verify(a) => verify::run(&ctx, a),
        Command::Sweep(a) => commands::sweep(&ctx, a),
        Command::Hardcurve(a) => commands::hardcurve(&ctx, a),
    };
    let outcome = result.and_then(|o| io::emit(cli.out.as_deref(), &o.text).map(|_| o.code));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
