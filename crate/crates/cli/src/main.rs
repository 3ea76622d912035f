mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "maxmeasure", version, about = "Maxitive measures on finite spaces")]
pub struct Cli {
    /// Comparison tolerance, relative above 1.
    #[arg(long, global = true, default_value_t = maxmeasure::ext::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Model file whose named objects may be used as arguments.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Skip measure validation on load.
    #[arg(long, global = true)]
    pub no_validate: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpArg {
    Times,
    Min,
    Plus,
    Max,
}

impl OpArg {
    pub fn name(self) -> &'static str {
        match self {
            OpArg::Times => "times",
            OpArg::Min => "min",
            OpArg::Plus => "plus",
            OpArg::Max => "max",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Residual,
    Bcj,
    Associated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Poisson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Slow {
    Const,
    Log,
}

#[derive(Subcommand)]
pub enum Command {
    /// Classify a set function.
    Check(CheckArgs),
    /// Idempotent integral of a function.
    Integrate(IntegrateArgs),
    /// Essential supremum of a function.
    Esssup(EsssupArgs),
    /// Density of one measure with respect to another.
    Density(DensityArgs),
    /// Decomposition of a maxitive measure into atoms.
    Decompose(MeasureArg),
    /// Disjoint variation of a maxitive measure.
    Variation(MeasureArg),
    /// Conditional expectation on a possibility space.
    Condition(ConditionArgs),
    /// Residual of a pair under an operation.
    Residual(ResidualArgs),
    /// Monte Carlo sampling of a random sup-measure.
    Simulate(SimulateArgs),
    /// Run the invariant suite.
    Suite(SuiteArgs),
}

#[derive(Args)]
pub struct MeasureArg {
    #[arg(long)]
    pub measure: String,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub measure: String,
    /// Also report ⊙-finiteness of a maxitive measure.
    #[arg(long, value_enum)]
    pub op: Option<OpArg>,
    /// Also test Choquet alternation up to this order.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Args)]
pub struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "times")]
    pub op: OpArg,
    #[arg(long)]
    pub measure: String,
    #[arg(long = "fn")]
    pub function: String,
    /// Domain as `+`-joined ground labels; defaults to the whole space.
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Args)]
pub struct EsssupArgs {
    #[arg(long)]
    pub measure: String,
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "times")]
    pub op: OpArg,
    #[arg(long)]
    pub nu: String,
    #[arg(long)]
    pub tau: String,
    #[arg(long, value_enum, default_value = "residual")]
    pub method: Method,
}

#[derive(Args)]
pub struct ConditionArgs {
    #[arg(long, value_enum, default_value = "times")]
    pub op: OpArg,
    /// Possibility measure, or a probability with `--lp`.
    #[arg(long)]
    pub pi: String,
    #[arg(long)]
    pub x: String,
    /// Sub-algebra as `|`-separated blocks of `+`-joined labels.
    #[arg(long)]
    pub sub: String,
    /// Run the property suite, with this second variable.
    #[arg(long)]
    pub x2: Option<String>,
    #[arg(long, default_value = "2")]
    pub lambda: String,
    /// Treat `--pi` as a probability and report the Lᵖ conditional limit.
    #[arg(long)]
    pub lp: bool,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 5.0, 10.0, 50.0, 200.0])]
    pub ps: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ResidualArgs {
    #[arg(long, value_enum)]
    pub op: OpArg,
    /// Numerator, a number or `inf`.
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub s: String,
    /// Include the axiom report on the default grid.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Control measure, as an additive measure.
    #[arg(long)]
    pub m: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// First replicate stream.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long, default_value_t = maxmeasure::supmeasure::DEFAULT_EPSILON)]
    pub eps: f64,
    /// Set whose maximum is tested; defaults to the whole space.
    #[arg(long)]
    pub set: Option<String>,
    /// Integrand for the extremal integral.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Write per-replicate atom maxima to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Run the regularly-varying tail check on this grid instead.
    #[arg(long, value_delimiter = ',')]
    pub tail_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "const")]
    pub slow: Slow,
}

#[derive(Args)]
pub struct SuiteArgs {
    /// Run every invariant.
    #[arg(long)]
    pub all: bool,
    /// List the manifest without running it.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Suite ids or module names.
    pub filters: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        eprintln!("error: --tolerance must be positive");
        return ExitCode::from(2);
    }
    maxmeasure::ext::set_tolerance(cli.tolerance);
    let outcome = commands::dispatch(&cli);
    let mut out = std::io::stdout().lock();
    match outcome {
        Ok(report) => {
            let _ = writeln!(out, "{}", commands::render(&report.value));
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            let body = serde_json::json!({"error": e.code(), "message": e.to_string()});
            let _ = writeln!(out, "{}", commands::render(&body));
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
