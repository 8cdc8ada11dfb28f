mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "lidstone", version, about = "Multivariate Lidstone interpolation toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Seed for randomized sampling.
    #[arg(long, env = "LIDSTONE_SEED", default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a basis polynomial Λ_{t,i} at the canonical points.
    Basis(BasisArgs),
    /// Reconstruct a polynomial from index-set data.
    Reconstruct(ReconstructArgs),
    /// Check that derivative data vanish or are integers.
    Verify(VerifyArgs),
    /// Growth diagnostics and the threshold pipeline.
    Growth(GrowthArgs),
    /// Truncated Lidstone expansion with residuals.
    Expand(ExpandArgs),
    /// Order threshold beyond which integer derivative data must vanish.
    Threshold(ThresholdArgs),
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    /// Dimension.
    #[arg(short = 'n', long)]
    pub dim: usize,
    /// Multi-index, comma separated.
    #[arg(short = 't', long, value_delimiter = ',', required = true)]
    pub t: Vec<u32>,
    /// Point index 0..=n.
    #[arg(short = 'i', long)]
    pub i: usize,
    /// Largest degree bound to try [default: 2‖t‖ + 4].
    #[arg(long)]
    pub degree_cap: Option<u32>,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Data set JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Total degree bound [default: largest data order + n + 1].
    #[arg(long)]
    pub degree_bound: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// Expression text, e.g. "sin(pi*x1)".
    #[arg(long, conflicts_with_all = ["expr_file", "example"])]
    pub expr: Option<String>,
    /// File holding the expression text.
    #[arg(long, conflicts_with = "example")]
    pub expr_file: Option<PathBuf>,
    /// Built-in example family 1, 2 or 3.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub example: Option<u8>,
    /// Dimension.
    #[arg(short = 'n', long)]
    pub dim: usize,
    /// Example parameter a, comma separated rationals [default: 0,…,0].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<String>>,
    /// Example parameter b, comma separated rationals [default: 1,…,1].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<String>>,
    /// Example weight g_i as a polynomial in x1, x2, …; repeat once per i.
    #[arg(long)]
    pub g: Vec<String>,
    /// Frame JSON file {"points": [[…], …]} [default: canonical points, or
    /// the example's own points].
    #[arg(long)]
    pub frame: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PredicateArg {
    Zero,
    Integer,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Largest derivative order ‖t‖ checked.
    #[arg(long, default_value_t = 8)]
    pub max_norm: u32,
    #[arg(long, value_enum, default_value_t = PredicateArg::Zero)]
    pub predicate: PredicateArg,
    /// Numeric tolerance, scaled by the magnitude of each value.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Check every pair with even ‖t‖, not only index-set pairs.
    #[arg(long)]
    pub all_even: bool,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 200.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 40)]
    pub r_count: usize,
    /// Torus samples per variable.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub radii: RadiusArgs,
    /// Slack used when the growth condition does not provide one.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Truncation order T.
    #[arg(short = 'T', long)]
    pub truncation: u32,
    /// Residual grid points per axis on [0,1]^n.
    #[arg(long, default_value_t = 21)]
    pub residual_grid: usize,
    /// Random residual points in the unit polydisc.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Radius A ≥ 0.
    #[arg(long = "a", short = 'A')]
    pub a: f64,
    /// Slack η in (0, 1).
    #[arg(long)]
    pub eta: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Basis(args) => commands::basis(args),
        Command::Reconstruct(args) => commands::reconstruct(args),
        Command::Verify(args) => commands::verify(args),
        Command::Growth(args) => commands::growth(args),
        Command::Expand(args) => commands::expand(args, cli.seed),
        Command::Threshold(args) => commands::threshold(args),
    };
    let result = outcome.and_then(|out| {
        let text = match cli.format {
            Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
            Format::Table => out.table.clone(),
        };
        match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
        Ok(out.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
