mod commands;
mod error;
mod json;
mod manifest;
mod plot;
mod schema;

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;
use serde::Serialize;

use crate::error::{CliError, EXIT_INVALID};

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "debranges", version, about = "Spectral-data laboratory for de Branges spaces")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Input JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Directory receiving every output file [default: .]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Residual tolerance for certificates and identities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Number of leading nodes to keep; for `defect`, the coefficient truncation K.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Common {
    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Subcommand, Debug, Clone, Serialize)]
pub enum Command {
    /// Generate spectral data on a lacunary or power grid.
    Gen(GenArgs),
    /// Check any emitted JSON file against its schema and invariants.
    Validate,
    /// Run the strong-basis classifier.
    Classify,
    /// Construct a certificate, a biorthogonal system or the infinite-defect seed.
    Forge(ForgeArgs),
    /// Re-check a certificate from file.
    Verify,
    /// Numerical defect of the biorthogonal system of a given defect.
    Defect(DefectArgs),
    /// Rotation, weight and norm-comparison tests.
    Fock(FockArgs),
    /// CSV traces and static SVG renderings of a report.
    Plot,
    /// Re-run the command recorded in a manifest.
    Replay,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lacunary,
    Power,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Lacunary ratio `q > 1`.
    #[arg(long, default_value_t = 2.0)]
    pub ratio: f64,
    /// First lacunary node [default: the ratio]
    #[arg(long)]
    pub first: Option<f64>,
    /// Power exponent: `t_n = n^rho`.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 16)]
    pub count: usize,
    /// Mass rule: const:C, prop-t, t2-over:P0,P1,.., pow:E or list:M1,M2,..
    #[arg(long, default_value = "const:1")]
    pub mass: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ForgeCase {
    Ii,
    Iii,
    Iv,
    Bior,
    Seed,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ForgeArgs {
    #[arg(long = "case", value_enum)]
    pub case: ForgeCase,
    /// Number of blocks for the greedy searches.
    #[arg(long, default_value_t = 3)]
    pub blocks: usize,
    /// Explicit left nodes of the blocks (cases ii and iii).
    #[arg(long, value_delimiter = ',')]
    pub lefts: Option<Vec<usize>>,
    /// Anchor node of case iii, required with --lefts.
    #[arg(long)]
    pub anchor: Option<usize>,
    /// Contraction target of the block system.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Defect N of the biorthogonal construction.
    #[arg(long, default_value_t = 1)]
    pub defect: usize,
    /// Zeros of D for the seed, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d_zeros: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DefectArgs {
    #[arg(long, default_value_t = 1)]
    pub defect: usize,
    /// Singular values below rank_tol·σ_max count toward the defect.
    #[arg(long, default_value_t = debranges::defect::DEFECT_TOL)]
    pub rank_tol: f64,
    /// Real points whose reproducing kernels join the system.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub kernels: Vec<f64>,
    /// Also write the Gram matrix as CSV.
    #[arg(long)]
    pub dump_matrix: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FockTest {
    Rotation,
    Weight,
    Compare,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FockArgs {
    #[arg(long, value_enum)]
    pub test: FockTest,
    #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
    pub theta: f64,
    /// Relative band half-width [default: min(0.1, half the largest disjoint width)]
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

fn init_logging() {
    let level = match std::env::var("DEBRANGES_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        _ => LevelFilter::Info,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let code = match Cli::try_parse_from(std::iter::once("debranges".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => commands::execute(cli, argv),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            0
        }
        Err(e) => {
            let err = CliError::invalid("UsageError", e.render().to_string().trim().to_string());
            commands::report_error(&err);
            EXIT_INVALID
        }
    };
    ExitCode::from(code as u8)
}
