use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "herzlab", version, about = "Herz-type space norms, embedding probes and φ-transform experiments")]
pub struct Cli {
    /// Seed for every random battery.
    #[arg(long, global = true, env = "HERZLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Upper bound on worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Report format; `counterexample` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate one quasi-norm of a coefficient field or a sampled function.
    Norm(NormArgs),
    /// Embedding hypotheses, the necessity family and worst-ratio search.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// φ-transform analysis and synthesis on a sampled function.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Geometric smoothing sums of a non-negative sequence.
    Hardy(HardyArgs),
    /// Write a sampled test function in the grid container format.
    Sample(SampleArgs),
    /// Re-run the command recorded in a report and compare the output byte for byte.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// dyadic sequence norm of a JSONL coefficient field
    Seq,
    /// Herz norm of a sampled function
    Herz,
    /// Herz-type Triebel-Lizorkin norm through the filter bank
    Ktl,
    /// the same norm through Gaussian local means
    LocalMean,
    /// power-weighted Triebel-Lizorkin norm, delegated and direct
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub space: Space,

    /// JSONL coefficient field for `seq`, grid container otherwise.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<String>,

    /// Outer exponent; `inf` is accepted.
    #[arg(long)]
    pub p: String,

    /// Inner exponent.
    #[arg(long)]
    pub q: Option<String>,

    #[arg(long, allow_negative_numbers = true, default_value = "0")]
    pub s: String,

    #[arg(long, default_value = "2")]
    pub beta: String,

    /// Power weight exponent, `weighted` only.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<String>,

    /// Laplacian power of the local-mean kernel.
    #[arg(long, default_value_t = 1)]
    pub laplacian_power: u32,

    #[command(flatten)]
    pub window: WindowArgs,
}

/// Overrides for the truncation window; unset fields are derived from the input.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct WindowArgs {
    #[arg(long)]
    pub v_max: Option<u32>,
    #[arg(long)]
    pub m_bound: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k_min: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<i32>,
    #[arg(long)]
    pub tail_tol: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedCmd {
    /// Check a parameter set against the embedding hypotheses.
    Validate(CaseArgs),
    /// Norms of the necessity family λ^N for a list of N.
    Counterexample(CounterexampleArgs),
    /// Target-to-source norm ratio of one coefficient field.
    Ratio(RatioArgs),
    /// Multi-start hill climbing for the worst norm ratio.
    Search(SearchArgs),
    /// The corollary parameter sets, validated.
    Presets,
}

/// An embedding case from a preset, a JSON file or individual flags.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct CaseArgs {
    /// Index into `embed presets`.
    #[arg(long, conflicts_with = "case")]
    pub preset: Option<usize>,

    /// JSON file holding the raw parameters.
    #[arg(long)]
    pub case: Option<PathBuf>,

    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha1: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub s1: Option<String>,
    #[arg(long, default_value = "2")]
    pub beta: String,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha2: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// Defaults to the value that balances the other parameters.
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CounterexampleArgs {
    #[command(flatten)]
    pub case: CaseArgs,

    #[arg(long = "N-list", value_delimiter = ',', default_value = "4,8,16,32")]
    pub n_list: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RatioArgs {
    #[command(flatten)]
    pub case: CaseArgs,

    /// JSONL coefficient field.
    #[arg(long)]
    pub input: PathBuf,

    #[command(flatten)]
    pub window: WindowArgs,

    /// Evaluate the quotient even when the case fails the hypotheses.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub case: CaseArgs,

    #[command(flatten)]
    pub window: WindowArgs,

    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub perturb_scale: Option<String>,

    /// Start only from the necessity family, one restart per level.
    #[arg(long)]
    pub counterexample_seeded: bool,

    /// Search cases that fail the hypotheses.
    #[arg(long)]
    pub force: bool,

    /// Include the running maximum after every evaluation.
    #[arg(long)]
    pub full_trace: bool,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformCmd {
    /// Relative L² error of synthesis after analysis.
    Roundtrip(TransformArgs),
    /// Write the φ-transform coefficients as a JSONL field.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TransformArgs {
    /// Grid container.
    #[arg(long)]
    pub input: PathBuf,

    /// Finest level; defaults to the deepest the grid supports.
    #[arg(long)]
    pub top: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub transform: TransformArgs,

    /// Destination of the coefficient field.
    #[arg(long)]
    pub coeffs: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HardyArgs {
    /// One number per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub q: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// e^{-|x−c|²/(2w²)}
    Gaussian,
    /// indicator of the box [lo, hi)^n
    Indicator,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// `2^level` cells per axis.
    #[arg(long)]
    pub level: u32,
    #[arg(long)]
    pub half_extent: String,
    #[arg(long, allow_negative_numbers = true, default_value = "0")]
    pub center: String,
    #[arg(long, default_value = "1")]
    pub width: String,
    #[arg(long, allow_negative_numbers = true, default_value = "0")]
    pub lo: String,
    #[arg(long, allow_negative_numbers = true, default_value = "1")]
    pub hi: String,
    /// Destination of the grid container.
    #[arg(long)]
    pub grid: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// A report written by an earlier run.
    #[arg(long)]
    pub report: PathBuf,
}
