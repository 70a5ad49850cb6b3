use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rauzy_core::Orientation;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "rauzy",
    version,
    about = "Rauzy noise of digit sequences: analysis, generators and bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noise profile of a digit file.
    Analyze(AnalyzeArgs),
    /// Write a generated sequence and its manifest.
    Generate(GenerateArgs),
    /// Hausdorff dimension bound curves.
    Bounds(BoundsArgs),
    /// Check exact beta_ell against brute-force enumeration.
    Oracle(OracleArgs),
    /// Entropy and noise of a k-step Markov measure.
    Measure(MeasureArgs),
    /// Highest-entropy measures under a noise cap.
    Search(SearchArgs),
    /// Count canonical-predictor errors per block of a coded sequence.
    VerifyCodec(VerifyCodecArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Digit file to analyze.
    pub input: PathBuf,
    /// Expected base; the file header must agree.
    #[arg(long)]
    pub base: Option<u32>,
    #[arg(long, default_value_t = 8)]
    pub ell_max: usize,
    /// Comma-separated scored-position counts (default: powers of two from 1024).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    #[arg(long, default_value = "predict-previous")]
    pub orientation: Orientation,
    /// Fraction of the grid, from the top, used for the loe/upe estimates.
    #[arg(long, default_value_t = rauzy_core::predictor::DEFAULT_TAIL_FRACTION)]
    pub tail_fraction: f64,
    /// Distance from the extremes accepted by the classification.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output prefix for `.csv`, `.json` and `.manifest.json` (default: `<input>.profile`).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Bernoulli,
    Markov,
    Champernowne,
    Rational,
    Interleave,
    BlockConcat,
    RauzyCodec,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    pub kind: GenKind,
    #[arg(long, short, default_value_t = 2)]
    pub base: u32,
    /// Number of digits (block-concat: optional truncation).
    #[arg(long, short = 'n')]
    pub length: Option<usize>,
    /// Required by every randomized kind.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Digit file to write; the manifest goes to `<output>.json`.
    #[arg(long, short)]
    pub output: PathBuf,

    /// bernoulli: comma-separated probabilities (decimals or fractions).
    #[arg(long, value_delimiter = ',')]
    pub probs: Option<Vec<String>>,
    /// bernoulli, markov, block-concat: target noise s.
    #[arg(long)]
    pub noise: Option<String>,
    /// markov: measure JSON (base, k, rho, P).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// markov with --noise: order of the searched measure.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// markov with --noise: evaluation budget of the search.
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    /// rational: the value p/q in [0, 1).
    #[arg(long)]
    pub value: Option<String>,
    /// interleave: `evens`, `all`, `empty`, `periodic:<mask>` or
    /// `progressions:<i_max>:<i,j,...>[:residual]`.
    #[arg(long, default_value = "evens")]
    pub set: String,
    /// interleave: source read on the set (`uniform`, `zeros`, `champernowne`,
    /// `rational:p/q` or `file:<path>`).
    #[arg(long, default_value = "uniform")]
    pub x: String,
    /// interleave: source read off the set.
    #[arg(long, default_value = "zeros")]
    pub y: String,
    /// block-concat: number of schedule points a_1..a_J.
    #[arg(long, default_value_t = 6)]
    pub j_max: usize,
    /// block-concat: `zeros`, `first-row` or `file:<path>` (JSON rows of booleans).
    #[arg(long, default_value = "zeros")]
    pub indicator: String,
    /// rauzy-codec: payload digits per block.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// rauzy-codec: gap length (default: smallest admissible).
    #[arg(long)]
    pub ell: Option<usize>,
    /// rauzy-codec: number of blocks.
    #[arg(long, default_value_t = 100)]
    pub blocks: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, short)]
    pub base: u32,
    /// Number of grid intervals; the curves have `grid + 1` points.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Output prefix for `.csv` and `.json`.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also render `<output>.svg`.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, short)]
    pub base: u32,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, default_value_t = 256)]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "predict-previous")]
    pub orientation: Orientation,
    /// Largest number of block functions to enumerate.
    #[arg(long, default_value_t = rauzy_core::predictor::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    /// Measure JSON (base, k, rho, P).
    pub spec: PathBuf,
    /// Logarithm base for entropies: `e`, `2`, `10` or `b` (the digit base).
    #[arg(long, default_value = "e")]
    pub log_base: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, short)]
    pub base: u32,
    /// Noise cap s, as a decimal or a fraction.
    #[arg(long)]
    pub noise: String,
    /// Also search k-step Markov measures of this order.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub budget: usize,
    #[arg(long, default_value = "e")]
    pub log_base: String,
    /// Write the best measure found as JSON.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyCodecArgs {
    /// Coded digit file.
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Blocks to check (default: every complete block).
    #[arg(long)]
    pub blocks: Option<usize>,
}
