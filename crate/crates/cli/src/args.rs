use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sadic_core::DigitSource;

#[derive(Debug, Parser)]
#[command(name = "sadic", version, about = "Digit frequencies, f_p embeddings and dimensions of s-adic expansions")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a digit stream as normal, quasinormal, particularly or essentially non-normal.
    Classify(ClassifyArgs),
    /// Apply f_p or its inverse and dump digits with their position classes.
    Transform(TransformArgs),
    /// Besicovitch-Eggleston dimension, coverings of S_p and box-counting estimates.
    #[command(subcommand)]
    Dimension(DimensionCommand),
    /// Sample, CDF and entropy dimension of the measure mu_p on S_p.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Lebesgue measure, Hausdorff dimension and Baire category of the four classes.
    Table(TableArgs),
    /// Brute-force the oscillating digit frequency of f_p(x) along its checkpoints.
    Oscillation(OscillationArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(long)]
    pub source: DigitSource,
    #[arg(long, short = 'n', default_value_t = sadic_core::frequency::DEFAULT_DEPTH)]
    pub depth: u64,
    /// Seed for `random` sources without an inline seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Spread threshold below which a frequency counts as converged.
    #[arg(long, default_value = "1/20")]
    pub delta: String,
    /// Tolerance around 1/s for normality.
    #[arg(long, default_value = "1/50")]
    pub epsilon: String,
    /// Growth ratio of the geometric checkpoint schedule, as num/den.
    #[arg(long, default_value = "11/10")]
    pub checkpoint_ratio: String,
    #[arg(long, default_value_t = sadic_core::frequency::DEFAULT_CHECKPOINT_START)]
    pub checkpoint_start: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p')]
    pub p: u64,
    #[arg(long)]
    pub source: DigitSource,
    /// Number of digits to emit.
    #[arg(short = 'n', long = "depth")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Direction::Forward)]
    pub direction: Direction,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum DimensionCommand {
    /// Besicovitch-Eggleston dimension of a frequency vector.
    Be(BeArgs),
    /// Special coverings of S_p and their critical exponent.
    Covering(CoveringArgs),
    /// Entropy dimension of mu_p along m_k.
    Measure(CoveringArgs),
    /// Least-squares box-dimension estimate from the special coverings.
    Estimate(CoveringArgs),
    /// Dimension bound of the union of G_p over p <= pmax.
    GSup(GSupArgs),
}

#[derive(Debug, Args)]
pub struct BeArgs {
    #[arg(long)]
    pub base: u32,
    /// Comma-separated frequencies, rational (1/2) or decimal (0.5).
    #[arg(long)]
    pub nu: String,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p')]
    pub p: u64,
    #[arg(short = 'K', long = "groups", default_value_t = 8)]
    pub k: u64,
}

#[derive(Debug, Args)]
pub struct GSupArgs {
    #[arg(long, default_value_t = 100)]
    pub pmax: u64,
}

#[derive(Debug, Subcommand)]
pub enum MeasureCommand {
    /// Draw digit prefixes from mu_p.
    Sample(SampleArgs),
    /// Bounds on the distribution function of mu_p.
    Cdf(CdfArgs),
    /// Entropy coefficients c_n = H_n / ln s of mu_p.
    Entropy(EntropyArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p')]
    pub p: u64,
    /// Digits per sample.
    #[arg(short = 'n', long = "depth")]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p')]
    pub p: u64,
    /// Comma-separated rational points in [0, 1].
    #[arg(long = "t")]
    pub t: String,
    /// Digits of t to scan.
    #[arg(long, default_value_t = 200)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p')]
    pub p: u64,
    #[arg(short = 'K', long = "groups", default_value_t = 4)]
    pub k: u64,
    /// Emit every n up to m_K instead of only the group boundaries.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub base: u32,
    /// Largest p in the dimension evidence for T_s.
    #[arg(long, default_value_t = 100)]
    pub pmax: u64,
    /// Digits per Monte Carlo stream.
    #[arg(long, short = 'n', default_value_t = 1 << 16)]
    pub depth: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OscillationArgs {
    #[arg(long)]
    pub base: u32,
    #[arg(short = 'p', default_value_t = 1)]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub digit: u8,
    #[arg(long, default_value_t = 10)]
    pub kmin: u64,
    #[arg(short = 'K', long = "kmax", default_value_t = 14)]
    pub kmax: u64,
    #[arg(long, default_value = "champernowne")]
    pub source: DigitSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
