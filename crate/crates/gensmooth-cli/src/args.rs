//! Command-line argument definitions.
//!
//! Regularity functions are given either as expressions in the mini
//! language (`t^2*log(t)^-1`) or as `csv:<file>` with two columns
//! `(t, value)`. Grid functions are `csv:<file>` with columns
//! `(ix[, iy], re, im)` or one of the generators `gaussian(center, width)`,
//! `mode(k1[, k2])`, `randn(seed)`.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "gensmooth",
    version,
    about = "Function-space norms, interpolation, and Fourier multipliers on the torus",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Regularity functions: indices, membership, decompositions
    #[command(subcommand)]
    Ro(RoCommand),
    /// Frequency-window partitions
    #[command(subcommand)]
    Lp(LpCommand),
    /// Space norms of grid functions
    Norm(NormArgs),
    /// Sequence-space interpolation
    #[command(subcommand)]
    Interp(InterpCommand),
    /// Fourier multiplier operators
    Elliptic(EllipticArgs),
    /// Execute a config file
    Run(RunArgs),
    /// Derive CSV tables and SVG plots from a JSON report
    Report(ReportArgs),
}

#[derive(Subcommand)]
pub enum RoCommand {
    /// Estimate the growth indices of a regularity function
    Indices(RoIndicesArgs),
    /// Test membership in the admissible class
    Check(RoCheckArgs),
    /// Tabulate a regularity function
    Eval(RoEvalArgs),
    /// Combine two regularity functions with an interpolation weight
    Combine(RoCombineArgs),
    /// Split a space against a Lebesgue anchor
    SplitAnchored(SplitAnchoredArgs),
    /// Split a space against a diagonal endpoint
    SplitDiagonal(SplitDiagonalArgs),
    /// Canonical interpolation parameter attached to a regularity function
    Gamma(RoGammaArgs),
    /// Embedding exponent for given integrability and dimension
    Lambda(RoLambdaArgs),
}

#[derive(Args)]
pub struct RoIndicesArgs {
    /// Regularity function (expression or csv:<file>)
    #[arg(long)]
    pub alpha: String,
    /// Sample t up to 2^this
    #[arg(long, default_value_t = 40.0)]
    pub log2_t_max: f64,
    /// Log-spaced samples per decade of t
    #[arg(long, default_value_t = 64)]
    pub points_per_decade: usize,
    /// Dilations go up to 2^this
    #[arg(long, default_value_t = 10)]
    pub max_log2_lambda: u32,
    /// Also estimate the dilation-function indices
    #[arg(long)]
    pub boyd: bool,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoCheckArgs {
    /// Regularity function (expression or csv:<file>)
    #[arg(long)]
    pub alpha: String,
    /// Largest base point tested
    #[arg(long, default_value_t = 1048576.0)]
    pub t_max: f64,
    /// Largest dilation tested
    #[arg(long, default_value_t = 1024.0)]
    pub lambda_max: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoEvalArgs {
    /// Regularity function (expression or csv:<file>)
    #[arg(long)]
    pub alpha: String,
    /// Smallest argument
    #[arg(long, default_value_t = 1.0)]
    pub from: f64,
    /// Largest argument
    #[arg(long, default_value_t = 1e6)]
    pub to: f64,
    /// Number of log-spaced sample points
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Also write the table as two-column CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoCombineArgs {
    /// First regularity function
    #[arg(long)]
    pub alpha0: String,
    /// Second regularity function
    #[arg(long)]
    pub alpha1: String,
    /// Interpolation weight in (0, 1)
    #[arg(long)]
    pub theta: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("companion").required(true).args(["p1", "q1"])))]
pub struct SplitAnchoredArgs {
    /// Regularity function of the space being split
    #[arg(long)]
    pub alpha: String,
    /// Integrability exponent of the space
    #[arg(long)]
    pub p: f64,
    /// Summability exponent of the space
    #[arg(long)]
    pub q: f64,
    /// Choose the far endpoint's integrability exponent
    #[arg(long)]
    pub p1: Option<f64>,
    /// Choose the far endpoint's summability exponent
    #[arg(long)]
    pub q1: Option<f64>,
    /// Power regularity of the far endpoint
    #[arg(long)]
    pub s1: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct SplitDiagonalArgs {
    /// Regularity function of the space being split
    #[arg(long)]
    pub alpha: String,
    /// Integrability exponent of the space
    #[arg(long)]
    pub p: f64,
    /// Summability exponent of the space
    #[arg(long)]
    pub q: f64,
    /// Diagonal exponent of the far endpoint
    #[arg(long)]
    pub r: f64,
    /// Power regularity of the far endpoint
    #[arg(long)]
    pub s1: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoGammaArgs {
    /// Regularity function whose indices lie strictly inside (s0, s1)
    #[arg(long)]
    pub alpha: String,
    /// Lower order
    #[arg(long)]
    pub s0: f64,
    /// Upper order
    #[arg(long)]
    pub s1: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RoLambdaArgs {
    /// Integrability exponent
    #[arg(long)]
    pub p: f64,
    /// Dimension
    #[arg(long)]
    pub n: u32,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum LpCommand {
    /// Check the structural properties of a window sequence
    Verify(LpVerifyArgs),
}

#[derive(Args)]
pub struct LpVerifyArgs {
    /// Samples per axis (power of two)
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Spatial dimension (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Octaves of overlap between neighboring windows
    #[arg(long, default_value_t = 1)]
    pub seq_n: u32,
    /// Plot the window family to this SVG file
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Sum band norms, then weight
    B,
    /// Weight pointwise, then integrate
    F,
    /// Direct graded multiplier norm
    H,
}

#[derive(Args)]
pub struct NormArgs {
    /// Norm family
    #[arg(long, value_enum, ignore_case = true)]
    pub family: Family,
    /// Regularity function (expression or csv:<file>)
    #[arg(long)]
    pub alpha: String,
    /// Integrability exponent
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Summability exponent across bands
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Samples per axis (power of two)
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Spatial dimension (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Input function (csv:<file> or generator)
    #[arg(long)]
    pub input: String,
    /// Octaves of overlap between neighboring windows
    #[arg(long, default_value_t = 1)]
    pub seq_n: u32,
    /// Include per-band weights and norms in the report
    #[arg(long)]
    pub profile: bool,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum InterpCommand {
    /// Compare interpolated and directly graded sequence norms
    Verify(InterpVerifyArgs),
    /// Tabulate the splitting functional across the parameter range
    Kprofile(InterpKprofileArgs),
    /// Check operator bounds for a diagonal multiplier between couples
    Opnorm(InterpOpnormArgs),
}

#[derive(Args)]
pub struct InterpVerifyArgs {
    /// Regularity of the first endpoint
    #[arg(long)]
    pub alpha0: String,
    /// Regularity of the second endpoint
    #[arg(long)]
    pub alpha1: String,
    /// Parameter function (expression, e.g. t^0.5)
    #[arg(long)]
    pub gamma: String,
    /// Summability exponent
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Coordinates in the couple
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// Random sequences to test
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plot splitting-functional profiles to this SVG file
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Plot the ratio histogram to this SVG file
    #[arg(long)]
    pub hist: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct InterpKprofileArgs {
    /// Regularity of the first endpoint
    #[arg(long)]
    pub alpha0: String,
    /// Regularity of the second endpoint
    #[arg(long)]
    pub alpha1: String,
    /// Exponent of the first endpoint
    #[arg(long, default_value_t = 1.0)]
    pub q0: f64,
    /// Exponent of the second endpoint
    #[arg(long, default_value_t = 1.0)]
    pub q1: f64,
    /// Coordinates in the couple
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// Tabulate at t = 2^k for |k| up to this
    #[arg(long, default_value_t = 10)]
    pub half_range: u32,
    /// Sequence to split: comma list, csv:<file>, or randn:<seed>
    #[arg(long, default_value = "randn:0")]
    pub omega: String,
    /// Plot the profile to this SVG file
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also write the table as two-column CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["theta", "gamma"])))]
pub struct InterpOpnormArgs {
    /// Diagonal multipliers: comma list or csv:<file>
    #[arg(long)]
    pub multipliers: String,
    /// Source couple, regularity of the first endpoint
    #[arg(long)]
    pub alpha0: String,
    /// Source couple, regularity of the second endpoint
    #[arg(long)]
    pub alpha1: String,
    /// Destination couple regularities (default: same as source)
    #[arg(long)]
    pub dst_alpha0: Option<String>,
    /// Destination couple regularities (default: same as source)
    #[arg(long)]
    pub dst_alpha1: Option<String>,
    /// Exponent of the first endpoints
    #[arg(long, default_value_t = 1.0)]
    pub q0: f64,
    /// Exponent of the second endpoints
    #[arg(long, default_value_t = 1.0)]
    pub q1: f64,
    /// Check the power-weight bound at this interpolation weight
    #[arg(long)]
    pub theta: Option<f64>,
    /// Check the general-parameter bound with this parameter function
    #[arg(long)]
    pub gamma: Option<String>,
    /// Summability exponent of the interpolation quasi-norm
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Random sequences tried in the general-parameter check
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct EllipticArgs {
    /// Symbol: laplacian, one-minus-laplacian, jalpha:<expr>, or csv:<file>
    #[arg(long)]
    pub symbol: String,
    /// Samples per axis (power of two)
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Spatial dimension (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Regularity weight for ellipticity and the a-priori comparison
    #[arg(long)]
    pub alpha: Option<String>,
    /// Solve with the given right-hand side
    #[arg(long)]
    pub solve: bool,
    /// Right-hand side (csv:<file> or generator)
    #[arg(long, default_value = "randn(1)")]
    pub rhs: String,
    /// Compare the lifted norm of the solution against the data norm
    #[arg(long, requires = "alpha")]
    pub verify_apriori: bool,
    /// Elliptic order used by the a-priori comparison
    #[arg(long, default_value = "t^2")]
    pub order: String,
    /// Norm family for the a-priori comparison
    #[arg(long, value_enum, ignore_case = true, default_value = "h")]
    pub family: Family,
    /// Integrability exponent
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Summability exponent (window families only)
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Octaves of overlap (window families only)
    #[arg(long, default_value_t = 1)]
    pub seq_n: u32,
    /// Build the truncated inverse and its remainder
    #[arg(long, requires = "cutoff")]
    pub parametrix: bool,
    /// Frequency radius of the parametrix cutoff
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RunArgs {
    /// TOML config file
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    /// JSON report produced by another subcommand
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for the derived CSV and SVG files
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write the JSON summary here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}
