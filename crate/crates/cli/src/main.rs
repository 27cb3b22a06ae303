mod commands;
mod fnspec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Lorentz norms, dyadic blocks, mixed moduli of smoothness and
/// angle approximation for trigonometric polynomials on the torus.
///
/// Functions are given inline (--fn) or as JSON (--fn-file). Inline forms:
/// cos:3, sin:2, const:1, zero, zero:m=2, prod(cos:3,cos:3), sum(cos:1,sin:4),
/// lacunary:rho=1,smax=5[,m=2], random:n=8,decay=1,seed=3[,m=2].
///
/// Exit codes: 0 ok, 2 configuration error, 3 numeric failure, 4 failed verdict.
#[derive(Debug, Parser)]
#[command(name = "mixsmooth", version, max_term_width = 100)]
pub struct Cli {
    /// Worker threads; 0 uses every available core
    #[arg(long, global = true, env = "MIXSMOOTH_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lorentz norm, block sequence norm or modulus norm of one function
    Norm(NormArgs),
    /// Per-block norms ‖δ_s(f)‖_{p,τ} as CSV
    Blocks(BlocksArgs),
    /// Mixed modulus of smoothness on the dyadic t-grid as CSV
    Modulus(ModulusArgs),
    /// Angle surrogate and kernel residual over a cutoff lattice as CSV
    Angle(AngleArgs),
    /// Plot-ready one-parameter sweeps as CSV
    Sweep(SweepArgs),
    /// Run ratio checks on a generated corpus and write reports
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FnInput {
    /// Inline function spec
    #[arg(long = "fn", value_name = "SPEC", required_unless_present = "fn_file", conflicts_with = "fn_file")]
    pub spec: Option<String>,
    /// JSON file {dim, degree, entries: [[[k..], re, im], ..]}
    #[arg(long, value_name = "PATH")]
    pub fn_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LorentzArgs {
    /// Lorentz exponent p, 1 < p < ∞
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Lorentz exponent τ, 1 ≤ τ < ∞
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    /// Sample grid per axis, one value or one per axis [default: automatic alias-free grid]
    #[arg(long, value_delimiter = ',', value_name = "N[,N..]")]
    pub grid: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    /// ‖f‖_{p,τ}
    Lorentz,
    /// Block sequence norm ‖f‖_{S^{0,b}_{p,τ,θ}B}
    #[value(name = "seqB")]
    SeqB,
    /// ‖f‖_{p,τ} plus the log-modulus seminorm
    #[value(name = "boldB")]
    BoldB,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub input: FnInput,
    #[command(flatten)]
    pub lorentz: LorentzArgs,
    #[arg(long, value_enum, default_value_t = NormKind::Lorentz)]
    pub kind: NormKind,
    /// Outer exponent θ (inf accepted)
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    /// Logarithmic smoothness b, one value or one per axis
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
    pub b: Vec<f64>,
    /// Difference order of the modulus on every axis
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Step lattice points per axis for the modulus sup
    #[arg(long, default_value_t = 17)]
    pub h_grid: usize,
    /// Fixed ν truncation of the seminorm [default: smallest certified]
    #[arg(long)]
    pub nu_max: Option<usize>,
    /// Also write the result as JSON
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[command(flatten)]
    pub input: FnInput,
    #[command(flatten)]
    pub lorentz: LorentzArgs,
    /// CSV destination [default: stdout]
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    #[command(flatten)]
    pub input: FnInput,
    #[command(flatten)]
    pub lorentz: LorentzArgs,
    /// Difference order on every axis
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Largest ν, t_ν = 2^{1-ν} [default: bit length of the degree + 2]
    #[arg(long)]
    pub nu_max: Option<usize>,
    /// Step lattice points per axis
    #[arg(long, default_value_t = 17)]
    pub h_grid: usize,
    /// CSV destination [default: stdout]
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    #[command(flatten)]
    pub input: FnInput,
    #[command(flatten)]
    pub lorentz: LorentzArgs,
    /// Jackson kernel order of the upper bound
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Largest cutoff per axis [default: the degree]
    #[arg(long)]
    pub l_max: Option<usize>,
    /// CSV destination [default: stdout]
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Jackson kernel mass and μ-moment for l in FROM..=TO
    KernelMoment,
    /// ω_k(f, t) at t = T_MAX·i/POINTS, i = 1..=POINTS, same t on every axis
    Modulus,
    /// Angle surrogate and kernel residual for l in FROM..=TO on every axis
    Angle,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Function for modulus and angle sweeps
    #[arg(long = "fn", value_name = "SPEC", conflicts_with = "fn_file")]
    pub spec: Option<String>,
    /// JSON function file for modulus and angle sweeps
    #[arg(long, value_name = "PATH")]
    pub fn_file: Option<PathBuf>,
    /// Lorentz exponent p
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Lorentz exponent τ
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    /// First l
    #[arg(long, default_value_t = 8)]
    pub from: usize,
    /// Last l; an empty range gives a header-only CSV
    #[arg(long, default_value_t = 128)]
    pub to: usize,
    /// Step in l
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Moment exponent μ
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Kernel order or difference order
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Number of t samples of the modulus sweep
    #[arg(long, default_value_t = 32)]
    pub points: usize,
    /// Largest t of the modulus sweep
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub t_max: f64,
    /// Step lattice points per axis of the modulus sweep
    #[arg(long, default_value_t = 17)]
    pub h_grid: usize,
    /// CSV destination [default: stdout]
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check name, or `all`; `verify --list` prints the registry
    #[arg(long, default_value = "all")]
    pub check: String,
    /// Print the registered checks and exit
    #[arg(long)]
    pub list: bool,
    /// Torus dimension
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Corpus seed
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Corpus degree per axis [default: 16 for m = 1, 2; 4 for m = 3]
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Corpus families
    #[arg(long, value_delimiter = ',', default_value = "single_block,lacunary,random,tensor")]
    pub families: Vec<String>,
    /// Difference order on every axis
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Step lattice points per axis [default: 17 for m = 1, 9 otherwise]
    #[arg(long)]
    pub h_grid: Option<usize>,
    /// Skip the doubled-degree stability rerun
    #[arg(long)]
    pub no_probe: bool,
    /// Run on a JSON corpus instead of the generated one (no golden windows)
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Golden windows JSON replacing the built-in set
    #[arg(long, value_name = "PATH")]
    pub golden: Option<PathBuf>,
    /// Merge this run's windows into a golden JSON file
    #[arg(long, value_name = "PATH")]
    pub freeze_golden: Option<PathBuf>,
    /// Report directory
    #[arg(long, default_value = "mixsmooth-reports")]
    pub out: PathBuf,
    /// Report files to write per check
    #[arg(long, value_enum, default_value_t = ReportFormat::Both)]
    pub format: ReportFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
