use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod synth;

#[derive(Parser)]
#[command(name = "clcst", version, about = "Clifford-valued linear canonical Stockwell transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a test signal to a grid file.
    Synthesize(SynthArgs),
    /// Analyse a grid file into a volume file plus a JSON report.
    Transform(TransformArgs),
    /// Run property suites; exit code 1 if any check fails.
    Verify(VerifyArgs),
    /// Rebuild a signal from a volume file.
    Reconstruct(ReconstructArgs),
    /// Write one analysis kernel to a grid file, optionally with a kernel value.
    KernelDump(KernelArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignalKind {
    Gaussian,
    GaussianMixture,
    Chirp,
    Example1,
}

#[derive(Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    kind: SignalKind,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Half width of the lattice; defaults per dimension.
    #[arg(long = "L")]
    half_width: Option<f64>,
    /// Samples per axis; defaults per dimension.
    #[arg(long = "N")]
    samples: Option<usize>,
    /// Gaussian width, or chirp envelope width.
    #[arg(long)]
    sigma: Option<f64>,
    /// Chirp rate r in e^{I r|x|²}.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    #[arg(short, long)]
    output: PathBuf,
}

/// Flags mirroring the run configuration; `--config` replaces all of them.
#[derive(Args, Clone)]
pub struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "A", allow_hyphen_values = true)]
    m_a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    m_b: Option<f64>,
    /// Defaults to (AD − 1)/B.
    #[arg(long = "C", allow_hyphen_values = true)]
    m_c: Option<f64>,
    #[arg(long = "D", allow_hyphen_values = true)]
    m_d: Option<f64>,
    #[arg(long, value_enum)]
    window: Option<WindowArg>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Window normalization; unit integral for Gaussians and raw for DOG by default.
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
    /// u = ±{1…count}·Δw per axis.
    #[arg(long)]
    u_count: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    path: Option<PathArg>,
    /// Refuse windows without unit integral.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Gaussian,
    Dog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Raw,
    UnitIntegral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Direct,
    ThreeStep,
    Spectral,
}

#[derive(Args)]
pub struct TransformArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Volume file; overrides the configured output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV of one (u, θ) slice.
    #[arg(long)]
    spectrogram: Option<PathBuf>,
    /// Slice for the spectrogram as `u_index,theta_index`.
    #[arg(long, value_parser = parse_slice, default_value = "0,0")]
    slice: (usize, usize),
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Print the JSON results instead of one line per check.
    #[arg(long)]
    json: bool,
    /// Also write the JSON results here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Resolution of identity with the band-mean admissibility constant.
    Resolution,
    /// b-sum per frequency bin; needs u on the frequency lattice.
    Marginal,
}

#[derive(Args)]
pub struct ReconstructArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "resolution")]
    method: Method,
    #[arg(short, long)]
    output: PathBuf,
    /// Original signal; the relative L² error is reported.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
pub struct KernelArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Vec<f64>,
    #[arg(long = "at-theta", default_value_t = 0.0, allow_hyphen_values = true)]
    at_theta: f64,
    /// Second point (b', u', θ') for the reproducing kernel value.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b2: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u2: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<f64>,
    #[arg(short, long)]
    output: PathBuf,
}

fn parse_slice(s: &str) -> Result<(usize, usize), String> {
    let (u, t) = s.split_once(',').ok_or("expected u_index,theta_index")?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(u)?, p(t)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synthesize(a) => synth::run(&a).map(|_| true),
        Command::Transform(a) => commands::transform(&a).map(|_| true),
        Command::Verify(a) => commands::verify(&a),
        Command::Reconstruct(a) => commands::reconstruct(&a).map(|_| true),
        Command::KernelDump(a) => commands::kernel_dump(&a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
