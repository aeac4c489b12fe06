//! `gibbsnum`: exact cylinder measures, weak Gibbs diagnostics and
//! golden-ratio numeration from the command line.
//!
//! Every subcommand prints one JSON document on stdout. Exact quantities are
//! printed as rationals (`"3/16"`) or `Q(√5)` literals (`"1/2 + 1/2*sqrt5"`);
//! `--float` adds float renderings. Runs with the same arguments and seed
//! print identical bytes.
//!
//! ```text
//! gibbsnum expand --system parry --x 1/2 --digits 9
//! gibbsnum measure --spec mu4 --word 10
//! gibbsnum gibbs-scan --spec mu3 --r 2 --n-max 30
//! gibbsnum stoch-sim --beta 4 --r 2 --p 1/2,1/2 --samples 1000 --seed 7
//! gibbsnum baser --r 2 --p 1/3,1/3,1/3 --word 0 --mc-samples 10000 --seed 1
//! gibbsnum golden --p 1/2 --target mustar --word 0
//! gibbsnum golden --p 3/5 --code 0201002 --phi-nmax 7
//! gibbsnum golden --p 2/3 --lemma-check --a 1,2,1,3 --alpha 2
//! ```

mod commands;
mod output;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "gibbsnum",
    version,
    about = "Exact cylinder measures, weak Gibbs diagnostics and golden-ratio numeration"
)]
pub struct Cli {
    /// Also print float renderings of exact values.
    #[arg(long, global = true)]
    pub float: bool,
    /// Significant digits for printed floats.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Digits of x in base r, base β (Parry) or base −β.
    Expand(ExpandArgs),
    /// Cylinder masses L·M_{w1}⋯M_{wn}·V of a matrix measure.
    Measure(MeasureArgs),
    /// n-step potentials φ_n along probe sequences.
    GibbsScan(GibbsScanArgs),
    /// Backward products of random 2×2 stochastic matrices.
    StochSim(StochSimArgs),
    /// Matrices attached to a Bernoulli convolution read in base r.
    Baser(BaserArgs),
    /// The golden-ratio Bernoulli convolutions μ and μ⋆.
    Golden(GoldenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SystemArg {
    Parry,
    NegBeta,
    BaseR,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long, value_enum)]
    pub system: SystemArg,
    /// A number in [0, 1), e.g. `1/2` or `-1/2 + 1/2*sqrt5`.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub digits: usize,
    /// Base for `--system base-r`.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SpecKind {
    Mu3,
    Mu4,
    Bernoulli,
    Markov,
    File,
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub spec: SpecKind,
    /// Alphabet size for `mu3`.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// Digit probabilities for `bernoulli`, e.g. `1/3,2/3`.
    #[arg(long)]
    pub p: Option<String>,
    /// Transition matrix for `markov`, rows separated by `;`.
    #[arg(long)]
    pub transition: Option<String>,
    /// Stationary vector for `markov`.
    #[arg(long)]
    pub stationary: Option<String>,
    /// JSON spec file `{"L": [...], "matrices": [[[...]]], "V": [...]}` for `file`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub word: Option<String>,
    /// Dump every cylinder of this length.
    #[arg(long)]
    pub all_depth: Option<usize>,
    /// CSV file for `--all-depth` (columns `word,value`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report the direction conditions and potential continuity (d = 2).
    #[arg(long)]
    pub conditions: bool,
}

#[derive(Args, Debug)]
pub struct GibbsScanArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    /// Number of seeded random probes added to the default set.
    #[arg(long, default_value_t = 4)]
    pub random_probes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit probe words; replaces the default set.
    #[arg(long = "probe")]
    pub probes: Vec<String>,
    /// CSV file with columns `probe,n,phi_n`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StochSimArgs {
    /// β > 1 for the convolution family, e.g. `4` or `golden`.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// JSON family file `{"rows": [["x", "y"], ...], "weights": [...]}`.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Weights of the matrices; uniform by default.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bins for the self-similarity residual.
    #[arg(long, default_value_t = 16)]
    pub bins: usize,
    /// CSV file with columns `sample_value,truncation_bound`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BaserArgs {
    #[arg(long)]
    pub r: u32,
    /// The 2r−1 digit probabilities.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bins for the self-similarity residual of μ_p (needs `--mc-samples`).
    #[arg(long)]
    pub selfsim_bins: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum TargetArg {
    Mu,
    Mustar,
}

#[derive(Args, Debug)]
pub struct GoldenArgs {
    #[arg(long)]
    pub p: String,
    /// Defaults to 1 − p.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, value_enum, default_value = "mu")]
    pub target: TargetArg,
    /// Admissible binary word for the cylinder vector.
    #[arg(long)]
    pub word: Option<String>,
    /// Word over {0, 1, 2} for the potential of the coded measure.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 60)]
    pub depth: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report φ_n for n up to this bound along `--code`.
    #[arg(long)]
    pub phi_nmax: Option<usize>,
    /// CSV file with columns `probe,n,phi_n` for `--phi-nmax`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Check the convergent gap bounds for `--a` and `--alpha`.
    #[arg(long)]
    pub lemma_check: bool,
    #[arg(long)]
    pub a: Option<String>,
    /// Defaults to p/q.
    #[arg(long)]
    pub alpha: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(value) => {
            let mut out = std::io::stdout().lock();
            match serde_json::to_writer_pretty(&mut out, &value)
                .and_then(|()| writeln!(out).map_err(serde_json::Error::io))
            {
                Err(e) if e.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
                Ok(()) => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
