//! Command-line surface: graph documents, reports and commands.

pub mod commands;
pub mod doc;
pub mod repro;
pub mod report;
pub mod syntax;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::folding::FoldError;
use crate::freegroup::FreeGroupError;
use crate::stretch::StretchError;

pub use doc::{graph_to_json, read_graph, GraphDocument};
pub use report::{Format, Report, Table};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::RankMismatch(..) => 3,
            CliError::Budget(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl From<StretchError> for CliError {
    fn from(e: StretchError) -> Self {
        match e {
            StretchError::Budget { .. } | StretchError::PairCap { .. } => CliError::Budget(e.to_string()),
            StretchError::Group(FreeGroupError::RankMismatch { expected, found }) => {
                CliError::RankMismatch(expected, found)
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<FoldError> for CliError {
    fn from(e: FoldError) -> Self {
        match e {
            FoldError::Stretch(s) => s.into(),
            FoldError::TimeOutOfRange { .. } => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "outerspace", version, about = "Exact computations on Culler-Vogtmann Outer Space")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Seed for commands that draw random data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    D,
    #[value(name = "dR")]
    DR,
    #[value(name = "dL")]
    DL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Simultaneous,
    SingleVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproName {
    WiestCoulbois,
    Polygrowth,
    Incompleteness,
    Orbit,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a graph document, printing its canonical form.
    Validate { file: String },
    /// Translation lengths of words.
    Tlength {
        file: String,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Candidate loops with their words and lengths.
    Candidates { file: String },
    /// Stretching factors and the three distances.
    Distance {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = MetricArg::D)]
        metric: MetricArg,
        #[arg(long)]
        witness: bool,
    },
    /// Optimal PL map from `a` to `b`.
    Optmap {
        a: String,
        b: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Fast folding path from `a` to the volume-one representative of `b`.
    Foldpath {
        a: String,
        b: String,
        /// Evenly spaced sample times in addition to the events.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Write the per-time trace as TSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Simultaneous)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Keep the target's lengths instead of rescaling it to volume one.
        #[arg(long)]
        as_given: bool,
        /// Thin-part threshold on the systole.
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
    /// Right-geodesic and 4-point checks on an ordered list of points.
    Checkgeod {
        #[arg(required = true, num_args = 3..)]
        files: Vec<String>,
    },
    /// `d(Φʰ R, R)` for a range of `h`.
    Orbit {
        file: String,
        /// Images of the generators, comma separated.
        #[arg(long, requires = "inverse")]
        phi: Option<String>,
        /// Images of the generators under the inverse.
        #[arg(long)]
        inverse: Option<String>,
        /// Use a random product of this many Nielsen moves instead.
        #[arg(long, conflicts_with = "phi")]
        random: Option<usize>,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        from: i32,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        to: i32,
    },
    /// Bounded cancellation constant of an optimal map.
    Bcc {
        a: String,
        b: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 200_000)]
        pair_cap: u64,
        /// Longest loop searched; defaults to the bound guaranteeing the constant.
        #[arg(long)]
        length_cap: Option<String>,
    },
    /// Reproduce a worked example.
    Repro {
        #[arg(value_enum)]
        name: ReproName,
    },
}

/// Runs a parsed command line and returns its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    use commands::*;
    match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Tlength { file, words } => cmd_tlength(file, words),
        Command::Candidates { file } => cmd_candidates(file),
        Command::Distance { a, b, metric, witness } => cmd_distance(a, b, *metric, *witness),
        Command::Optmap { a, b, budget } => cmd_optmap(a, b, *budget),
        Command::Foldpath { a, b, samples, trace, strategy, budget, as_given, eps } => {
            let opts = FoldpathOptions {
                samples: *samples,
                trace: trace.clone(),
                strategy: *strategy,
                budget: *budget,
                as_given: *as_given,
                eps: eps.clone(),
            };
            cmd_foldpath(a, b, &opts)
        }
        Command::Checkgeod { files } => cmd_checkgeod(files),
        Command::Orbit { file, phi, inverse, random, from, to } => {
            cmd_orbit(file, phi.as_deref(), inverse.as_deref(), *random, cli.seed, *from, *to)
        }
        Command::Bcc { a, b, budget, pair_cap, length_cap } => cmd_bcc(a, b, *budget, *pair_cap, length_cap.as_deref()),
        Command::Repro { name } => repro::cmd_repro(*name),
    }
}
