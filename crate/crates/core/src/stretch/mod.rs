//! Stretching factors, optimal maps and bounded cancellation.

pub mod bpath;
pub mod cancellation;
pub mod candidates;
pub mod lambda;
mod lp;
pub mod plmap;

use thiserror::Error;

use crate::freegroup::FreeGroupError;
use crate::graph::GraphError;
use crate::rational::{fmt_rational, Rational};

pub use bpath::{BPath, Piece, Point};
pub use cancellation::{bounded_cancellation_bound, CancellationOptions, CancellationReport};
pub use candidates::{enumerate_candidates, simple_cycles, CandidateLoop, Shape};
pub use lambda::{lambda_r, lambda_r_normalized, lambda_r_over, projectively_equal, stretch_report, StretchReport, Witness};
pub use plmap::{optimize_pl_map, OptimizedMap, PLMap, StretchAnalysis};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StretchError {
    #[error("graph has no candidate loops")]
    NoCandidates,
    #[error("vertex {0} is not on the boundary of the maximally stretched subgraph")]
    NotOffending(usize),
    #[error("no certified map after {moves} moves: best S_f = {}, gap {}", fmt_rational(.best), fmt_rational(.gap))]
    Budget { moves: usize, best: Box<Rational>, gap: Box<Rational> },
    #[error("pair enumeration exceeded the cap of {cap}; lower bound so far {}", fmt_rational(.partial))]
    PairCap { cap: u64, partial: Box<Rational> },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] FreeGroupError),
}
