//! Fast folding paths from an optimal map and the tools to study them.
//!
//! A path starts from a graph on which the optimal map is isometric on every
//! edge and folds all turns with equal images at unit speed until the map
//! becomes an isometry.

pub mod diagnostics;
pub mod orbit;
pub mod path;
pub mod setup;
pub mod verify;

use thiserror::Error;

use crate::graph::GraphError;
use crate::rational::{fmt_rational, Rational};
use crate::stretch::StretchError;

pub use diagnostics::{
    folding_turns, loop_multiplicity, max_simple_loop_multiplicity, multiplicity, speeds, systole_and_thin_test,
    Speeds, Systole,
};
pub use path::{fast_fold, sample_path, FoldEvent, FoldTurn, FoldingPath, Strategy};
pub use setup::{prepare_folding_setup, FoldingSetup, TargetScale};
pub use verify::{
    arc_length_parameters, check_dr_geodesic, check_four_point, check_quasi_geodesic, check_quasi_geodesic_graphs,
    graph_distance, FourPointReport, GeodesicReport, PathMetric, QuasiGeodesicReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoldError {
    #[error("time {} outside [0, {}]", fmt_rational(.t), fmt_rational(.end))]
    TimeOutOfRange { t: Box<Rational>, end: Box<Rational> },
    #[error("no folding turn at time {}: the path has finished", fmt_rational(.0))]
    Finished(Box<Rational>),
    #[error("loop is not a cyclically reduced loop of the snapshot")]
    NotALoop,
    #[error("folding invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Stretch(#[from] StretchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
