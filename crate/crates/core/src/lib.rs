//! Exact computations on Culler–Vogtmann Outer Space.
//!
//! Points are marked metric graphs with rational edge lengths. The crate
//! computes the asymmetric Lipschitz metric, optimal PL maps, folding paths
//! between two points and the diagnostics used to study their geometry.

pub mod cli;
pub mod fixtures;
pub mod folding;
pub mod freegroup;
pub mod graph;
pub mod rational;
pub mod stretch;

pub use freegroup::{AutomorphismPair, Letter, Word};
pub use graph::{Dart, EdgePath, GraphBuilder, MarkedMetricGraph};
pub use rational::Rational;
