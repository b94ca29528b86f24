//! Simulation engine for explanation as sequential search over a
//! knowledge graph.
//!
//! An explainer holds a graph of concepts with a designated target node
//! and searches, one adjacent node per step, for a member of the hidden
//! overlap set it shares with an explainee. The engine provides:
//!
//! - [`analytic`]: negative hypergeometric closed forms for the success
//!   time on complete graphs;
//! - [`belief`]: the Bayesian failure-update over the overlap size and the
//!   expected-benefit / myopic-stopping machinery;
//! - [`graph`]: graph generators (complete, Erdos-Renyi, small-world,
//!   two-component) and overlap placement;
//! - [`search`]: single-episode traversal with four strategies;
//! - [`experiments`]: seeded Monte Carlo replication and figure
//!   reproductions;
//! - [`report`]: CSV / SVG / manifest emission;
//! - [`stats`]: chi-square goodness-of-fit against analytic pmfs.

pub mod analytic;
pub mod belief;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod report;
pub mod search;
pub mod stats;

pub use error::{Error, Result};
