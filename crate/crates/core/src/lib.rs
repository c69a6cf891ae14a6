//! Triangles and clustering in random key graphs.
//!
//! A random key graph `K(n; θ)` with `θ = (K, P)` gives each of `n` nodes a
//! uniformly random `K`-subset of a pool of `P` keys and joins two nodes when
//! their subsets intersect. This crate provides:
//!
//! * [`analytic`]: closed forms for edge and triangle probabilities, the
//!   clustering coefficient, triangle-count moments and comparisons with
//!   Erdős–Rényi graphs;
//! * [`graphgen`]: seeded samplers for key rings, key graphs and ER graphs;
//! * [`metrics`]: exact triangle counts and clustering of a concrete graph;
//! * [`oracle`]: exact enumeration over all ring assignments on tiny pools;
//! * [`experiments`]: Monte Carlo estimators, scaling-family sweeps and the
//!   fixed-parameter clustering tables.

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod graphgen;
pub mod metrics;
pub mod oracle;

pub use analytic::{AnalyticReport, MatchMode, Probability, Theta};
pub use error::{Error, Result};
pub use graphgen::{KeyRing, Seed, SimpleGraph};
