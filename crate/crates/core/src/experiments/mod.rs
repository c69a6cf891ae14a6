//! Monte Carlo estimators, scaling families, zero-one-law and ratio sweeps,
//! and reproduction of the fixed-parameter clustering tables.
//!
//! Every replication draws from its own substream `seed.rng(i)`, results are
//! collected in replication order and reduced sequentially, so output is
//! bit-identical for a given seed regardless of the worker count.

mod estimators;
mod families;
pub mod output;
mod sweeps;
mod tables;

use rayon::prelude::*;
use serde::Serialize;

pub use estimators::{
    estimate_beta_mc, estimate_cross_moment_mc, moment_check, CrossMomentSource, ExactMomentCheck,
    MomentReport,
};
pub use families::{KRule, ScalingFamily};
pub use sweeps::{ratio_sweep, zero_one_sweep, RatioRecord, SweepResult};
pub use tables::{reproduce_table, TableKind, TableRow, TABLE_PARAMETERS};

use crate::error::{Error, Result};
use crate::graphgen::{SampleRng, Seed};

/// Replication count, root seed and optional worker count for a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub replications: u64,
    pub seed: Seed,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(replications: u64, seed: Seed) -> Self {
        Self {
            replications,
            seed,
            threads: None,
        }
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    fn with_seed(self, seed: Seed) -> Self {
        Self { seed, ..self }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Event frequency with binomial standard error.
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let f = hits as f64 / trials as f64;
        Self {
            value: f,
            std_error: (f * (1.0 - f) / trials as f64).sqrt(),
        }
    }

    /// Sample mean with `sd / sqrt(n)` standard error.
    pub fn from_samples(samples: &[f64]) -> Self {
        let (mean, var) = mean_and_variance(samples);
        Self {
            value: mean,
            std_error: (var / samples.len() as f64).sqrt(),
        }
    }

    /// Whether `target` lies within `k` standard errors. A zero standard
    /// error demands agreement to rounding.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let diff = (self.value - target).abs();
        diff <= k * self.std_error || diff <= 1e-9 * target.abs().max(1e-12)
    }
}

/// Sample mean and unbiased sample variance (`0` for a single sample).
pub(crate) fn mean_and_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Runs `f` once per replication on its own substream, in parallel,
/// returning results in replication order.
pub(crate) fn replicate<T, F>(cfg: &McConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SampleRng) -> T + Sync,
{
    if cfg.replications == 0 {
        return Err(Error::NoReplications);
    }
    let seed = cfg.seed;
    let job = || {
        (0..cfg.replications)
            .into_par_iter()
            .map(|i| f(&mut seed.rng(i)))
            .collect::<Vec<T>>()
    };
    Ok(match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    })
}
