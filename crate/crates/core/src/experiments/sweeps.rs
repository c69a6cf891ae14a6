use serde::Serialize;

use super::{mean_and_variance, replicate, Estimate, McConfig, ScalingFamily};
use crate::analytic::{self, MatchMode, Theta};
use crate::error::Result;
use crate::graphgen::{sample_er, sample_rkg};
use crate::metrics::count_triangles;

/// Empirical triangle statistics of `K(n; θ_n)` at one point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub n: u64,
    #[serde(rename = "K")]
    pub ring_size: u64,
    #[serde(rename = "P")]
    pub pool_size: u64,
    pub tau: f64,
    /// `n³·τ(θ_n)`, the zero-one-law control quantity.
    pub n3_tau: f64,
    pub expected_triangles: f64,
    /// Fraction of replications with at least one triangle.
    pub empirical_triangle_prob: f64,
    pub triangle_prob_se: f64,
    pub mean_triangles: f64,
    pub mean_triangles_se: f64,
    pub var_triangles: f64,
    pub replications: u64,
    pub seed: u64,
}

impl SweepResult {
    pub fn theta(&self) -> Theta {
        Theta::new(self.ring_size, self.pool_size).expect("validated when generated")
    }
}

/// For each `n`, samples `K(n; θ_n)` and records the triangle-existence
/// frequency and the moments of the triangle count.
pub fn zero_one_sweep(
    family: &ScalingFamily,
    n_list: &[u64],
    cfg: &McConfig,
) -> Result<Vec<SweepResult>> {
    n_list
        .iter()
        .map(|&n| {
            let theta = family.theta(n)?;
            let expected_triangles = analytic::expected_triangles_rkg(n, theta)?;
            let point = cfg.with_seed(cfg.seed.child(n));
            let counts = replicate(&point, |rng| {
                count_triangles(&sample_rkg(n as usize, theta, rng)).total_triangles as f64
            })?;
            let hits = counts.iter().filter(|&&t| t > 0.0).count() as u64;
            let prob = Estimate::from_hits(hits, cfg.replications);
            let mean = Estimate::from_samples(&counts);
            let (_, var) = mean_and_variance(&counts);
            let tau = analytic::triangle_scaling(theta);
            let nf = n as f64;
            Ok(SweepResult {
                n,
                ring_size: theta.ring_size(),
                pool_size: theta.pool_size(),
                tau,
                n3_tau: nf * nf * nf * tau,
                expected_triangles,
                empirical_triangle_prob: prob.value,
                triangle_prob_se: prob.std_error,
                mean_triangles: mean.value,
                mean_triangles_se: mean.std_error,
                var_triangles: var,
                replications: cfg.replications,
                seed: cfg.seed.root(),
            })
        })
        .collect()
}

/// Expected triangle counts of `K(n; θ_n)` and matched ER graphs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRecord {
    pub n: u64,
    #[serde(rename = "K")]
    pub ring_size: u64,
    #[serde(rename = "P")]
    pub pool_size: u64,
    pub expected_rkg: f64,
    pub p_exact: f64,
    pub p_asymptotic: f64,
    pub expected_er_exact: f64,
    pub expected_er_asymptotic: f64,
    pub ratio_exact: f64,
    pub ratio_asymptotic: f64,
    /// `1 + P_n/K_n³`
    pub predicted_ratio: f64,
    pub mc_mean_rkg: Option<f64>,
    pub mc_mean_rkg_se: Option<f64>,
    pub mc_mean_er: Option<f64>,
    pub mc_mean_er_se: Option<f64>,
}

/// Compares `E[T_n(θ_n)]` with `E[T_n(p_n)]` under exact and asymptotic
/// matching, and with `1 + P_n/K_n³`. With `mc` set, both expectations are
/// also estimated by sampling (ER at the exactly matched `p`).
pub fn ratio_sweep(
    family: &ScalingFamily,
    n_list: &[u64],
    mc: Option<&McConfig>,
) -> Result<Vec<RatioRecord>> {
    n_list
        .iter()
        .map(|&n| {
            let theta = family.theta(n)?;
            let expected_rkg = analytic::expected_triangles_rkg(n, theta)?;
            let p_exact = analytic::matched_edge_probability(theta, MatchMode::Exact);
            let p_asym = analytic::matched_edge_probability(theta, MatchMode::Asymptotic);
            let expected_er_exact = analytic::expected_triangles_er(n, p_exact)?;
            let expected_er_asymptotic = analytic::expected_triangles_er(n, p_asym)?;
            let (rkg, er) = match mc {
                Some(cfg) => {
                    let base = cfg.seed.child(n);
                    let rkg = replicate(&cfg.with_seed(base.child(0)), |rng| {
                        count_triangles(&sample_rkg(n as usize, theta, rng)).total_triangles as f64
                    })?;
                    let er = replicate(&cfg.with_seed(base.child(1)), |rng| {
                        count_triangles(&sample_er(n as usize, p_exact, rng)).total_triangles as f64
                    })?;
                    (
                        Some(Estimate::from_samples(&rkg)),
                        Some(Estimate::from_samples(&er)),
                    )
                }
                None => (None, None),
            };
            Ok(RatioRecord {
                n,
                ring_size: theta.ring_size(),
                pool_size: theta.pool_size(),
                expected_rkg,
                p_exact: p_exact.value(),
                p_asymptotic: p_asym.value(),
                expected_er_exact,
                expected_er_asymptotic,
                ratio_exact: expected_rkg / expected_er_exact,
                ratio_asymptotic: expected_rkg / expected_er_asymptotic,
                predicted_ratio: analytic::asymptotic_ratio(theta),
                mc_mean_rkg: rkg.map(|e| e.value),
                mc_mean_rkg_se: rkg.map(|e| e.std_error),
                mc_mean_er: er.map(|e| e.value),
                mc_mean_er_se: er.map(|e| e.std_error),
            })
        })
        .collect()
}
