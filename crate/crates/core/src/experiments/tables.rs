use serde::Serialize;

use super::{replicate, Estimate, McConfig};
use crate::analytic::{self, MatchMode, Theta};
use crate::error::{Error, Result};
use crate::graphgen::{sample_er, sample_rkg};
use crate::metrics::{count_triangles, global_clustering};

/// The eight `(K, P)` configurations of the fixed-parameter clustering tables.
pub const TABLE_PARAMETERS: [(u64, u64); 8] = [
    (4, 1_000),
    (8, 5_000),
    (16, 20_000),
    (20, 40_000),
    (24, 100_000),
    (32, 100_000),
    (40, 500_000),
    (64, 1_000_000),
];

/// Table I compares `C*` of random key graphs with `C_K(θ)`; Table II adds
/// the exactly matched ER graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableKind {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    #[serde(rename = "K")]
    pub ring_size: u64,
    #[serde(rename = "P")]
    pub pool_size: u64,
    pub one_minus_q: f64,
    pub c_k: f64,
    /// Mean over replications of the per-graph global clustering coefficient.
    pub c_star_hat: f64,
    pub c_star_hat_se: f64,
    /// `C_ER(p(θ)) = p(θ)`.
    pub c_er: f64,
    pub c_star_hat_er: Option<f64>,
    pub c_star_hat_er_se: Option<f64>,
    pub replications: u64,
    pub n: u64,
}

fn mean_global_clustering<F>(cfg: &McConfig, sample: F) -> Result<Estimate>
where
    F: Fn(&mut crate::graphgen::SampleRng) -> crate::graphgen::SimpleGraph + Sync,
{
    let values = replicate(cfg, |rng| global_clustering(&count_triangles(&sample(rng))))?;
    Ok(Estimate::from_samples(&values))
}

/// Analytic columns plus Monte Carlo `Ĉ*` at `n` nodes for every row of
/// [`TABLE_PARAMETERS`]. Row `i` uses seeds `child(2i)` (key graphs) and
/// `child(2i+1)` (ER graphs).
pub fn reproduce_table(which: TableKind, n: u64, cfg: &McConfig) -> Result<Vec<TableRow>> {
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    TABLE_PARAMETERS
        .iter()
        .enumerate()
        .map(|(i, &(k, p))| {
            let theta = Theta::new(k, p)?;
            let p_edge = analytic::matched_edge_probability(theta, MatchMode::Exact);
            let rkg =
                mean_global_clustering(&cfg.with_seed(cfg.seed.child(2 * i as u64)), |rng| {
                    sample_rkg(n as usize, theta, rng)
                })?;
            let er = match which {
                TableKind::I => None,
                TableKind::II => Some(mean_global_clustering(
                    &cfg.with_seed(cfg.seed.child(2 * i as u64 + 1)),
                    |rng| sample_er(n as usize, p_edge, rng),
                )?),
            };
            Ok(TableRow {
                ring_size: k,
                pool_size: p,
                one_minus_q: p_edge.value(),
                c_k: analytic::clustering_rkg(theta).value(),
                c_star_hat: rkg.value,
                c_star_hat_se: rkg.std_error,
                c_er: analytic::clustering_er(p_edge).value(),
                c_star_hat_er: er.map(|e| e.value),
                c_star_hat_er_se: er.map(|e| e.std_error),
                replications: cfg.replications,
                n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::Seed;

    #[test]
    fn small_table_is_reasonable() {
        let rows = reproduce_table(TableKind::II, 300, &McConfig::new(10, Seed::new(1))).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert!(r.c_k >= r.c_er);
            assert!((0.0..=1.0).contains(&r.c_star_hat));
            assert!(r.c_star_hat_er.is_some());
        }
        assert!((rows[0].c_k - 0.2590).abs() < 5e-4);
        let t1 = reproduce_table(TableKind::I, 100, &McConfig::new(2, Seed::new(1))).unwrap();
        assert!(t1.iter().all(|r| r.c_star_hat_er.is_none()));
    }
}
