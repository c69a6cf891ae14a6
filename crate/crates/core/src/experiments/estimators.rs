use serde::Serialize;

use super::{replicate, Estimate, McConfig};
use crate::analytic::{self, exact, Probability, Theta};
use crate::error::{Error, Result};
use crate::graphgen::{sample_key_ring, sample_rkg};
use crate::metrics::count_triangles;
use crate::oracle;

/// Frequency with which three independent rings are pairwise intersecting.
pub fn estimate_beta_mc(theta: Theta, cfg: &McConfig) -> Result<Estimate> {
    let hits = replicate(cfg, |rng| {
        let a = sample_key_ring(theta, rng);
        let b = sample_key_ring(theta, rng);
        let c = sample_key_ring(theta, rng);
        a.intersects(&b) && a.intersects(&c) && b.intersects(&c)
    })?;
    Ok(Estimate::from_hits(
        hits.iter().filter(|&&h| h).count() as u64,
        cfg.replications,
    ))
}

/// Frequency with which nodes `{1,2,3}` and `{1,2,4}` both form triangles.
pub fn estimate_cross_moment_mc(theta: Theta, cfg: &McConfig) -> Result<Estimate> {
    let hits = replicate(cfg, |rng| {
        let r: [_; 4] = std::array::from_fn(|_| sample_key_ring(theta, rng));
        r[0].intersects(&r[1])
            && r[0].intersects(&r[2])
            && r[1].intersects(&r[2])
            && r[0].intersects(&r[3])
            && r[1].intersects(&r[3])
    })?;
    Ok(Estimate::from_hits(
        hits.iter().filter(|&&h| h).count() as u64,
        cfg.replications,
    ))
}

/// Where the shared-edge pair moment used in the second moment came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CrossMomentSource {
    Oracle {
        exact: String,
        value: f64,
    },
    /// Raw estimate; `value` is the estimate clipped into the admissible bracket.
    MonteCarlo {
        estimate: Estimate,
        value: f64,
    },
}

impl CrossMomentSource {
    pub fn value(&self) -> f64 {
        match self {
            CrossMomentSource::Oracle { value, .. }
            | CrossMomentSource::MonteCarlo { value, .. } => *value,
        }
    }
}

/// Exact comparison of the closed-form moments against full enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactMomentCheck {
    pub mean: String,
    pub second_moment: String,
    pub mean_matches: bool,
    pub second_moment_matches: bool,
}

/// Closed-form first and second moments of `T_n` versus Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: u64,
    pub theta: Theta,
    pub cross_moment: CrossMomentSource,
    pub analytic_mean: f64,
    pub analytic_second_moment: f64,
    pub analytic_variance: f64,
    pub mc_mean: Estimate,
    pub mc_second_moment: Estimate,
    pub mean_ok: bool,
    pub second_moment_ok: bool,
    pub exact: Option<ExactMomentCheck>,
    pub replications: u64,
    pub seed: u64,
}

impl MomentReport {
    pub fn all_ok(&self) -> bool {
        self.mean_ok
            && self.second_moment_ok
            && self
                .exact
                .as_ref()
                .is_none_or(|e| e.mean_matches && e.second_moment_matches)
    }
}

/// Tolerance band for [`MomentReport`] flags, in standard errors.
pub const MOMENT_SIGMAS: f64 = 4.0;

/// Ring quadruples are cheap, so the pair-moment estimate gets at least this
/// many draws regardless of the graph replication count.
pub const CROSS_MOMENT_MIN_REPLICATIONS: u64 = 1_000_000;

pub fn moment_check(n: u64, theta: Theta, cfg: &McConfig) -> Result<MomentReport> {
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    let (lower, upper) = analytic::cross_moment_bracket(theta);
    let (cross_moment, exact_cross) = match oracle::enumerate_cross_moment(theta) {
        Ok(x) => (
            CrossMomentSource::Oracle {
                exact: x.to_string(),
                value: x.to_f64().clamp(lower, upper),
            },
            Some(x),
        ),
        Err(Error::OracleGuard { .. }) => {
            let cross_cfg = McConfig {
                replications: cfg.replications.max(CROSS_MOMENT_MIN_REPLICATIONS),
                ..cfg.with_seed(cfg.seed.child(1))
            };
            let est = estimate_cross_moment_mc(theta, &cross_cfg)?;
            (
                CrossMomentSource::MonteCarlo {
                    estimate: est,
                    value: est.value.clamp(lower, upper),
                },
                None,
            )
        }
        Err(e) => return Err(e),
    };
    let cross = Probability::new(cross_moment.value())?;
    let analytic_mean = analytic::expected_triangles_rkg(n, theta)?;
    let analytic_second_moment = analytic::second_moment_triangles(n, theta, cross)?;
    let triples = analytic::binomial_f64(n, 3);
    let analytic_variance =
        analytic::normalized_triangle_variance(n, theta, cross)? * triples * triples;

    let counts = replicate(&cfg.with_seed(cfg.seed.child(0)), |rng| {
        count_triangles(&sample_rkg(n as usize, theta, rng)).total_triangles as f64
    })?;
    let squares: Vec<f64> = counts.iter().map(|t| t * t).collect();
    let mc_mean = Estimate::from_samples(&counts);
    let mc_second_moment = Estimate::from_samples(&squares);

    let exact = match exact_cross {
        Some(x) => match oracle::enumerate_triangle_count_distribution(n, theta) {
            Ok(dist) => {
                let mean = dist.mean();
                let second = dist.second_moment();
                Some(ExactMomentCheck {
                    mean_matches: mean == exact::expected_triangles(n, theta),
                    second_moment_matches: second
                        == exact::second_moment_triangles(n, theta, x.as_rational()),
                    mean: mean.to_string(),
                    second_moment: second.to_string(),
                })
            }
            Err(Error::OracleGuard { .. }) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };

    // An estimated pair moment carries its own error into the closed form.
    let formula_se = match &cross_moment {
        CrossMomentSource::MonteCarlo { estimate, .. } => {
            3.0 * (n - 3) as f64 * triples * estimate.std_error
        }
        CrossMomentSource::Oracle { .. } => 0.0,
    };
    let second_band = Estimate {
        std_error: mc_second_moment.std_error.hypot(formula_se),
        ..mc_second_moment
    };

    Ok(MomentReport {
        n,
        theta,
        mean_ok: mc_mean.within(analytic_mean, MOMENT_SIGMAS),
        second_moment_ok: second_band.within(analytic_second_moment, MOMENT_SIGMAS),
        cross_moment,
        analytic_mean,
        analytic_second_moment,
        analytic_variance,
        mc_mean,
        mc_second_moment,
        exact,
        replications: cfg.replications,
        seed: cfg.seed.root(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::Seed;

    fn th(k: u64, p: u64) -> Theta {
        Theta::new(k, p).unwrap()
    }

    #[test]
    fn beta_mc_small_pool() {
        let est = estimate_beta_mc(th(2, 4), &McConfig::new(100_000, Seed::new(1))).unwrap();
        assert!(est.within(7.0 / 12.0, 3.0), "{est:?}");
    }

    #[test]
    fn degenerate_pool_is_certain() {
        let cfg = McConfig::new(50, Seed::new(2));
        assert_eq!(estimate_beta_mc(th(3, 3), &cfg).unwrap().value, 1.0);
        assert_eq!(estimate_cross_moment_mc(th(3, 3), &cfg).unwrap().value, 1.0);
    }

    #[test]
    fn cross_moment_mc_matches_oracle() {
        let t = th(2, 4);
        let exact = oracle::enumerate_cross_moment(t).unwrap().to_f64();
        let est = estimate_cross_moment_mc(t, &McConfig::new(100_000, Seed::new(3))).unwrap();
        assert!(est.within(exact, 3.0), "{est:?} vs {exact}");
    }

    #[test]
    fn cross_moment_mc_in_bracket() {
        for (k, p) in [(3, 20), (2, 10), (8, 100)] {
            let t = th(k, p);
            let cfg = McConfig::new(20_000, Seed::new(4));
            let beta = estimate_beta_mc(t, &cfg).unwrap();
            let x = estimate_cross_moment_mc(t, &cfg.with_seed(Seed::new(5))).unwrap();
            let (_, upper) = analytic::cross_moment_bracket(t);
            assert!(x.value >= beta.value * beta.value - 3.0 * x.std_error);
            assert!(x.value <= upper + 3.0 * x.std_error);
        }
    }

    #[test]
    fn moments_exact_on_tiny_instance() {
        let r = moment_check(4, th(2, 4), &McConfig::new(2_000, Seed::new(6))).unwrap();
        let exact = r.exact.as_ref().expect("oracle feasible");
        assert!(
            exact.mean_matches && exact.second_moment_matches,
            "{exact:?}"
        );
        assert_eq!(exact.mean, "7/3");
        assert!(matches!(r.cross_moment, CrossMomentSource::Oracle { .. }));
    }

    #[test]
    fn moments_at_three_nodes() {
        let r = moment_check(3, th(2, 10), &McConfig::new(500, Seed::new(7))).unwrap();
        assert!((r.analytic_second_moment - r.analytic_mean).abs() < 1e-15);
        // T_3 is 0/1, so T² = T sample by sample.
        assert_eq!(r.mc_mean.value, r.mc_second_moment.value);
    }

    #[test]
    fn moments_mc_consistency() {
        let r = moment_check(10, th(2, 10), &McConfig::new(100_000, Seed::new(8))).unwrap();
        assert!(r.mean_ok && r.second_moment_ok, "{r:?}");
        assert!(r.analytic_variance > 0.0);
    }

    #[test]
    fn moments_reject_small_n() {
        assert!(moment_check(2, th(2, 10), &McConfig::new(10, Seed::new(9))).is_err());
    }
}
