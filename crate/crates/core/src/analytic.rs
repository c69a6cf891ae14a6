//! Closed-form quantities for random key graphs and their matched
//! Erdős–Rényi counterparts.
//!
//! Every binomial ratio is evaluated as a product of `K` factors in `f64`;
//! factorials are never formed, so pool sizes up to `10^9` stay accurate.
//! The [`exact`] submodule carries the same formulas over arbitrary-precision
//! rationals for small instances.

use serde::Serialize;

use crate::error::{Error, Result};

/// Model parameters: key ring size `K` and key pool size `P`, with `1 <= K <= P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Theta {
    #[serde(rename = "K")]
    ring_size: u64,
    #[serde(rename = "P")]
    pool_size: u64,
}

impl Theta {
    pub fn new(ring_size: u64, pool_size: u64) -> Result<Self> {
        if ring_size == 0 || pool_size == 0 || ring_size > pool_size {
            return Err(Error::InvalidTheta {
                k: ring_size,
                p: pool_size,
            });
        }
        // Keys are stored as u32 by the samplers.
        if pool_size > u32::MAX as u64 {
            return Err(Error::InvalidTheta {
                k: ring_size,
                p: pool_size,
            });
        }
        Ok(Self {
            ring_size,
            pool_size,
        })
    }

    /// Key ring size `K`.
    #[inline]
    pub fn ring_size(&self) -> u64 {
        self.ring_size
    }

    /// Key pool size `P`.
    #[inline]
    pub fn pool_size(&self) -> u64 {
        self.pool_size
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(K={}, P={})", self.ring_size, self.pool_size)
    }
}

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::ProbabilityOutOfRange(value))
        }
    }

    // Rounding can push a product of factors in [0,1] a hair outside.
    fn clamped(value: f64) -> Self {
        Self(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// How an Erdős–Rényi edge probability is matched to a random key graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// `p = 1 - q(θ)`: identical expected degrees.
    Exact,
    /// `p = min(K²/P, 1)`.
    Asymptotic,
}

/// `C(n, k)` as `f64`, computed in `u128` while it fits.
pub(crate) fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                // Fall back to floating point for very large arguments.
                let mut f = 1.0f64;
                for j in 0..k {
                    f *= (n - j) as f64 / (j + 1) as f64;
                }
                return f;
            }
        }
    }
    acc as f64
}

/// Probability that a uniformly random key ring avoids a fixed set of `s` keys:
/// `C(P-s, K) / C(P, K)`, which is `0` once `s > P - K`.
pub fn avoidance_probability(theta: Theta, s: u64) -> Result<Probability> {
    let (k, p) = (theta.ring_size, theta.pool_size);
    if s > p {
        return Err(Error::SubsetTooLarge { size: s, pool: p });
    }
    if s > p - k {
        return Ok(Probability::ZERO);
    }
    let prod = (0..k).fold(1.0f64, |acc, l| acc * ((p - s - l) as f64 / (p - l) as f64));
    Ok(Probability::clamped(prod))
}

/// `q(θ)`: probability that two key rings are disjoint (no edge).
pub fn non_adjacency_probability(theta: Theta) -> Probability {
    if theta.pool_size < 2 * theta.ring_size {
        return Probability::ZERO;
    }
    avoidance_probability(theta, theta.ring_size).expect("K <= P")
}

/// `p(θ) = 1 - q(θ)`: edge probability.
pub fn edge_probability(theta: Theta) -> Probability {
    Probability::clamped(1.0 - non_adjacency_probability(theta).value())
}

/// `r(θ)`: probability that a key ring avoids a fixed set of `2K` keys.
pub fn double_avoidance_probability(theta: Theta) -> Probability {
    if theta.pool_size < 3 * theta.ring_size {
        return Probability::ZERO;
    }
    avoidance_probability(theta, 2 * theta.ring_size).expect("2K <= P")
}

/// `β(θ) = (1-q)³ + q³ - q·r`: probability that three given nodes form a triangle.
pub fn triangle_probability(theta: Theta) -> Probability {
    let q = non_adjacency_probability(theta).value();
    let r = double_avoidance_probability(theta).value();
    let p = 1.0 - q;
    // q³ - q·r = q·(q² - r) >= 0; keep that term grouped.
    Probability::clamped(p * p * p + q * (q * q - r))
}

/// `τ(θ) = K³/P² + (K²/P)³`, the asymptotic surrogate for the triangle
/// probability. Not clamped: for degenerate parameters it exceeds one.
pub fn triangle_scaling(theta: Theta) -> f64 {
    let k = theta.ring_size as f64;
    let p = theta.pool_size as f64;
    let k2_over_p = k * k / p;
    k * k * k / (p * p) + k2_over_p * k2_over_p * k2_over_p
}

/// Clustering coefficient of the random key graph as the conditional
/// probability `P(E12 | E13 ∩ E23) = β / (1-q)²`.
pub fn clustering_rkg(theta: Theta) -> Probability {
    let p = edge_probability(theta).value();
    Probability::clamped(triangle_probability(theta).value() / (p * p))
}

/// Clustering coefficient of `G(n; p)`, which is `p` itself.
pub fn clustering_er(p: Probability) -> Probability {
    p
}

fn require_triples(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    Ok(())
}

/// `E[T_n(θ)] = C(n,3)·β(θ)`.
pub fn expected_triangles_rkg(n: u64, theta: Theta) -> Result<f64> {
    require_triples(n)?;
    Ok(binomial_f64(n, 3) * triangle_probability(theta).value())
}

/// `E[T_n(p)] = C(n,3)·p³`.
pub fn expected_triangles_er(n: u64, p: Probability) -> Result<f64> {
    require_triples(n)?;
    let p = p.value();
    Ok(binomial_f64(n, 3) * p * p * p)
}

/// Admissible range of `E[χ123 χ124]`: Jensen gives `β²` from below and
/// conditioning on three rings gives `β·(1-q)` from above.
pub fn cross_moment_bracket(theta: Theta) -> (f64, f64) {
    let beta = triangle_probability(theta).value();
    let p = edge_probability(theta).value();
    (beta * beta, beta * p)
}

fn check_cross_moment(theta: Theta, cross_moment: Probability) -> Result<f64> {
    let (lower, upper) = cross_moment_bracket(theta);
    let v = cross_moment.value();
    let slack = 1e-12 * upper.max(1e-300);
    if v < lower - slack || v > upper + slack {
        return Err(Error::CrossMomentOutOfBracket {
            value: v,
            lower,
            upper,
        });
    }
    Ok(v)
}

/// `E[T_n(θ)²]` given the pair moment `E[χ123 χ124]` for two triangles
/// sharing an edge.
pub fn second_moment_triangles(n: u64, theta: Theta, cross_moment: Probability) -> Result<f64> {
    require_triples(n)?;
    let cross = check_cross_moment(theta, cross_moment)?;
    let triples = binomial_f64(n, 3);
    let mean = triples * triangle_probability(theta).value();
    let disjoint_or_vertex = (binomial_f64(n - 3, 3) + 3.0 * binomial_f64(n - 3, 2)) / triples;
    Ok(mean + disjoint_or_vertex * mean * mean + 3.0 * (n - 3) as f64 * triples * cross)
}

/// `Var[T_n(θ) / C(n,3)]`.
///
/// Uses `C(n,3) = C(n-3,3) + 3C(n-3,2) + 3(n-3) + 1` to rewrite the raw
/// expression as `((β - β²) + 3(n-3)(E[χ123χ124] - β²)) / C(n,3)`, which is a
/// sum of nonnegative terms and free of cancellation.
pub fn normalized_triangle_variance(
    n: u64,
    theta: Theta,
    cross_moment: Probability,
) -> Result<f64> {
    require_triples(n)?;
    let cross = check_cross_moment(theta, cross_moment)?;
    let beta = triangle_probability(theta).value();
    let triples = binomial_f64(n, 3);
    let excess = (cross - beta * beta).max(0.0);
    Ok((beta * (1.0 - beta) + 3.0 * (n - 3) as f64 * excess) / triples)
}

/// `C_K(θ) / C_ER(p(θ)) = 1 + q·(q² - r)/(1-q)³` under exact matching.
/// Also equals `E[T_n(θ)] / E[T_n(p(θ))]` for every `n`.
pub fn clustering_ratio_exact(theta: Theta) -> f64 {
    let q = non_adjacency_probability(theta).value();
    let r = double_avoidance_probability(theta).value();
    let p = 1.0 - q;
    1.0 + q * (q * q - r) / (p * p * p)
}

/// `1 + P/K³`, the shared large-pool ratio for triangle counts and clustering.
pub fn asymptotic_ratio(theta: Theta) -> f64 {
    let k = theta.ring_size as f64;
    1.0 + theta.pool_size as f64 / (k * k * k)
}

/// `r(θ)/q(θ)²` evaluated as `∏_{ℓ<K} (1 - (K/(P-K-ℓ))²)`.
pub fn avoidance_ratio_product(theta: Theta) -> Result<Probability> {
    let (k, p) = (theta.ring_size, theta.pool_size);
    if p < 3 * k {
        return Err(Error::NeedsThreeRingsOfRoom { k, p });
    }
    let kf = k as f64;
    let prod = (0..k).fold(1.0f64, |acc, l| {
        let x = kf / (p - k - l) as f64;
        acc * (1.0 - x * x)
    });
    Ok(Probability::clamped(prod))
}

/// Erdős–Rényi edge probability matched to `theta`.
pub fn matched_edge_probability(theta: Theta, mode: MatchMode) -> Probability {
    match mode {
        MatchMode::Exact => edge_probability(theta),
        MatchMode::Asymptotic => {
            let k = theta.ring_size as f64;
            Probability::clamped((k * k / theta.pool_size as f64).min(1.0))
        }
    }
}

/// All closed-form quantities for one `(n, θ)` configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub theta: Theta,
    pub n: u64,
    pub q: Probability,
    pub p_edge: Probability,
    pub r: Probability,
    pub beta: Probability,
    pub tau: f64,
    pub c_k: Probability,
    pub expected_triangles: f64,
    pub expected_triangles_matched_er: f64,
    pub ratio_triangles: f64,
    pub ratio_clustering: f64,
}

impl AnalyticReport {
    pub fn compute(n: u64, theta: Theta) -> Result<Self> {
        let p_edge = edge_probability(theta);
        let expected_triangles = expected_triangles_rkg(n, theta)?;
        let expected_triangles_matched_er = expected_triangles_er(n, p_edge)?;
        let c_k = clustering_rkg(theta);
        Ok(Self {
            theta,
            n,
            q: non_adjacency_probability(theta),
            p_edge,
            r: double_avoidance_probability(theta),
            beta: triangle_probability(theta),
            tau: triangle_scaling(theta),
            c_k,
            expected_triangles,
            expected_triangles_matched_er,
            ratio_triangles: expected_triangles / expected_triangles_matched_er,
            ratio_clustering: c_k.value() / clustering_er(p_edge).value(),
        })
    }
}

/// The same closed forms over exact rationals, for validating the floating
/// point path and the enumeration oracle on small pools.
pub mod exact {
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::Theta;
    use crate::error::{Error, Result};

    pub fn binomial(n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= n - i;
            acc /= i + 1;
        }
        acc
    }

    fn ratio(num: BigUint, den: BigUint) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    pub fn avoidance_probability(theta: Theta, s: u64) -> Result<BigRational> {
        let (k, p) = (theta.ring_size(), theta.pool_size());
        if s > p {
            return Err(Error::SubsetTooLarge { size: s, pool: p });
        }
        Ok(ratio(binomial(p - s, k), binomial(p, k)))
    }

    pub fn non_adjacency_probability(theta: Theta) -> BigRational {
        if theta.pool_size() < 2 * theta.ring_size() {
            return BigRational::zero();
        }
        avoidance_probability(theta, theta.ring_size()).expect("K <= P")
    }

    pub fn double_avoidance_probability(theta: Theta) -> BigRational {
        if theta.pool_size() < 3 * theta.ring_size() {
            return BigRational::zero();
        }
        avoidance_probability(theta, 2 * theta.ring_size()).expect("2K <= P")
    }

    pub fn triangle_probability(theta: Theta) -> BigRational {
        let q = non_adjacency_probability(theta);
        let r = double_avoidance_probability(theta);
        let p = BigRational::one() - &q;
        &p * &p * &p + &q * &q * &q - &q * &r
    }

    pub fn expected_triangles(n: u64, theta: Theta) -> BigRational {
        BigRational::from_integer(binomial(n, 3).into()) * triangle_probability(theta)
    }

    /// Exact second moment of the triangle count; no bracket check here.
    pub fn second_moment_triangles(
        n: u64,
        theta: Theta,
        cross_moment: &BigRational,
    ) -> BigRational {
        let int = |v: BigUint| BigRational::from_integer(v.into());
        let triples = int(binomial(n, 3));
        let mean = &triples * triangle_probability(theta);
        let coeff =
            (int(binomial(n - 3, 3)) + int(binomial(n - 3, 2)) * int(3u32.into())) / &triples;
        let shared_edge = int(BigUint::from(3 * (n - 3))) * &triples * cross_moment;
        &mean + coeff * &mean * &mean + shared_edge
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(k: u64, p: u64) -> Theta {
        Theta::new(k, p).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn theta_rejects_bad_parameters() {
        assert!(Theta::new(0, 5).is_err());
        assert!(Theta::new(6, 5).is_err());
        assert!(Theta::new(5, 0).is_err());
        assert!(Theta::new(5, 5).is_ok());
    }

    #[test]
    fn probability_range() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::new(0.25).unwrap().value(), 0.25);
    }

    #[test]
    fn avoidance_examples() {
        assert!(close(
            avoidance_probability(th(2, 4), 2).unwrap().value(),
            1.0 / 6.0,
            1e-15
        ));
        assert_eq!(avoidance_probability(th(3, 7), 0).unwrap().value(), 1.0);
        let v = avoidance_probability(th(4, 1000), 4).unwrap().value();
        assert!((v - (1.0 - 0.0159)).abs() <= 5e-5);
        assert_eq!(avoidance_probability(th(3, 5), 3).unwrap().value(), 0.0);
        assert_eq!(
            avoidance_probability(th(3, 5), 6),
            Err(Error::SubsetTooLarge { size: 6, pool: 5 })
        );
    }

    #[test]
    fn q_and_p_examples() {
        assert_eq!(non_adjacency_probability(th(3, 5)).value(), 0.0);
        assert!(close(
            non_adjacency_probability(th(1, 10)).value(),
            0.9,
            1e-15
        ));
        assert!((non_adjacency_probability(th(4, 1000)).value() - 0.9841).abs() <= 5e-5);
        assert_eq!(edge_probability(th(3, 5)).value(), 1.0);
        assert!((edge_probability(th(4, 1000)).value() - 0.0159).abs() <= 5e-5);
        assert!((edge_probability(th(8, 5000)).value() - 0.0127).abs() <= 5e-5);
    }

    #[test]
    fn r_examples() {
        assert_eq!(double_avoidance_probability(th(2, 4)).value(), 0.0);
        assert!(close(
            double_avoidance_probability(th(1, 10)).value(),
            0.8,
            1e-15
        ));
        assert!(close(
            double_avoidance_probability(th(2, 10)).value(),
            1.0 / 3.0,
            1e-15
        ));
    }

    #[test]
    fn beta_examples() {
        assert!(close(
            triangle_probability(th(2, 4)).value(),
            7.0 / 12.0,
            1e-15
        ));
        assert_eq!(triangle_probability(th(3, 5)).value(), 1.0);
        assert!(close(triangle_probability(th(1, 2)).value(), 0.25, 1e-15));
    }

    #[test]
    fn tau_examples() {
        assert!((triangle_scaling(th(4, 1000)) - 6.8096e-5).abs() <= 1e-9);
        assert_eq!(triangle_scaling(th(1, 1)), 2.0);
        assert!(close(triangle_scaling(th(2, 8)), 0.25, 1e-15));
    }

    #[test]
    fn clustering_examples() {
        assert!((clustering_rkg(th(4, 1000)).value() - 0.2590).abs() <= 5e-4);
        assert!((clustering_rkg(th(64, 1_000_000)).value() - 0.0196).abs() <= 5e-4);
        assert_eq!(clustering_rkg(th(3, 5)).value(), 1.0);
        for v in [0.0159, 0.0, 1.0] {
            assert_eq!(clustering_er(Probability::new(v).unwrap()).value(), v);
        }
    }

    #[test]
    fn expected_triangle_examples() {
        assert!(close(
            expected_triangles_rkg(3, th(2, 4)).unwrap(),
            7.0 / 12.0,
            1e-15
        ));
        assert_eq!(expected_triangles_rkg(4, th(3, 5)).unwrap(), 4.0);
        assert!(expected_triangles_rkg(2, th(3, 5)).is_err());
        let half = Probability::new(0.5).unwrap();
        assert_eq!(expected_triangles_er(3, half).unwrap(), 0.125);
        assert_eq!(expected_triangles_er(4, Probability::ONE).unwrap(), 4.0);
        assert!(expected_triangles_er(2, half).is_err());
        let p = Probability::new(0.0159).unwrap();
        let want = 166_167_000.0 * 0.0159f64.powi(3);
        assert!(close(expected_triangles_er(1000, p).unwrap(), want, 1e-12));
    }

    #[test]
    fn second_moment_at_three_nodes_is_the_mean() {
        for (k, p) in [(2, 4), (1, 2), (4, 30), (3, 5)] {
            let t = th(k, p);
            let (lo, hi) = cross_moment_bracket(t);
            let beta = triangle_probability(t).value();
            for c in [lo, hi, 0.5 * (lo + hi)] {
                let m2 = second_moment_triangles(3, t, Probability::new(c).unwrap()).unwrap();
                assert!(close(m2, beta, 1e-14));
            }
        }
    }

    #[test]
    fn cross_moment_bracket_is_enforced() {
        let t = th(2, 4);
        let (lo, hi) = cross_moment_bracket(t);
        assert!(close(lo, 49.0 / 144.0, 1e-14));
        assert!(close(hi, 35.0 / 72.0, 1e-14));
        let below = Probability::new(lo * 0.99).unwrap();
        let above = Probability::new(hi * 1.01).unwrap();
        assert!(matches!(
            second_moment_triangles(5, t, below),
            Err(Error::CrossMomentOutOfBracket { .. })
        ));
        assert!(matches!(
            normalized_triangle_variance(5, t, above),
            Err(Error::CrossMomentOutOfBracket { .. })
        ));
    }

    #[test]
    fn normalized_variance_matches_raw_expression() {
        // Literal form: β/C + (C(n-3,3)/C + 3C(n-3,2)/C - 1)β² + 3(n-3)/C · x
        let t = th(2, 10);
        let beta = triangle_probability(t).value();
        let (lo, hi) = cross_moment_bracket(t);
        let cross = 0.3 * lo + 0.7 * hi;
        for n in [3u64, 4, 7, 10, 50, 200] {
            let c = binomial_f64(n, 3);
            let raw = beta / c
                + ((binomial_f64(n - 3, 3) + 3.0 * binomial_f64(n - 3, 2)) / c - 1.0) * beta * beta
                + 3.0 * (n - 3) as f64 / c * cross;
            let got = normalized_triangle_variance(n, t, Probability::new(cross).unwrap()).unwrap();
            assert!((got - raw).abs() <= 1e-12, "n={n}: {got} vs {raw}");
        }
    }

    #[test]
    fn normalized_variance_examples() {
        let t = th(2, 4);
        let beta = 7.0 / 12.0;
        let (lo, _) = cross_moment_bracket(t);
        let v3 = normalized_triangle_variance(3, t, Probability::new(lo).unwrap()).unwrap();
        assert!(close(v3, beta * (1.0 - beta), 1e-14));

        let t = th(2, 10);
        let (lo, hi) = cross_moment_bracket(t);
        let x = Probability::new(0.5 * (lo + hi)).unwrap();
        let vs: Vec<f64> = [10u64, 20, 40, 80]
            .iter()
            .map(|&n| normalized_triangle_variance(n, t, x).unwrap())
            .collect();
        assert!(vs.windows(2).all(|w| w[1] < w[0]), "{vs:?}");
        // n²·Var approaches 18·(x - β²).
        let b = triangle_probability(t).value();
        let n = 100_000u64;
        let scaled = (n * n) as f64 * normalized_triangle_variance(n, t, x).unwrap();
        assert!(close(scaled, 18.0 * (x.value() - b * b), 1e-3));

        let t = th(3, 5);
        for n in [3u64, 4, 10, 100] {
            assert_eq!(
                normalized_triangle_variance(n, t, Probability::ONE).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn ratio_examples() {
        assert!(close(clustering_ratio_exact(th(1, 100)), 100.0, 1e-12));
        assert!(close(
            clustering_ratio_exact(th(2, 10)),
            5.0 * 1593.0 / 4913.0,
            1e-12
        ));
        assert_eq!(clustering_ratio_exact(th(3, 5)), 1.0);
        assert_eq!(asymptotic_ratio(th(1, 100)), 101.0);
        assert_eq!(asymptotic_ratio(th(10, 1000)), 2.0);
        assert_eq!(asymptotic_ratio(th(4, 1000)), 16.625);
    }

    #[test]
    fn ratio_closed_forms_for_small_rings() {
        for p in 2..200u64 {
            assert!(
                close(clustering_ratio_exact(th(1, p)), p as f64, 1e-10),
                "P={p}"
            );
        }
        for p in 6..200u64 {
            let pf = p as f64;
            let want =
                pf / 2.0 * (2.0 * pf.powi(3) - 4.0 * pf * pf - pf + 3.0) / (2.0 * pf - 3.0).powi(3);
            assert!(
                close(clustering_ratio_exact(th(2, p)), want, 1e-10),
                "P={p}"
            );
            assert!(want > pf / 8.0 && want < pf);
        }
        // 2K <= P < 3K: r = 0.
        let t = th(3, 7);
        let q = non_adjacency_probability(t).value();
        assert!(close(
            clustering_ratio_exact(t),
            1.0 + (q / (1.0 - q)).powi(3),
            1e-12
        ));
    }

    #[test]
    fn product_identity_examples() {
        assert!(close(
            avoidance_ratio_product(th(1, 10)).unwrap().value(),
            80.0 / 81.0,
            1e-14
        ));
        assert!(close(
            avoidance_ratio_product(th(2, 10)).unwrap().value(),
            675.0 / 784.0,
            1e-14
        ));
        assert!(close(
            avoidance_ratio_product(th(2, 6)).unwrap().value(),
            5.0 / 12.0,
            1e-14
        ));
        assert_eq!(
            avoidance_ratio_product(th(2, 5)),
            Err(Error::NeedsThreeRingsOfRoom { k: 2, p: 5 })
        );
    }

    #[test]
    fn matched_p_examples() {
        let t = th(4, 1000);
        assert!((matched_edge_probability(t, MatchMode::Exact).value() - 0.0159).abs() <= 5e-5);
        assert!(close(
            matched_edge_probability(t, MatchMode::Asymptotic).value(),
            0.016,
            1e-15
        ));
        assert_eq!(
            matched_edge_probability(th(3, 5), MatchMode::Exact).value(),
            1.0
        );
        assert_eq!(
            matched_edge_probability(th(3, 5), MatchMode::Asymptotic).value(),
            1.0
        );
    }

    #[test]
    fn edge_probability_equivalence_along_sparse_sequence() {
        // θ_m = (2, 10·2^m): K²/P → 0.
        let t = th(2, 10 * 1024);
        let scaled = edge_probability(t).value() * t.pool_size() as f64 / 4.0;
        assert!((scaled - 1.0).abs() < 0.05);
        let ratio = triangle_probability(t).value() / triangle_scaling(t);
        assert!((ratio - 1.0).abs() < 0.05);
    }

    #[test]
    fn report_is_consistent() {
        let r = AnalyticReport::compute(1000, th(4, 1000)).unwrap();
        assert!((r.c_k.value() - 0.2590).abs() <= 5e-4);
        assert!(close(r.ratio_triangles, r.ratio_clustering, 1e-12));
        assert!(close(
            r.ratio_clustering,
            clustering_ratio_exact(r.theta),
            1e-12
        ));
        assert!(r.r.value() <= r.q.value().powi(2));
        assert!(r.beta.value() >= r.p_edge.value().powi(3));
    }

    #[test]
    fn exact_path_agrees_with_floating_point() {
        use num_traits::ToPrimitive;
        for p in 1..=20u64 {
            for k in 1..=p.min(6) {
                let t = th(k, p);
                let e = exact::triangle_probability(t).to_f64().unwrap();
                assert!(close(e, triangle_probability(t).value(), 1e-13), "{t}");
            }
        }
    }
}
