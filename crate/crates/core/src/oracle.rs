//! Brute-force enumeration over every key-ring assignment on tiny pools.
//!
//! Rings are `u64` bitmasks (bit `i` set means key `i+1`), so pools are
//! limited to 64 keys. Subsets are visited in colexicographic order, which
//! for bitmasks of fixed popcount is plain increasing integer order; the
//! visit index of a ring equals [`colex_rank`] of its mask.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::analytic::{exact, Theta};
use crate::error::{Error, Result};

/// Upper bound on enumerated assignments per oracle call.
pub const ORACLE_GUARD: u128 = 10_000_000;

/// A reduced fraction in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::ProbabilityOutOfRange(
                value.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self(value))
    }

    pub fn from_counts(hits: u128, total: u128) -> Result<Self> {
        if total == 0 {
            return Err(Error::ProbabilityOutOfRange(f64::NAN));
        }
        Self::new(BigRational::new(BigInt::from(hits), BigInt::from(total)))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

fn ring_count(theta: Theta) -> Result<u128> {
    if theta.pool_size() > 64 {
        return Err(Error::OracleGuard {
            iterations: u128::MAX,
            limit: ORACLE_GUARD,
        });
    }
    exact::binomial(theta.pool_size(), theta.ring_size())
        .to_u128()
        .ok_or(Error::OracleGuard {
            iterations: u128::MAX,
            limit: ORACLE_GUARD,
        })
}

fn guard(theta: Theta, slots: u32) -> Result<u128> {
    let count = ring_count(theta)?;
    let iterations = count.checked_pow(slots).unwrap_or(u128::MAX);
    if iterations > ORACLE_GUARD {
        return Err(Error::OracleGuard {
            iterations,
            limit: ORACLE_GUARD,
        });
    }
    Ok(iterations)
}

/// Rank of a `K`-subset mask in colexicographic order: `Σ_i C(s_i, i+1)`
/// over the set bit positions `s_0 < s_1 < ...`.
pub fn colex_rank(mask: u64) -> u128 {
    let mut rank = 0u128;
    let mut i = 0u64;
    let mut m = mask;
    while m != 0 {
        let s = m.trailing_zeros() as u64;
        rank += exact::binomial(s, i + 1).to_u128().expect("pool <= 64");
        i += 1;
        m &= m - 1;
    }
    rank
}

/// Inverse of [`colex_rank`] for `k`-subsets.
pub fn colex_unrank(mut rank: u128, k: u32) -> u64 {
    let mut mask = 0u64;
    for i in (1..=k as u64).rev() {
        // Largest c with C(c, i) <= rank.
        let mut c = i - 1;
        while exact::binomial(c + 1, i).to_u128().expect("pool <= 64") <= rank {
            c += 1;
        }
        rank -= exact::binomial(c, i).to_u128().expect("pool <= 64");
        mask |= 1 << c;
    }
    mask
}

/// All `K`-subsets of a `P`-pool as bitmasks, in colex order.
pub fn all_rings(theta: Theta) -> Result<Vec<u64>> {
    ring_count(theta)?;
    let k = theta.ring_size() as u32;
    let p = theta.pool_size() as u32;
    let mut out = Vec::new();
    let mut mask: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        out.push(mask);
        // Gosper's hack: next integer with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 {
            break;
        }
        let next = (((r ^ mask) >> 2) / c) | r;
        if p < 64 && next >> p != 0 {
            break;
        }
        mask = next;
    }
    Ok(out)
}

#[inline]
fn adjacent(a: u64, b: u64) -> bool {
    a & b != 0
}

/// Exact triangle probability by counting all ordered triples of rings.
pub fn enumerate_beta(theta: Theta) -> Result<ExactProbability> {
    let total = guard(theta, 3)?;
    let rings = all_rings(theta)?;
    let mut hits = 0u128;
    for &a in &rings {
        for &b in rings.iter().filter(|&&b| adjacent(a, b)) {
            hits += rings
                .iter()
                .filter(|&&c| adjacent(a, c) && adjacent(b, c))
                .count() as u128;
        }
    }
    ExactProbability::from_counts(hits, total)
}

/// Exact `E[χ123 χ124]`: both `{1,2,3}` and `{1,2,4}` are triangles.
pub fn enumerate_cross_moment(theta: Theta) -> Result<ExactProbability> {
    let total = guard(theta, 4)?;
    let rings = all_rings(theta)?;
    let mut hits = 0u128;
    for &a in &rings {
        for &b in rings.iter().filter(|&&b| adjacent(a, b)) {
            // Nodes 3 and 4 are i.i.d. given rings 1 and 2.
            let closers = rings
                .iter()
                .filter(|&&c| adjacent(a, c) && adjacent(b, c))
                .count() as u128;
            hits += closers * closers;
        }
    }
    ExactProbability::from_counts(hits, total)
}

/// Exact distribution of the triangle count over all ring assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCountDistribution {
    pub n: u64,
    pub theta: Theta,
    /// Number of assignments producing each triangle count.
    pub counts: BTreeMap<u64, u128>,
    pub assignments: u128,
}

impl TriangleCountDistribution {
    pub fn probability(&self, triangles: u64) -> ExactProbability {
        let hits = self.counts.get(&triangles).copied().unwrap_or(0);
        ExactProbability::from_counts(hits, self.assignments).expect("assignments > 0")
    }

    fn raw_moment(&self, power: u32) -> BigRational {
        let sum: BigUint = self
            .counts
            .iter()
            .map(|(&t, &c)| BigUint::from(t).pow(power) * BigUint::from(c))
            .sum();
        BigRational::new(sum.into(), BigUint::from(self.assignments).into())
    }

    pub fn mean(&self) -> BigRational {
        self.raw_moment(1)
    }

    pub fn second_moment(&self) -> BigRational {
        self.raw_moment(2)
    }
}

pub fn enumerate_triangle_count_distribution(
    n: u64,
    theta: Theta,
) -> Result<TriangleCountDistribution> {
    let assignments = guard(theta, n.min(u32::MAX as u64) as u32)?;
    let rings = all_rings(theta)?;
    let n = n as usize;
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| (i, j, k))))
        .collect();
    let mut counts = BTreeMap::new();
    let mut digits = vec![0usize; n];
    let mut adj = vec![false; n * n];
    loop {
        for i in 0..n {
            for j in (i + 1)..n {
                adj[i * n + j] = adjacent(rings[digits[i]], rings[digits[j]]);
            }
        }
        let t = triples
            .iter()
            .filter(|&&(i, j, k)| adj[i * n + j] && adj[i * n + k] && adj[j * n + k])
            .count() as u64;
        *counts.entry(t).or_insert(0u128) += 1;

        // Odometer step; node 0 is the fastest digit.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(TriangleCountDistribution {
                    n: n as u64,
                    theta,
                    counts,
                    assignments,
                });
            }
            digits[pos] += 1;
            if digits[pos] < rings.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
