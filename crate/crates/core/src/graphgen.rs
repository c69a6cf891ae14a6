//! Seeded sampling of key rings, random key graphs and Erdős–Rényi graphs.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{Probability, Theta};
use crate::error::{Error, Result};

/// Generator used for every sampled quantity.
pub type SampleRng = ChaCha8Rng;

/// Root of a family of reproducible random streams.
///
/// `seed.rng(i)` always yields the same ChaCha8 stream for the same root and
/// index, independent of how many other streams were drawn or in which order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Seed(u64);

impl Seed {
    pub const fn new(root: u64) -> Self {
        Self(root)
    }

    pub fn root(self) -> u64 {
        self.0
    }

    /// Generator for substream `stream` (typically a replication index).
    pub fn rng(self, stream: u64) -> SampleRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }

    /// Independent child seed, used to separate sub-experiments (table rows,
    /// sweep points) that each number their replications from zero.
    pub fn child(self, label: u64) -> Seed {
        Seed(splitmix64(
            self.0 ^ splitmix64(label.wrapping_add(0x9E37_79B9_7F4A_7C15)),
        ))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A node's key ring: `K` distinct keys from `1..=P`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyRing(Vec<u32>);

impl KeyRing {
    pub fn new(mut keys: Vec<u32>, theta: Theta) -> Result<Self> {
        keys.sort_unstable();
        if keys.len() as u64 != theta.ring_size() {
            return Err(Error::InvalidKeyRing(format!(
                "expected {} keys, got {}",
                theta.ring_size(),
                keys.len()
            )));
        }
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidKeyRing("duplicate key".into()));
        }
        if keys.first() == Some(&0) || keys.last().is_some_and(|&k| k as u64 > theta.pool_size()) {
            return Err(Error::InvalidKeyRing(format!(
                "keys must lie in 1..={}",
                theta.pool_size()
            )));
        }
        Ok(Self(keys))
    }

    #[inline]
    pub fn keys(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Merge-scan intersection test on the sorted keys.
    pub fn intersects(&self, other: &KeyRing) -> bool {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Undirected simple graph on nodes `0..n` with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n as u32).filter(|&j| j as usize != i).collect())
            .collect();
        Self { adjacency }
    }

    /// Builds a graph from 0-based edges. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    // Caller guarantees each undirected edge was pushed exactly once per side
    // or that dedup is applied here.
    fn from_adjacency_unsorted(mut adjacency: Vec<Vec<u32>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self { adjacency }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            let i = i as u32;
            list.iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Checks symmetry, sortedness, absence of self-loops and multi-edges.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        for (i, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "neighbors of {i} not strictly sorted"
                )));
            }
            for &j in list {
                if j as usize >= n {
                    return Err(Error::InvalidGraph(format!(
                        "neighbor {j} of {i} out of range"
                    )));
                }
                if j as usize == i {
                    return Err(Error::InvalidGraph(format!("self-loop at {i}")));
                }
                if !self.has_edge(j as usize, i) {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({i}, {j}) not symmetric"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::InvalidGraph("permutation length mismatch".into()));
        }
        Self::from_edges(
            n,
            self.edges()
                .map(|(i, j)| (perm[i as usize], perm[j as usize])),
        )
    }

    /// Edge-list text: header `# n=<n>`, then one `i j` line per edge,
    /// 1-based, `i < j`, lexicographically sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={}\n", self.node_count());
        for (i, j) in self.edges() {
            writeln!(out, "{} {}", i + 1, j + 1).expect("writing to a String");
        }
        out
    }

    /// Parses the format written by [`SimpleGraph::to_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("missing header".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("# n=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidGraph(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace().map(str::parse::<u32>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(i)), Some(Ok(j)), None) if i >= 1 && j >= 1 => edges.push((i - 1, j - 1)),
                _ => return Err(Error::InvalidGraph(format!("bad edge line {line:?}"))),
            }
        }
        Self::from_edges(n, edges)
    }
}

/// Draws a uniform `K`-subset of `1..=P`.
///
/// Floyd's algorithm for small rings relative to the pool (no pool-sized
/// allocation); partial Fisher–Yates when `K/P > 1/8`.
pub fn sample_key_ring<R: Rng + ?Sized>(theta: Theta, rng: &mut R) -> KeyRing {
    let k = theta.ring_size() as u32;
    let p = theta.pool_size() as u32;
    if 8 * theta.ring_size() > theta.pool_size() {
        let mut pool: Vec<u32> = (1..=p).collect();
        for i in 0..k as usize {
            let j = rng.random_range(i..p as usize);
            pool.swap(i, j);
        }
        pool.truncate(k as usize);
        pool.sort_unstable();
        KeyRing(pool)
    } else {
        let mut chosen: Vec<u32> = Vec::with_capacity(k as usize);
        for j in (p - k + 1)..=p {
            let t = rng.random_range(1..=j);
            match chosen.binary_search(&t) {
                // Every element so far is < j, so j goes last.
                Ok(_) => chosen.push(j),
                Err(pos) => chosen.insert(pos, t),
            }
        }
        KeyRing(chosen)
    }
}

/// Random key graph on the given rings: `{i, j}` is an edge iff the rings
/// of `i` and `j` share a key. Pairwise merge-scan, `O(n²K)`.
pub fn build_rkg(rings: &[KeyRing]) -> Result<SimpleGraph> {
    check_ring_sizes(rings)?;
    let n = rings.len();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rings[i].intersects(&rings[j]) {
                adjacency[i].push(j as u32);
                adjacency[j].push(i as u32);
            }
        }
    }
    Ok(SimpleGraph { adjacency })
}

/// Same graph as [`build_rkg`], built from an inverted index key → holders.
/// Preferable when the edge probability is small.
pub fn build_rkg_indexed(rings: &[KeyRing]) -> Result<SimpleGraph> {
    check_ring_sizes(rings)?;
    let mut slots: Vec<(u32, u32)> = rings
        .iter()
        .enumerate()
        .flat_map(|(node, ring)| ring.keys().iter().map(move |&key| (key, node as u32)))
        .collect();
    slots.sort_unstable();
    let mut adjacency = vec![Vec::new(); rings.len()];
    for group in slots.chunk_by(|a, b| a.0 == b.0) {
        for (a, &(_, u)) in group.iter().enumerate() {
            for &(_, v) in &group[a + 1..] {
                adjacency[u as usize].push(v);
                adjacency[v as usize].push(u);
            }
        }
    }
    Ok(SimpleGraph::from_adjacency_unsorted(adjacency))
}

fn check_ring_sizes(rings: &[KeyRing]) -> Result<()> {
    if let Some(first) = rings.first() {
        if let Some(bad) = rings.iter().find(|r| r.len() != first.len()) {
            return Err(Error::RingSizeMismatch {
                first: first.len(),
                other: bad.len(),
            });
        }
    }
    Ok(())
}

/// Samples `n` i.i.d. key rings and builds the random key graph.
pub fn sample_rkg<R: Rng + ?Sized>(n: usize, theta: Theta, rng: &mut R) -> SimpleGraph {
    let rings: Vec<KeyRing> = (0..n).map(|_| sample_key_ring(theta, rng)).collect();
    sample_graph_from_rings(&rings, theta)
}

/// Picks the cheaper of the two construction paths; both give the same graph.
pub(crate) fn sample_graph_from_rings(rings: &[KeyRing], theta: Theta) -> SimpleGraph {
    let n = rings.len() as f64;
    let k = theta.ring_size() as f64;
    let merge_cost = n * n * k;
    // Sort of n·K slots plus expected colliding pairs n²K²/P.
    let index_cost =
        4.0 * n * k * (n * k).max(2.0).log2() + n * n * k * k / theta.pool_size() as f64;
    if index_cost < merge_cost {
        build_rkg_indexed(rings).expect("rings share one theta")
    } else {
        build_rkg(rings).expect("rings share one theta")
    }
}

/// `G(n; p)`: every one of the `C(n,2)` edges present independently with
/// probability `p`. Uses geometric skipping, so cost is `O(n + m)`.
pub fn sample_er<R: Rng + ?Sized>(n: usize, p: Probability, rng: &mut R) -> SimpleGraph {
    let p = p.value();
    if p <= 0.0 || n < 2 {
        return SimpleGraph::empty(n);
    }
    if p >= 1.0 {
        return SimpleGraph::complete(n);
    }
    let log_q = (1.0 - p).ln();
    let mut adjacency = vec![Vec::new(); n];
    // Walk the lower triangle (v, w) with w < v in row-major order.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_q).floor();
        w += 1 + if skip.is_finite() {
            skip.min(1e15) as i64
        } else {
            i64::MAX / 4
        };
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            adjacency[v].push(w as u32);
            adjacency[w as usize].push(v as u32);
        }
    }
    SimpleGraph::from_adjacency_unsorted(adjacency)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(k: u64, p: u64) -> Theta {
        Theta::new(k, p).unwrap()
    }

    fn ring(keys: &[u32], t: Theta) -> KeyRing {
        KeyRing::new(keys.to_vec(), t).unwrap()
    }

    #[test]
    fn key_ring_validation() {
        let t = th(2, 4);
        assert!(KeyRing::new(vec![1, 1], t).is_err());
        assert!(KeyRing::new(vec![0, 1], t).is_err());
        assert!(KeyRing::new(vec![1, 5], t).is_err());
        assert!(KeyRing::new(vec![1], t).is_err());
        assert_eq!(ring(&[4, 2], t).keys(), &[2, 4]);
    }

    #[test]
    fn full_pool_ring() {
        let mut rng = Seed::new(1).rng(0);
        for _ in 0..10 {
            assert_eq!(sample_key_ring(th(3, 3), &mut rng).keys(), &[1, 2, 3]);
        }
    }

    #[test]
    fn ring_uniformity_single_key() {
        let mut rng = Seed::new(2).rng(0);
        let t = th(1, 2);
        let ones = (0..100_000)
            .filter(|_| sample_key_ring(t, &mut rng).keys() == [1])
            .count();
        let f = ones as f64 / 1e5;
        assert!((0.495..=0.505).contains(&f), "{f}");
    }

    #[test]
    fn ring_uniformity_over_subsets() {
        let t = th(2, 4);
        let mut rng = Seed::new(3).rng(0);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..100_000 {
            *counts
                .entry(sample_key_ring(t, &mut rng).keys().to_vec())
                .or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (k, c) in counts {
            let f = c as f64 / 1e5;
            assert!((f - 1.0 / 6.0).abs() <= 0.006, "{k:?}: {f}");
        }
    }

    #[test]
    fn floyd_branch_is_uniform() {
        // K/P = 1/8 takes Floyd's path.
        let t = th(2, 16);
        let mut rng = Seed::new(4).rng(0);
        let mut hits = [0u32; 17];
        let draws = 80_000;
        for _ in 0..draws {
            let r = sample_key_ring(t, &mut rng);
            assert_eq!(r.len(), 2);
            assert!(r.keys()[0] < r.keys()[1]);
            for &key in r.keys() {
                hits[key as usize] += 1;
            }
        }
        // Each key appears with probability 2/16.
        for (key, &h) in hits.iter().enumerate().skip(1) {
            let f = h as f64 / draws as f64;
            assert!((f - 0.125).abs() < 0.006, "key {key}: {f}");
        }
    }

    #[test]
    fn build_examples() {
        let t = th(2, 6);
        let g = build_rkg(&[ring(&[1, 2], t), ring(&[2, 3], t), ring(&[1, 3], t)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        let g = build_rkg(&[ring(&[1, 2], t), ring(&[3, 4], t), ring(&[5, 6], t)]).unwrap();
        assert_eq!(g.edge_count(), 0);

        let t3 = th(3, 4);
        let mut rng = Seed::new(5).rng(0);
        let g = sample_rkg(12, t3, &mut rng);
        assert_eq!(g, SimpleGraph::complete(12));
    }

    #[test]
    fn build_rejects_mixed_ring_sizes() {
        let a = ring(&[1, 2], th(2, 6));
        let b = ring(&[1, 2, 3], th(3, 6));
        assert_eq!(
            build_rkg(&[a.clone(), b.clone()]),
            Err(Error::RingSizeMismatch { first: 2, other: 3 })
        );
        assert!(build_rkg_indexed(&[a, b]).is_err());
    }

    #[test]
    fn both_build_paths_agree() {
        for (k, p) in [(1, 5), (2, 10), (4, 100), (8, 30), (3, 5)] {
            let t = th(k, p);
            let mut rng = Seed::new(6).rng(k * 1000 + p);
            let rings: Vec<KeyRing> = (0..60).map(|_| sample_key_ring(t, &mut rng)).collect();
            let a = build_rkg(&rings).unwrap();
            let b = build_rkg_indexed(&rings).unwrap();
            assert_eq!(a, b);
            a.validate().unwrap();
        }
    }

    #[test]
    fn single_node_graph() {
        let mut rng = Seed::new(7).rng(0);
        let g = sample_rkg(1, th(4, 1000), &mut rng);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn er_extremes() {
        let mut rng = Seed::new(8).rng(0);
        assert_eq!(sample_er(20, Probability::ZERO, &mut rng).edge_count(), 0);
        assert_eq!(
            sample_er(20, Probability::ONE, &mut rng),
            SimpleGraph::complete(20)
        );
    }

    #[test]
    fn er_edge_count_mean() {
        let p = Probability::new(0.1).unwrap();
        let n = 200;
        let reps = 200;
        let total: usize = (0..reps)
            .map(|i| {
                let g = sample_er(n, p, &mut Seed::new(9).rng(i));
                g.validate().unwrap();
                g.edge_count()
            })
            .sum();
        let mean = total as f64 / reps as f64;
        let pairs = (n * (n - 1) / 2) as f64;
        let sd = (pairs * 0.1 * 0.9 / reps as f64).sqrt();
        assert!((mean - pairs * 0.1).abs() < 4.0 * sd, "{mean}");
    }

    #[test]
    fn seeds_reproduce() {
        let t = th(4, 50);
        let a = sample_rkg(40, t, &mut Seed::new(11).rng(3));
        let b = sample_rkg(40, t, &mut Seed::new(11).rng(3));
        let c = sample_rkg(40, t, &mut Seed::new(11).rng(4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(Seed::new(11).child(0), Seed::new(11).child(1));
    }

    #[test]
    fn edge_list_format() {
        let g = SimpleGraph::from_edges(4, [(2, 0), (1, 0), (3, 2)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "# n=4\n1 2\n1 3\n3 4\n");
        assert_eq!(SimpleGraph::from_edge_list(&text).unwrap(), g);
        assert!(SimpleGraph::from_edge_list("n=4\n").is_err());
        assert!(SimpleGraph::from_edge_list("# n=2\n1 1\n").is_err());
    }

    #[test]
    fn from_edges_rejects_loops_and_out_of_range() {
        assert!(SimpleGraph::from_edges(3, [(1, 1)]).is_err());
        assert!(SimpleGraph::from_edges(3, [(1, 3)]).is_err());
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }
}
