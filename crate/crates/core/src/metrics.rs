//! Triangle counting and clustering statistics on a concrete graph.

use serde::Serialize;

use crate::graphgen::SimpleGraph;

/// Triangle, wedge and degree counts of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleStats {
    pub total_triangles: u64,
    /// Triangles containing each node.
    pub per_node_triangles: Vec<u64>,
    /// Unordered pairs of neighbors of each node, `d(d-1)/2`.
    pub per_node_wedges: Vec<u64>,
    pub degrees: Vec<u64>,
}

impl TriangleStats {
    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_wedges(&self) -> u64 {
        self.per_node_wedges.iter().sum()
    }
}

/// Local, average and global clustering of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringStats {
    pub local: Vec<f64>,
    pub average: f64,
    pub global: f64,
}

impl ClusteringStats {
    pub fn from_stats(stats: &TriangleStats) -> Self {
        Self {
            local: local_clustering(stats),
            average: average_clustering(stats),
            global: global_clustering(stats),
        }
    }
}

/// Degree-ordered orientation: out-neighbors of `u` are the neighbors ranked
/// above it by `(degree, index)`. Lists stay sorted by node index.
fn forward_adjacency(g: &SimpleGraph) -> Vec<Vec<u32>> {
    let rank = |v: usize| (g.degree(v), v);
    (0..g.node_count())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&v| rank(v as usize) > rank(u))
                .collect()
        })
        .collect()
}

/// Visits each triangle once, as `(u, v, w)`, stopping early when the
/// callback returns `false`.
fn for_each_triangle(g: &SimpleGraph, mut visit: impl FnMut(u32, u32, u32) -> bool) {
    let out = forward_adjacency(g);
    for (u, out_u) in out.iter().enumerate() {
        for &v in out_u {
            let out_v = &out[v as usize];
            let (mut i, mut j) = (0, 0);
            while i < out_u.len() && j < out_v.len() {
                match out_u[i].cmp(&out_v[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if !visit(u as u32, v, out_u[i]) {
                            return;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
}

/// Exact triangle counts by the forward algorithm, `O(m^{3/2})`.
pub fn count_triangles(g: &SimpleGraph) -> TriangleStats {
    let n = g.node_count();
    let mut per_node_triangles = vec![0u64; n];
    let mut total_triangles = 0u64;
    for_each_triangle(g, |u, v, w| {
        total_triangles += 1;
        per_node_triangles[u as usize] += 1;
        per_node_triangles[v as usize] += 1;
        per_node_triangles[w as usize] += 1;
        true
    });
    let degrees: Vec<u64> = (0..n).map(|i| g.degree(i) as u64).collect();
    let per_node_wedges = degrees
        .iter()
        .map(|&d| d * d.saturating_sub(1) / 2)
        .collect();
    TriangleStats {
        total_triangles,
        per_node_triangles,
        per_node_wedges,
        degrees,
    }
}

pub fn has_triangle(g: &SimpleGraph) -> bool {
    let mut found = false;
    for_each_triangle(g, |_, _, _| {
        found = true;
        false
    });
    found
}

/// `C_i = T_i / (d_i(d_i-1)/2)` for `d_i >= 2`, else `0`.
pub fn local_clustering(stats: &TriangleStats) -> Vec<f64> {
    stats
        .per_node_triangles
        .iter()
        .zip(&stats.per_node_wedges)
        .map(|(&t, &w)| if w > 0 { t as f64 / w as f64 } else { 0.0 })
        .collect()
}

/// Mean of `C_i` over nodes of degree at least two; `0` when there are none.
pub fn average_clustering(stats: &TriangleStats) -> f64 {
    let (sum, count) = stats
        .per_node_triangles
        .iter()
        .zip(&stats.per_node_wedges)
        .filter(|(_, &w)| w > 0)
        .fold((0.0, 0u64), |(s, c), (&t, &w)| {
            (s + t as f64 / w as f64, c + 1)
        });
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Fraction of transitive triples, `Σ T_i / Σ d_i(d_i-1)/2`; `0` without wedges.
pub fn global_clustering(stats: &TriangleStats) -> f64 {
    let wedges = stats.total_wedges();
    if wedges == 0 {
        return 0.0;
    }
    let closed: u64 = stats.per_node_triangles.iter().sum();
    closed as f64 / wedges as f64
}
