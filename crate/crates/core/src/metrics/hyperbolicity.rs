//! Slim-triangle hyperbolicity.
//!
//! A geodesic triangle `(a, b, c)` is δ-slim when every vertex on one side is
//! within `δ` hops of the union of the other two sides. Sides are vertex
//! sequences of shortest paths and every geodesic choice counts, so the value
//! is an integer number of hops.
//!
//! For a vertex `u` on some `a`-`b` geodesic, the worst choice of the other
//! two sides is independent per side: the `b`-`c` geodesic that stays farthest
//! from `u` is a max-min path in the shortest-path DAG rooted at `b`, found by
//! one dynamic-programming pass over BFS order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, UNREACHED};

pub const DEFAULT_EXACT_CAP: usize = 200;
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    /// All triples; refuses graphs larger than `cap` nodes.
    Exact { cap: usize },
    /// Uniform random triples; the result is a lower bound.
    Sampled { count: usize, seed: u64 },
}

impl DeltaMode {
    pub fn exact() -> Self {
        DeltaMode::Exact { cap: DEFAULT_EXACT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    /// Hops.
    pub delta: u32,
    pub diameter: u32,
    pub triples: u64,
    pub exact: bool,
}

impl DeltaReport {
    /// `delta / diameter`, 0 for a single node.
    pub fn ratio(&self) -> f64 {
        if self.diameter == 0 {
            0.0
        } else {
            f64::from(self.delta) / f64::from(self.diameter)
        }
    }
}

/// Farthest-from-`u` geodesic values for every end node `c`, for paths
/// starting at `root`: `best[c] = min(du[c], max over DAG predecessors p of best[p])`.
fn maxmin_from(g: &Graph, root_dist: &[u32], root_order: &[usize], du: &[u32], best: &mut [u32]) {
    for &c in root_order {
        let dc = root_dist[c];
        if dc == 0 {
            best[c] = du[c];
            continue;
        }
        let mut m = 0;
        for &p in g.neighbors(c) {
            if root_dist[p] + 1 == dc {
                m = m.max(best[p]);
            }
        }
        best[c] = m.min(du[c]);
    }
}

pub fn slim_triangle_delta(g: &Graph, mode: DeltaMode) -> Result<DeltaReport> {
    let n = g.node_count();
    if n == 0 || connected_components(g).0 != 1 {
        return Err(Error::Disconnected);
    }
    match mode {
        DeltaMode::Exact { cap } => {
            if n > cap {
                return Err(Error::ExactCapExceeded { n, cap });
            }
            Ok(exact(g))
        }
        DeltaMode::Sampled { count, seed } => Ok(sampled(g, count, seed)),
    }
}

fn exact(g: &Graph) -> DeltaReport {
    let n = g.node_count();
    let mut dist = vec![0u32; n * n];
    let mut orders = Vec::with_capacity(n);
    let mut buf = Vec::new();
    let mut order = Vec::new();
    for s in 0..n {
        g.bfs_into(s, None, &mut buf, &mut order);
        dist[s * n..(s + 1) * n].copy_from_slice(&buf);
        orders.push(order.clone());
    }
    let diameter = dist.iter().copied().max().unwrap_or(0);

    let delta = (0..n)
        .into_par_iter()
        .map(|u| {
            let du = &dist[u * n..(u + 1) * n];
            // table[b * n + c]: best b-c geodesic distance from u
            let mut table = vec![0u32; n * n];
            for b in 0..n {
                maxmin_from(
                    g,
                    &dist[b * n..(b + 1) * n],
                    &orders[b],
                    du,
                    &mut table[b * n..(b + 1) * n],
                );
            }
            let mut worst = 0;
            for a in 0..n {
                let da = &dist[a * n..(a + 1) * n];
                for b in a..n {
                    if da[u] + du[b] != da[b] {
                        continue;
                    }
                    let ta = &table[a * n..(a + 1) * n];
                    let tb = &table[b * n..(b + 1) * n];
                    for c in 0..n {
                        worst = worst.max(ta[c].min(tb[c]));
                    }
                }
            }
            worst
        })
        .max()
        .unwrap_or(0);

    DeltaReport {
        delta,
        diameter,
        triples: (n as u64).pow(3),
        exact: true,
    }
}

fn triangle_delta(g: &Graph, corners: [usize; 3]) -> u32 {
    let n = g.node_count();
    let mut dists = Vec::with_capacity(3);
    let mut orders = Vec::with_capacity(3);
    for &x in &corners {
        let mut d = Vec::new();
        let mut o = Vec::new();
        g.bfs_into(x, None, &mut d, &mut o);
        dists.push(d);
        orders.push(o);
    }
    let mut du = Vec::new();
    let mut scratch = Vec::new();
    let mut best_a = vec![0u32; n];
    let mut best_b = vec![0u32; n];
    let mut worst = 0;
    // side (i, j) with opposite corner k
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let (di, dj) = (&dists[i], &dists[j]);
        let c = corners[k];
        let span = di[corners[j]];
        for u in 0..n {
            if di[u] == UNREACHED || di[u] + dj[u] != span {
                continue;
            }
            g.bfs_into(u, None, &mut du, &mut scratch);
            maxmin_from(g, di, &orders[i], &du, &mut best_a);
            maxmin_from(g, dj, &orders[j], &du, &mut best_b);
            worst = worst.max(best_a[c].min(best_b[c]));
        }
    }
    worst
}

fn sampled(g: &Graph, count: usize, seed: u64) -> DeltaReport {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[usize; 3]> = (0..count)
        .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
        .collect();
    let delta = triples.par_iter().map(|&t| triangle_delta(g, t)).max().unwrap_or(0);
    // Diameter lower bound from the sampled corners' eccentricities.
    let mut diameter = 0;
    for t in triples.iter().take(64) {
        let d = g.hop_distances(t[0]);
        diameter = diameter.max(d.into_iter().max().unwrap_or(0));
    }
    DeltaReport {
        delta,
        diameter,
        triples: count as u64,
        exact: false,
    }
}
