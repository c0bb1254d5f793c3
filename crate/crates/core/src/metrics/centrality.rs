use rayon::prelude::*;

use super::{MetricKind, MetricValues, MetricVector};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Mean hop distance from each node to the rest of its component.
/// Nodes in singleton components get no entry.
pub fn farness(g: &Graph) -> MetricVector {
    let values: Vec<Option<f64>> = (0..g.node_count())
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(dist, order), v| {
                g.bfs_into(v, None, dist, order);
                let others = order.len() - 1;
                if others == 0 {
                    return None;
                }
                let total: u64 = order.iter().map(|&w| u64::from(dist[w])).sum();
                Some(total as f64 / others as f64)
            },
        )
        .collect();
    MetricVector {
        kind: MetricKind::Farness,
        values: MetricValues::Nodes(
            values
                .into_iter()
                .enumerate()
                .filter_map(|(v, f)| f.map(|f| (v, f)))
                .collect(),
        ),
    }
}

fn common_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Triangles through `v` over `C(deg v, 2)`.
pub fn clustering_coefficient(g: &Graph, v: usize) -> Result<f64> {
    if v >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: v,
            n: g.node_count(),
        });
    }
    let nbrs = g.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return Err(Error::ClusteringUndefined(v));
    }
    let twice_triangles: usize = nbrs.iter().map(|&w| common_count(nbrs, g.neighbors(w))).sum();
    let pairs = k * (k - 1) / 2;
    Ok((twice_triangles / 2) as f64 / pairs as f64)
}

/// Clustering coefficient of every node with degree at least 2.
pub fn clustering_vector(g: &Graph) -> MetricVector {
    MetricVector {
        kind: MetricKind::Clustering,
        values: MetricValues::Nodes(
            (0..g.node_count())
                .filter_map(|v| clustering_coefficient(g, v).ok().map(|c| (v, c)))
                .collect(),
        ),
    }
}

pub fn degree_vector(g: &Graph) -> MetricVector {
    MetricVector {
        kind: MetricKind::Degree,
        values: MetricValues::Nodes((0..g.node_count()).map(|v| (v, g.degree(v) as f64)).collect()),
    }
}
