//! Graph measurements compared against curvature: edge betweenness,
//! farness, degree, clustering, slim-triangle hyperbolicity and Pearson
//! correlation.

mod betweenness;
mod centrality;
mod hyperbolicity;
mod stats;

pub use betweenness::{edge_betweenness, edge_betweenness_exact};
pub use centrality::{clustering_coefficient, clustering_vector, degree_vector, farness};
pub use hyperbolicity::{slim_triangle_delta, DeltaMode, DeltaReport, DEFAULT_EXACT_CAP, DEFAULT_SAMPLES};
pub use stats::pearson_r;

use serde::Serialize;

use crate::graph::EdgeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    EdgeBetweenness,
    Farness,
    Degree,
    Clustering,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::EdgeBetweenness => "edge_betweenness",
            MetricKind::Farness => "farness",
            MetricKind::Degree => "degree",
            MetricKind::Clustering => "clustering",
        }
    }
}

/// Values keyed by edge or by node, depending on the metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MetricValues {
    Edges(Vec<(EdgeId, f64)>),
    Nodes(Vec<(usize, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricVector {
    pub kind: MetricKind,
    pub values: MetricValues,
}

impl MetricVector {
    pub fn len(&self) -> usize {
        match &self.values {
            MetricValues::Edges(v) => v.len(),
            MetricValues::Nodes(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_value(&self, e: EdgeId) -> Option<f64> {
        match &self.values {
            MetricValues::Edges(v) => v.binary_search_by_key(&e, |&(k, _)| k).ok().map(|i| v[i].1),
            MetricValues::Nodes(_) => None,
        }
    }

    pub fn node_value(&self, node: usize) -> Option<f64> {
        match &self.values {
            MetricValues::Nodes(v) => v.binary_search_by_key(&node, |&(k, _)| k).ok().map(|i| v[i].1),
            MetricValues::Edges(_) => None,
        }
    }
}
