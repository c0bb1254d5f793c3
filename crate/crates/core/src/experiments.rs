//! Experiment battery over a graph and its curvature map. Each experiment
//! yields an [`ExperimentSeries`] (or a [`Histogram`]) ready for the writers
//! in [`crate::io`].

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ricci::AlphaParam;

mod correlate;
mod geo;
mod histogram;
mod sweep;

pub use correlate::{correlate, Correlation, YTransform};
pub use geo::{geo_curvature_scatter, geo_distance, GeoScatter, NodeGeo, EARTH_RADIUS_KM};
pub use histogram::{alpha_sweep, curvature_histogram, Histogram, KAPPA_MAX, KAPPA_MIN};
pub use sweep::{
    connectivity_sweep, robustness_sweep, robustness_trials, Direction, RemovalStrategy, RobustnessTrials,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Connectivity,
    Robustness,
    Correlation,
    Geo,
    Bench,
}

impl SeriesKind {
    pub fn name(&self) -> &'static str {
        match self {
            SeriesKind::Connectivity => "connectivity",
            SeriesKind::Robustness => "robustness",
            SeriesKind::Correlation => "correlation",
            SeriesKind::Geo => "geo",
            SeriesKind::Bench => "bench",
        }
    }

    /// Sweeps have strictly increasing x; scatter kinds keep canonical edge order.
    pub fn is_sweep(&self) -> bool {
        matches!(self, SeriesKind::Connectivity | SeriesKind::Robustness)
    }
}

/// Everything needed to rerun an experiment and recognize its input.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SeriesMeta {
    pub fingerprint: String,
    pub nodes: usize,
    pub edges: usize,
    pub alpha: Option<AlphaParam>,
    pub seed: Option<u64>,
    pub direction: Option<String>,
    pub strategy: Option<String>,
    /// Free-form counters and labels (excluded points, metric name, ...).
    pub notes: BTreeMap<String, String>,
}

impl SeriesMeta {
    pub fn for_graph(g: &Graph) -> Self {
        SeriesMeta {
            fingerprint: graph_fingerprint(g),
            nodes: g.node_count(),
            edges: g.edge_count(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSeries {
    pub kind: SeriesKind,
    pub x_name: String,
    pub y_name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Further named columns aligned with `xs`.
    pub extra: Vec<(String, Vec<f64>)>,
    pub meta: SeriesMeta,
}

impl ExperimentSeries {
    pub fn new(
        kind: SeriesKind,
        x_name: impl Into<String>,
        y_name: impl Into<String>,
        xs: Vec<f64>,
        ys: Vec<f64>,
        meta: SeriesMeta,
    ) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch(xs.len(), ys.len()));
        }
        if kind.is_sweep() && xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "{} xs must be strictly increasing",
                kind.name()
            )));
        }
        Ok(ExperimentSeries {
            kind,
            x_name: x_name.into(),
            y_name: y_name.into(),
            xs,
            ys,
            extra: Vec::new(),
            meta,
        })
    }

    pub fn with_column(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.xs.len() {
            return Err(Error::LengthMismatch(self.xs.len(), values.len()));
        }
        self.extra.push((name.into(), values));
        Ok(self)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.extra.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }
}

/// Hex SHA-256 of the canonical edge-label list.
///
/// Each edge becomes the line `a\tb\n` with its two labels in byte order
/// (`a <= b`); lines are sorted bytewise and hashed in sequence. Node ids and
/// input order do not matter, only the labelled edge set.
pub fn graph_fingerprint(g: &Graph) -> String {
    let mut lines: Vec<String> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.label(e.u), g.label(e.v));
            if a <= b {
                format!("{a}\t{b}\n")
            } else {
                format!("{b}\t{a}\n")
            }
        })
        .collect();
    lines.sort_unstable();
    let mut h = Sha256::new();
    for l in &lines {
        h.update(l.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Union-find with component count and largest-component tracking.
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    pub components: usize,
    pub largest: usize,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
            largest: usize::from(n > 0),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        self.largest = self.largest.max(self.size[ra]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn fingerprint_ignores_order_and_ids() {
        let (a, _) = build_graph(&[("x", "y"), ("y", "z")]).unwrap();
        let (b, _) = build_graph(&[("z", "y"), ("y", "x"), ("x", "y")]).unwrap();
        assert_eq!(graph_fingerprint(&a), graph_fingerprint(&b));
        let (c, _) = build_graph(&[("x", "y"), ("x", "z")]).unwrap();
        assert_ne!(graph_fingerprint(&a), graph_fingerprint(&c));
        assert_eq!(graph_fingerprint(&a).len(), 64);
    }

    #[test]
    fn sweep_series_must_increase() {
        let meta = SeriesMeta::default();
        assert!(ExperimentSeries::new(
            SeriesKind::Connectivity,
            "x",
            "y",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            meta.clone()
        )
        .is_err());
        assert!(ExperimentSeries::new(
            SeriesKind::Correlation,
            "x",
            "y",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            meta.clone()
        )
        .is_ok());
        assert!(ExperimentSeries::new(SeriesKind::Geo, "x", "y", vec![0.0], vec![], meta).is_err());
    }
}
