use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ricci::{all_edge_curvatures, AlphaParam, CurvatureMap};

/// Curvature always lies in this range, so histograms share fixed bins.
pub const KAPPA_MIN: f64 = -2.0;
pub const KAPPA_MAX: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Fixed-width bins over `[KAPPA_MIN, KAPPA_MAX]`. The last bin is
    /// shortened to end at `KAPPA_MAX` when the width does not divide the range.
    pub fn empty(width: f64) -> Result<Self> {
        if width <= 0.0 || !width.is_finite() {
            return Err(Error::InvalidParameter(format!("bin width must be > 0, got {width}")));
        }
        let span = KAPPA_MAX - KAPPA_MIN;
        let bins = ((span / width) - 1e-9).ceil().max(1.0) as usize;
        // Rounded so printed edges read 0.1 rather than 0.10000000000000009.
        let mut bin_edges: Vec<f64> = (0..bins)
            .map(|i| ((KAPPA_MIN + i as f64 * width) * 1e12).round() / 1e12)
            .collect();
        bin_edges.push(KAPPA_MAX);
        Ok(Histogram {
            bin_edges,
            counts: vec![0; bins],
        })
    }

    pub fn width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    /// Bins are closed on the left; the last one is closed on both sides.
    /// Values within `1e-9` below an edge count as on it.
    pub fn bin_of(&self, x: f64) -> usize {
        let raw = ((x - KAPPA_MIN) / self.width() + 1e-9).floor();
        (raw.max(0.0) as usize).min(self.counts.len() - 1)
    }

    pub fn add(&mut self, x: f64) {
        let i = self.bin_of(x);
        self.counts[i] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Index of the most populated bin (lowest on ties).
    pub fn mode_bin(&self) -> usize {
        let best = self.counts.iter().copied().max().unwrap_or(0);
        self.counts.iter().position(|&c| c == best).unwrap_or(0)
    }

    pub fn bin_range(&self, i: usize) -> (f64, f64) {
        (self.bin_edges[i], self.bin_edges[i + 1])
    }
}

pub fn curvature_histogram(cmap: &CurvatureMap, bin_width: f64) -> Result<Histogram> {
    if cmap.is_empty() {
        return Err(Error::EmptyCurvatureMap);
    }
    let mut h = Histogram::empty(bin_width)?;
    for k in cmap.values_f64() {
        h.add(k);
    }
    Ok(h)
}

/// One histogram per `alpha`, all on the same bins.
pub fn alpha_sweep(g: &Graph, alphas: &[AlphaParam], bin_width: f64) -> Result<Vec<(AlphaParam, Histogram)>> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("alpha sweep needs at least one alpha".into()));
    }
    alphas
        .iter()
        .map(|&a| Ok((a, curvature_histogram(&all_edge_curvatures(g, a)?, bin_width)?)))
        .collect()
}
