//! Per-edge solver timing against the size of the transport problem.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{ExperimentSeries, SeriesKind, SeriesMeta};
use crate::graph::{EdgeId, Graph};
use crate::metrics::pearson_r;
use crate::ricci::{AlphaParam, EdgeProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeTiming {
    pub edge: EdgeId,
    /// `deg(u) * deg(v)`.
    pub degree_product: usize,
    pub variables: usize,
    /// Fastest of the repetitions, in seconds.
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub timings: Vec<EdgeTiming>,
    pub series: ExperimentSeries,
    /// Correlation between solve time and degree product.
    pub r: f64,
    pub total_seconds: f64,
}

/// Times the transport solve of every edge (`reps` runs each, minimum kept).
/// Problem setup is excluded; edges run one after another on this thread.
pub fn bench_edges(g: &Graph, alpha: AlphaParam, reps: usize) -> Result<BenchReport> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    let start = Instant::now();
    let mut timings = Vec::with_capacity(g.edge_count());
    for &e in g.edges() {
        let problem = EdgeProblem::new(g, e, alpha)?;
        let mut best = f64::INFINITY;
        for _ in 0..reps {
            let t = Instant::now();
            let out = problem.solve()?;
            best = best.min(t.elapsed().as_secs_f64());
            std::hint::black_box(out);
        }
        timings.push(EdgeTiming {
            edge: e,
            degree_product: g.degree(e.u) * g.degree(e.v),
            variables: problem.variables(),
            seconds: best,
        });
    }
    let total_seconds = start.elapsed().as_secs_f64();
    let xs: Vec<f64> = timings.iter().map(|t| t.degree_product as f64).collect();
    let ys: Vec<f64> = timings.iter().map(|t| t.seconds).collect();
    let r = pearson_r(&xs, &ys)?;
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(alpha);
    meta.notes.insert("reps".into(), reps.to_string());
    meta.notes.insert("pearson_r".into(), format!("{r:.6}"));
    let series = ExperimentSeries::new(SeriesKind::Bench, "degree_product", "seconds", xs, ys, meta)?;
    Ok(BenchReport {
        timings,
        series,
        r,
        total_seconds,
    })
}
