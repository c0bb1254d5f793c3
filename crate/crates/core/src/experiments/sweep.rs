use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Dsu, ExperimentSeries, SeriesKind, SeriesMeta};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::ricci::CurvatureMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn name(&self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increasing" | "inc" => Ok(Direction::Increasing),
            "decreasing" | "dec" => Ok(Direction::Decreasing),
            _ => Err(Error::InvalidParameter(format!("unknown direction {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalStrategy {
    /// Ascending curvature.
    MostNegativeFirst,
    /// Uniform shuffle of the canonical edge list.
    Random { seed: u64 },
}

impl RemovalStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            RemovalStrategy::MostNegativeFirst => "most_negative_first",
            RemovalStrategy::Random { .. } => "random",
        }
    }
}

fn check_cover(g: &Graph, cmap: &CurvatureMap) -> Result<()> {
    if cmap.covers(g) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "curvature map does not match the graph's edges".into(),
        ))
    }
}

/// Edges sorted by curvature, ties in canonical order.
fn by_curvature(cmap: &CurvatureMap, direction: Direction) -> Vec<EdgeId> {
    let mut order: Vec<(EdgeId, _)> = cmap.iter().collect();
    match direction {
        Direction::Increasing => order.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))),
        Direction::Decreasing => order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0))),
    }
    order.into_iter().map(|(e, _)| e).collect()
}

/// Adds edges to the empty graph on all of `g`'s nodes in curvature order and
/// records the component count, starting with the `(0, n)` point.
///
/// The `active_components` column counts only components among nodes that
/// already have an added edge; unlike the full count it can rise and fall.
pub fn connectivity_sweep(g: &Graph, cmap: &CurvatureMap, direction: Direction) -> Result<ExperimentSeries> {
    check_cover(g, cmap)?;
    let n = g.node_count();
    let mut dsu = Dsu::new(n);
    let mut touched = vec![false; n];
    let mut untouched = n;
    let mut xs = vec![0.0];
    let mut ys = vec![n as f64];
    let mut active = vec![0.0];
    for (i, e) in by_curvature(cmap, direction).into_iter().enumerate() {
        for x in [e.u, e.v] {
            if !std::mem::replace(&mut touched[x], true) {
                untouched -= 1;
            }
        }
        dsu.union(e.u, e.v);
        xs.push((i + 1) as f64);
        ys.push(dsu.components as f64);
        active.push((dsu.components - untouched) as f64);
    }
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(cmap.alpha());
    meta.direction = Some(direction.name().into());
    ExperimentSeries::new(SeriesKind::Connectivity, "edges_added", "components", xs, ys, meta)?
        .with_column("active_components", active)
}

fn removal_order(cmap: &CurvatureMap, strategy: RemovalStrategy) -> Vec<EdgeId> {
    match strategy {
        RemovalStrategy::MostNegativeFirst => by_curvature(cmap, Direction::Increasing),
        RemovalStrategy::Random { seed } => {
            let mut edges = cmap.edges().to_vec();
            edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            edges
        }
    }
}

/// Largest component after each removal. Computed backwards: the graph after
/// `k` removals is the last `m - k` edges of the order added to an empty graph.
fn largest_after_removals(n: usize, order: &[EdgeId]) -> Vec<usize> {
    let m = order.len();
    let mut out = vec![0; m + 1];
    let mut dsu = Dsu::new(n);
    out[m] = dsu.largest;
    for k in (0..m).rev() {
        let e = order[k];
        dsu.union(e.u, e.v);
        out[k] = dsu.largest;
    }
    out
}

/// Removes edges one at a time and records `(fraction removed, largest
/// component size)`, from `(0, initial)` to `(1, 1)`.
pub fn robustness_sweep(g: &Graph, cmap: &CurvatureMap, strategy: RemovalStrategy) -> Result<ExperimentSeries> {
    check_cover(g, cmap)?;
    let order = removal_order(cmap, strategy);
    let m = order.len();
    let largest = largest_after_removals(g.node_count(), &order);
    let xs: Vec<f64> = if m == 0 {
        vec![1.0]
    } else {
        (0..=m).map(|k| k as f64 / m as f64).collect()
    };
    let ys: Vec<f64> = largest.into_iter().map(|s| s as f64).collect();
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(cmap.alpha());
    meta.strategy = Some(strategy.name().into());
    if let RemovalStrategy::Random { seed } = strategy {
        meta.seed = Some(seed);
    }
    ExperimentSeries::new(
        SeriesKind::Robustness,
        "fraction_removed",
        "largest_component",
        xs,
        ys,
        meta,
    )
}

pub struct RobustnessTrials {
    pub trials: Vec<ExperimentSeries>,
    pub mean: ExperimentSeries,
}

/// `trials` random-removal runs with seeds `seed, seed + 1, ...` and their
/// pointwise mean.
pub fn robustness_trials(g: &Graph, cmap: &CurvatureMap, seed: u64, trials: usize) -> Result<RobustnessTrials> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let runs = (0..trials as u64)
        .map(|t| {
            robustness_sweep(
                g,
                cmap,
                RemovalStrategy::Random {
                    seed: seed.wrapping_add(t),
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ys = vec![0.0; runs[0].len()];
    for r in &runs {
        for (acc, y) in ys.iter_mut().zip(&r.ys) {
            *acc += y;
        }
    }
    for y in &mut ys {
        *y /= trials as f64;
    }
    let mut meta = runs[0].meta.clone();
    meta.notes.insert("trials".into(), trials.to_string());
    let mean = ExperimentSeries::new(
        SeriesKind::Robustness,
        "fraction_removed",
        "mean_largest_component",
        runs[0].xs.clone(),
        ys,
        meta,
    )?;
    Ok(RobustnessTrials { trials: runs, mean })
}
