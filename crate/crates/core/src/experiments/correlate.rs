use std::str::FromStr;

use super::{ExperimentSeries, SeriesKind, SeriesMeta};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{pearson_r, MetricValues, MetricVector};
use crate::ricci::{rational_to_f64, CurvatureMap};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum YTransform {
    #[default]
    Identity,
    /// Points with a non-positive metric are dropped and counted.
    Log10,
}

impl FromStr for YTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" | "none" => Ok(YTransform::Identity),
            "log10" | "log" => Ok(YTransform::Log10),
            _ => Err(Error::InvalidParameter(format!("unknown transform {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub series: ExperimentSeries,
    pub r: f64,
    /// Pairs dropped because the metric or the node curvature was undefined.
    pub excluded: usize,
}

/// Pairs curvature with a metric and correlates them.
///
/// Edge metrics pair with edge curvature; node metrics pair with the mean
/// curvature of the node's edges. Points follow canonical edge or node order.
pub fn correlate(g: &Graph, cmap: &CurvatureMap, metric: &MetricVector, transform: YTransform) -> Result<Correlation> {
    let mut raw: Vec<(f64, f64)> = Vec::new();
    let mut excluded = 0;
    match &metric.values {
        MetricValues::Edges(vals) => {
            for (e, k) in cmap.iter() {
                match vals.binary_search_by_key(&e, |&(id, _)| id) {
                    Ok(i) => raw.push((rational_to_f64(&k), vals[i].1)),
                    Err(_) => excluded += 1,
                }
            }
        }
        MetricValues::Nodes(vals) => {
            let node_k = cmap.node_values(g);
            for &(v, y) in vals {
                match node_k.get(v).copied().flatten() {
                    Some(k) => raw.push((k, y)),
                    None => excluded += 1,
                }
            }
        }
    }
    let mut points = Vec::with_capacity(raw.len());
    for (x, y) in raw {
        match transform {
            YTransform::Identity => points.push((x, y)),
            YTransform::Log10 if y > 0.0 => points.push((x, y.log10())),
            YTransform::Log10 => excluded += 1,
        }
    }
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let r = pearson_r(&xs, &ys)?;

    let name = metric.kind.name();
    let y_name = match transform {
        YTransform::Identity => name.to_string(),
        YTransform::Log10 => format!("log10_{name}"),
    };
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(cmap.alpha());
    meta.notes.insert("metric".into(), name.into());
    meta.notes.insert("excluded".into(), excluded.to_string());
    meta.notes.insert("pearson_r".into(), format!("{r:.9}"));
    let x_name = match metric.values {
        MetricValues::Edges(_) => "kappa",
        MetricValues::Nodes(_) => "node_kappa",
    };
    let series = ExperimentSeries::new(SeriesKind::Correlation, x_name, y_name, xs, ys, meta)?;
    Ok(Correlation { series, r, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::EdgeId;
    use crate::metrics::{degree_vector, edge_betweenness, MetricKind};
    use crate::ricci::{all_edge_curvatures, AlphaParam};

    fn cmap(g: &Graph) -> CurvatureMap {
        all_edge_curvatures(g, AlphaParam::default()).unwrap()
    }

    #[test]
    fn path_betweenness_is_anticorrelated() {
        let g = path(5);
        let c = cmap(&g);
        let expected: Vec<f64> = vec![0.5, 0.0, 0.0, 0.5];
        assert_eq!(c.values_f64(), expected);
        let out = correlate(&g, &c, &edge_betweenness(&g), YTransform::Identity).unwrap();
        assert!((out.r + 1.0).abs() < 1e-12);
        assert_eq!(out.series.ys, vec![4.0, 6.0, 6.0, 4.0]);
        assert_eq!(out.r, pearson_r(&out.series.xs, &out.series.ys).unwrap());
    }

    #[test]
    fn negated_curvature_gives_minus_one() {
        let g = grid(3, 4);
        let c = cmap(&g);
        let m = MetricVector {
            kind: MetricKind::EdgeBetweenness,
            values: MetricValues::Edges(c.iter().map(|(e, k)| (e, -rational_to_f64(&k))).collect()),
        };
        assert!((correlate(&g, &c, &m, YTransform::Identity).unwrap().r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_curvature_has_zero_variance() {
        let g = cycle(6);
        let err = correlate(&g, &cmap(&g), &edge_betweenness(&g), YTransform::Identity).unwrap_err();
        assert!(matches!(err, Error::ZeroVariance));
    }

    #[test]
    fn log_drops_non_positive() {
        let g = path(5);
        let c = cmap(&g);
        let m = MetricVector {
            kind: MetricKind::EdgeBetweenness,
            values: MetricValues::Edges(vec![
                (EdgeId::new(0, 1), 10.0),
                (EdgeId::new(1, 2), 0.0),
                (EdgeId::new(2, 3), 100.0),
                (EdgeId::new(3, 4), 1.0),
            ]),
        };
        let out = correlate(&g, &c, &m, YTransform::Log10).unwrap();
        assert_eq!(out.excluded, 1);
        assert_eq!(out.series.ys, vec![1.0, 2.0, 0.0]);
        assert_eq!(out.series.y_name, "log10_edge_betweenness");
    }

    #[test]
    fn node_metrics_skip_isolated_nodes() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let c = cmap(&g);
        let out = correlate(&g, &c, &degree_vector(&g), YTransform::Identity).unwrap();
        assert_eq!(out.excluded, 2);
        assert_eq!(out.series.len(), 4);
        assert_eq!(out.series.x_name, "node_kappa");
    }
}
