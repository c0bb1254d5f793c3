use std::collections::HashMap;

use serde::Serialize;

use super::{ExperimentSeries, SeriesKind, SeriesMeta};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ricci::{rational_to_f64, CurvatureMap};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// A located node, in degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeGeo {
    pub label: String,
    pub lat: f64,
    pub lon: f64,
}

impl NodeGeo {
    pub fn new(label: impl Into<String>, lat: f64, lon: f64) -> Result<Self> {
        let g = NodeGeo {
            label: label.into(),
            lat,
            lon,
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if (-90.0..=90.0).contains(&self.lat) && (-180.0..=180.0).contains(&self.lon) {
            Ok(())
        } else {
            Err(Error::CoordinateOutOfRange {
                lat: self.lat,
                lon: self.lon,
            })
        }
    }
}

/// Great-circle distance in kilometres (haversine).
pub fn geo_distance(a: &NodeGeo, b: &NodeGeo) -> Result<f64> {
    a.check()?;
    b.check()?;
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    Ok(2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoScatter {
    pub series: ExperimentSeries,
    /// Edges with at least one endpoint lacking coordinates.
    pub skipped: usize,
}

/// `(kappa, km)` per edge whose endpoints are both located, in edge order.
pub fn geo_curvature_scatter(g: &Graph, cmap: &CurvatureMap, coords: &HashMap<usize, NodeGeo>) -> Result<GeoScatter> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut skipped = 0;
    for (e, k) in cmap.iter() {
        match (coords.get(&e.u), coords.get(&e.v)) {
            (Some(a), Some(b)) => {
                xs.push(rational_to_f64(&k));
                ys.push(geo_distance(a, b)?);
            }
            _ => skipped += 1,
        }
    }
    if xs.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut meta = SeriesMeta::for_graph(g);
    meta.alpha = Some(cmap.alpha());
    meta.notes.insert("skipped".into(), skipped.to_string());
    let series = ExperimentSeries::new(SeriesKind::Geo, "kappa", "distance_km", xs, ys, meta)?;
    Ok(GeoScatter { series, skipped })
}
