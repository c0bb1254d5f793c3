//! Ollivier-Ricci curvature of edges and nodes.
//!
//! For an edge `(x, y)` with unit length the curvature is `1 - W(m_x, m_y)`,
//! where `m_x` keeps mass `alpha` on `x` and spreads `1 - alpha` evenly over
//! the neighbors of `x`. Both supports sit inside the closed neighborhoods of
//! adjacent nodes, so every ground distance is at most 3 hops and can be read
//! off the adjacency structure directly.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::transport::{wasserstein, MassDistribution, Rational, TransportPlan};

/// Laziness parameter, an exact rational in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaParam(Rational);

impl AlphaParam {
    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::zero() || value > Rational::one() {
            return Err(Error::AlphaOutOfRange);
        }
        Ok(AlphaParam(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::AlphaOutOfRange);
        }
        Self::new(Rational::new(numer, denom))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for AlphaParam {
    fn default() -> Self {
        AlphaParam(Rational::new(1, 2))
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Decimal when the denominator is a power of ten divisor, else p/q.
        let d = *self.0.denom();
        let mut scale = 1i64;
        let mut digits = 0;
        while scale % d != 0 && digits < 9 {
            scale *= 10;
            digits += 1;
        }
        if scale % d == 0 {
            let scaled = self.0.numer() * (scale / d);
            if digits == 0 {
                write!(f, "{scaled}")
            } else {
                let s = format!("{:0>width$}", scaled, width = digits + 1);
                let (int, frac) = s.split_at(s.len() - digits);
                write!(f, "{int}.{}", frac.trim_end_matches('0'))
            }
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for AlphaParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `0.5`, `1`, `.25` or `1/3` exactly.
impl FromStr for AlphaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse alpha {s:?}"));
        let value = if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Rational::new(p, q)
        } else {
            parse_decimal(s).ok_or_else(bad)?
        };
        AlphaParam::new(value)
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 12 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// The lazy random-walk measure at `x`.
pub fn alpha_measure(g: &Graph, x: usize, alpha: AlphaParam) -> Result<MassDistribution> {
    if x >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: x,
            n: g.node_count(),
        });
    }
    let k = g.degree(x);
    if k == 0 {
        return Err(Error::IsolatedNode(x));
    }
    let a = alpha.value();
    let spread = (Rational::one() - a) / Rational::from(k as i64);
    MassDistribution::new(std::iter::once((x, a)).chain(g.neighbors(x).iter().map(|&w| (w, spread))))
}

/// Hop distance between `a` and `b`, given that it is known to be at most 3.
fn local_distance(g: &Graph, a: usize, b: usize) -> u32 {
    if a == b {
        0
    } else if g.has_edge(a, b) {
        1
    } else if share_neighbor(g.neighbors(a), g.neighbors(b)) {
        2
    } else {
        3
    }
}

fn share_neighbor(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// The transport instance behind one edge: both measures and the dense
/// ground-distance matrix between their supports.
#[derive(Debug, Clone)]
pub struct EdgeProblem {
    pub edge: EdgeId,
    pub source: MassDistribution,
    pub target: MassDistribution,
    /// Row-major, `source.len() x target.len()`.
    pub distances: Vec<u32>,
}

impl EdgeProblem {
    pub fn new(g: &Graph, e: EdgeId, alpha: AlphaParam) -> Result<Self> {
        if g.edge_index(e).is_none() {
            return Err(Error::UnknownEdge(e.u, e.v));
        }
        let source = alpha_measure(g, e.u, alpha)?;
        let target = alpha_measure(g, e.v, alpha)?;
        let distances = source
            .support()
            .iter()
            .flat_map(|&a| target.support().iter().map(move |&b| (a, b)))
            .map(|(a, b)| local_distance(g, a, b))
            .collect();
        Ok(EdgeProblem {
            edge: e,
            source,
            target,
            distances,
        })
    }

    /// Number of transport variables, `|supp m_x| * |supp m_y|`.
    pub fn variables(&self) -> usize {
        self.source.len() * self.target.len()
    }

    pub fn solve(&self) -> Result<(Rational, TransportPlan)> {
        let cols = self.target.len();
        let src = self.source.support();
        let dst = self.target.support();
        wasserstein(&self.source, &self.target, |a, b| {
            let i = src.binary_search(&a).ok()?;
            let j = dst.binary_search(&b).ok()?;
            Some(self.distances[i * cols + j])
        })
    }

    /// `1 - W`, the edge having unit length.
    pub fn curvature(&self) -> Result<Rational> {
        Ok(Rational::one() - self.solve()?.0)
    }
}

pub fn edge_curvature(g: &Graph, e: EdgeId, alpha: AlphaParam) -> Result<Rational> {
    EdgeProblem::new(g, e, alpha)?.curvature()
}

/// Per-edge curvature for a fixed `alpha`, in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureMap {
    alpha: AlphaParam,
    edges: Vec<EdgeId>,
    values: Vec<Rational>,
}

impl CurvatureMap {
    /// `entries` need not be sorted; duplicate edges are rejected.
    pub fn from_entries(alpha: AlphaParam, mut entries: Vec<(EdgeId, Rational)>) -> Result<Self> {
        entries.sort_by_key(|&(e, _)| e);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate edge in curvature map".into()));
        }
        let (edges, values) = entries.into_iter().unzip();
        Ok(CurvatureMap { alpha, edges, values })
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, e: EdgeId) -> Option<Rational> {
        self.edges.binary_search(&e).ok().map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, Rational)> + '_ {
        self.edges.iter().copied().zip(self.values.iter().copied())
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(rational_to_f64).collect()
    }

    /// True when every edge of `g` has a value and nothing else does.
    pub fn covers(&self, g: &Graph) -> bool {
        self.edges == g.edges()
    }

    /// Mean incident-edge curvature per node; `None` for isolated nodes.
    pub fn node_values(&self, g: &Graph) -> Vec<Option<f64>> {
        (0..g.node_count()).map(|v| node_curvature(self, g, v).ok()).collect()
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Curvature of every edge on the current rayon pool.
pub fn all_edge_curvatures(g: &Graph, alpha: AlphaParam) -> Result<CurvatureMap> {
    let values = g
        .edges()
        .par_iter()
        .map(|&e| edge_curvature(g, e, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureMap {
        alpha,
        edges: g.edges().to_vec(),
        values,
    })
}

/// Same as [`all_edge_curvatures`] on a dedicated pool of `workers` threads.
/// The result does not depend on `workers`.
pub fn all_edge_curvatures_with_workers(g: &Graph, alpha: AlphaParam, workers: usize) -> Result<CurvatureMap> {
    crate::with_workers(workers, || all_edge_curvatures(g, alpha))?
}

/// Average curvature over the edges incident to `v`.
pub fn node_curvature(cmap: &CurvatureMap, g: &Graph, v: usize) -> Result<f64> {
    if v >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: v,
            n: g.node_count(),
        });
    }
    let nbrs = g.neighbors(v);
    if nbrs.is_empty() {
        return Err(Error::IsolatedNode(v));
    }
    let mut sum = 0.0;
    for &w in nbrs {
        let e = EdgeId::new(v, w);
        let k = cmap.get(e).ok_or(Error::UnknownEdge(e.u, e.v))?;
        sum += rational_to_f64(&k);
    }
    Ok(sum / nbrs.len() as f64)
}
