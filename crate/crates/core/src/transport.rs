//! Exact earth-mover distance between finite measures on graph nodes.
//!
//! Masses are exact rationals. The solver rescales both measures to a common
//! integer denominator and runs successive shortest paths (Dijkstra with node
//! potentials) on the complete bipartite support network, so the optimum is
//! found without any floating-point tolerance.

use num_integer::Integer;
use num_traits::{CheckedAdd, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub mod oracle;

pub use oracle::oracle_wasserstein;

/// Exact rational used for masses, distances and curvatures.
pub type Rational = num_rational::Rational64;

/// A probability measure with finite support on node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassDistribution {
    support: Vec<usize>,
    masses: Vec<Rational>,
}

impl MassDistribution {
    /// Zero-mass entries are dropped; the rest must be positive, distinct and sum to one.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut atoms: Vec<(usize, Rational)> = Vec::new();
        for (node, mass) in entries {
            if mass.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative mass {mass} at {node}")));
            }
            if !mass.is_zero() {
                atoms.push((node, mass));
            }
        }
        atoms.sort_by_key(|&(node, _)| node);
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMeasure("duplicate support node".into()));
        }
        let total = atoms
            .iter()
            .try_fold(Rational::zero(), |acc, (_, m)| checked_add(acc, *m))?;
        if total != Rational::one() {
            return Err(Error::InvalidMeasure(format!("masses sum to {total}, not 1")));
        }
        let (support, masses) = atoms.into_iter().unzip();
        Ok(MassDistribution { support, masses })
    }

    /// Unit mass at `x`.
    pub fn dirac(x: usize) -> Self {
        MassDistribution {
            support: vec![x],
            masses: vec![Rational::one()],
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Rational)> + '_ {
        self.support.iter().copied().zip(self.masses.iter().copied())
    }

    pub fn mass_of(&self, node: usize) -> Rational {
        match self.support.binary_search(&node) {
            Ok(i) => self.masses[i],
            Err(_) => Rational::zero(),
        }
    }

    /// Least common denominator of all masses.
    pub fn common_denominator(&self) -> Result<i64> {
        self.masses.iter().try_fold(1i64, |acc, m| checked_lcm(acc, *m.denom()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    #[serde(serialize_with = "ser_rational")]
    pub mass: Rational,
}

/// A coupling between two measures together with its cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    #[serde(serialize_with = "ser_rational")]
    pub total_cost: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl TransportPlan {
    /// Mass leaving `source`.
    pub fn outflow(&self, source: usize) -> Rational {
        self.entries.iter().filter(|e| e.source == source).map(|e| e.mass).sum()
    }

    /// Mass arriving at `target`.
    pub fn inflow(&self, target: usize) -> Rational {
        self.entries.iter().filter(|e| e.target == target).map(|e| e.mass).sum()
    }
}

pub(crate) fn checked_lcm(a: i64, b: i64) -> Result<i64> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b).ok_or(Error::Overflow)
}

fn checked_add(a: Rational, b: Rational) -> Result<Rational> {
    a.checked_add(&b).ok_or(Error::Overflow)
}

/// Integer masses over a shared denominator.
pub(crate) fn scale_to_integers(mu: &MassDistribution, nu: &MassDistribution) -> Result<(i64, Vec<i64>, Vec<i64>)> {
    let denom = checked_lcm(mu.common_denominator()?, nu.common_denominator()?)?;
    let scale = |m: &MassDistribution| -> Result<Vec<i64>> {
        m.masses
            .iter()
            .map(|r| (denom / r.denom()).checked_mul(*r.numer()).ok_or(Error::Overflow))
            .collect()
    };
    Ok((denom, scale(mu)?, scale(nu)?))
}

/// Ground-distance matrix over the two supports, row-major by `mu` support.
pub(crate) fn cost_matrix<D>(mu: &MassDistribution, nu: &MassDistribution, mut dist: D) -> Result<Vec<i64>>
where
    D: FnMut(usize, usize) -> Option<u32>,
{
    let mut cost = Vec::with_capacity(mu.len() * nu.len());
    for &a in mu.support() {
        for &b in nu.support() {
            let d = dist(a, b).ok_or(Error::GroundDistanceUndefined(a, b))?;
            cost.push(i64::from(d));
        }
    }
    Ok(cost)
}

/// Minimum-cost coupling of `mu` and `nu` under the hop metric `dist`.
///
/// `dist(a, b)` must be defined for every `a` in the support of `mu` and `b`
/// in the support of `nu`; a `None` means the supports are disconnected.
pub fn wasserstein<D>(mu: &MassDistribution, nu: &MassDistribution, dist: D) -> Result<(Rational, TransportPlan)>
where
    D: FnMut(usize, usize) -> Option<u32>,
{
    let cost = cost_matrix(mu, nu, dist)?;
    let (denom, supply, demand) = scale_to_integers(mu, nu)?;
    let flow = min_cost_flow(&cost, &supply, &demand);

    let cols = nu.len();
    let mut entries = Vec::new();
    let mut total: i64 = 0;
    for (i, &src) in mu.support().iter().enumerate() {
        for (j, &dst) in nu.support().iter().enumerate() {
            let f = flow[i * cols + j];
            if f > 0 {
                total = f
                    .checked_mul(cost[i * cols + j])
                    .and_then(|c| total.checked_add(c))
                    .ok_or(Error::Overflow)?;
                entries.push(PlanEntry {
                    source: src,
                    target: dst,
                    mass: Rational::new(f, denom),
                });
            }
        }
    }
    let w = Rational::new(total, denom);
    Ok((w, TransportPlan { entries, total_cost: w }))
}

/// Successive shortest paths on the bipartite transportation network.
///
/// `cost` is `supply.len() x demand.len()` row-major, all entries non-negative,
/// and `supply` and `demand` have equal totals. Returns the flow matrix.
pub(crate) fn min_cost_flow(cost: &[i64], supply: &[i64], demand: &[i64]) -> Vec<i64> {
    const INF: i64 = i64::MAX / 4;
    let rows = supply.len();
    let cols = demand.len();
    let nodes = rows + cols;
    debug_assert_eq!(cost.len(), rows * cols);

    let mut flow = vec![0i64; rows * cols];
    let mut rem_supply = supply.to_vec();
    let mut rem_demand = demand.to_vec();
    // Potentials keep reduced costs non-negative; all-zero is valid for cost >= 0.
    let mut potential = vec![0i64; nodes];
    let mut dist = vec![INF; nodes];
    let mut pred = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];
    let mut left: i64 = supply.iter().sum();

    while left > 0 {
        // Dijkstra from a virtual source (potential 0) joined by zero-cost arcs
        // to every row with supply left. Those rows keep potential <= 0, so the
        // reduced source arcs stay non-negative.
        dist.fill(INF);
        pred.fill(usize::MAX);
        done.fill(false);
        for i in 0..rows {
            if rem_supply[i] > 0 {
                dist[i] = -potential[i];
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = INF;
            for v in 0..nodes {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < rows {
                let row = &cost[u * cols..(u + 1) * cols];
                for (j, &c) in row.iter().enumerate() {
                    let v = rows + j;
                    let nd = best + c + potential[u] - potential[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        pred[v] = u;
                    }
                }
            } else {
                let j = u - rows;
                for i in 0..rows {
                    if flow[i * cols + j] > 0 {
                        let nd = best - cost[i * cols + j] + potential[u] - potential[i];
                        if nd < dist[i] {
                            dist[i] = nd;
                            pred[i] = u;
                        }
                    }
                }
            }
        }

        // Cheapest open column by true path cost.
        let target = (0..cols)
            .filter(|&j| rem_demand[j] > 0 && dist[rows + j] < INF)
            .min_by_key(|&j| dist[rows + j] + potential[rows + j])
            .expect("balanced transportation problem always has an augmenting path");

        let mut amount = rem_demand[target];
        let mut v = rows + target;
        loop {
            let p = pred[v];
            if p == usize::MAX {
                amount = amount.min(rem_supply[v]);
                break;
            }
            if v < rows {
                // backward arc p -> v cancels flow on (v, p)
                amount = amount.min(flow[v * cols + (p - rows)]);
            }
            v = p;
        }
        let start = v;

        let mut v = rows + target;
        while v != start {
            let p = pred[v];
            if v >= rows {
                flow[p * cols + (v - rows)] += amount;
            } else {
                flow[v * cols + (p - rows)] -= amount;
            }
            v = p;
        }
        rem_supply[start] -= amount;
        rem_demand[target] -= amount;
        left -= amount;

        let reach = dist.iter().copied().filter(|&d| d < INF).max().unwrap_or(0);
        for v in 0..nodes {
            potential[v] += if dist[v] < INF { dist[v] } else { reach };
        }
    }
    flow
}
