//! Seeded random-graph models and the {3,7} hyperbolic grid.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha` 0.3) driven through `rand` 0.8 `gen::<f64>()`, `gen_range`
//! and `SliceRandom::shuffle`. The call order inside each generator is part of
//! its contract: the same parameters and seed give the same edge set everywhere.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

mod hyperbolic;

pub use hyperbolic::{hyperbolic_grid, ring_sizes};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Erdős–Rényi `G(n, p)`: pairs visited in lexicographic order, one draw each.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("gnp needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p must be in [0,1], got {p}")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Watts–Strogatz small world.
///
/// Ring lattice where node `i` links to `i+1 ..= i+k/2`. Then, for each offset
/// `j` in `1..=k/2` and each node `i` in order, with probability `beta` the far
/// end of `(i, i+j)` moves to a uniform node, redrawn until it is neither `i`
/// nor an existing neighbor. Nodes already adjacent to everyone are skipped.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph> {
    if !k.is_multiple_of(2) {
        return Err(invalid(format!("k must be even, got {k}")));
    }
    if k >= n {
        return Err(invalid(format!("k must be < n (k = {k}, n = {n})")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta must be in [0,1], got {beta}")));
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for i in 0..n {
        for j in 1..=k / 2 {
            let w = (i + j) % n;
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    let mut rng = rng(seed);
    for j in 1..=k / 2 {
        for i in 0..n {
            if rng.gen::<f64>() >= beta {
                continue;
            }
            if adj[i].len() >= n - 1 {
                continue;
            }
            let old = (i + j) % n;
            let new = loop {
                let w = rng.gen_range(0..n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&old);
            adj[old].remove(&i);
            adj[i].insert(new);
            adj[new].insert(i);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().filter(move |&&w| i < w).map(move |&w| (i, w)));
    Graph::from_edges(n, edges)
}

/// Uniform-ish random `d`-regular graph by incremental stub pairing.
///
/// Each round shuffles the open stubs and pairs them off; pairs that would be
/// a loop or a repeat go back into the pool. When no admissible pair is left
/// the whole attempt restarts.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d < 3 || d >= n {
        return Err(invalid(format!("need 3 <= d < n (d = {d}, n = {n})")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(invalid(format!("n*d must be even (n = {n}, d = {d})")));
    }
    let mut rng = rng(seed);
    loop {
        if let Some(edges) = try_regular(n, d, &mut rng) {
            return Graph::from_edges(n, edges.into_iter().map(|e| (e.u, e.v)));
        }
    }
}

fn try_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<BTreeSet<EdgeId>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a != b && edges.insert(EdgeId::new(a, b)) {
                continue;
            }
            *leftover.entry(a).or_default() += 1;
            *leftover.entry(b).or_default() += 1;
        }
        let open: Vec<usize> = leftover.keys().copied().collect();
        let admissible = open
            .iter()
            .enumerate()
            .any(|(i, &a)| open[i + 1..].iter().any(|&b| !edges.contains(&EdgeId::new(a, b))));
        if !leftover.is_empty() && !admissible {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c))
            .collect();
    }
    Some(edges)
}

/// Erased configuration model: shuffle all stubs, pair neighbors in the
/// shuffled order, then drop loops and repeated pairs.
pub fn configuration(degrees: &[usize], seed: u64) -> Result<Graph> {
    let total: usize = degrees.iter().sum();
    if !total.is_multiple_of(2) {
        return Err(invalid(format!("degree sum must be even, got {total}")));
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k))
        .collect();
    stubs.shuffle(&mut rng(seed));
    Graph::from_edges(degrees.len(), stubs.chunks_exact(2).map(|p| (p[0], p[1])))
}

/// Barabási–Albert preferential attachment.
///
/// Starts from `k` isolated nodes. Node `k` joins all of them; every later
/// node picks `k` distinct targets with probability proportional to current
/// degree (uniform draw from the endpoint list, repeats redrawn).
pub fn preferential_attachment(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k == 0 || n <= k {
        return Err(invalid(format!("need n > k >= 1 (n = {n}, k = {k})")));
    }
    let mut rng = rng(seed);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * k * (n - k));
    let mut edges = Vec::with_capacity(k * (n - k));
    for t in 0..k {
        edges.push((k, t));
        endpoints.extend([k, t]);
    }
    for v in k + 1..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        while chosen.len() < k {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for t in chosen {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges)
}

/// Stand-in for the Rocketfuel Exodus (AS 3967) router degree sequence: 895
/// nodes, degree sum 4142 (2071 edges), maximum degree 75. Rank-`i` degree
/// is `floor(74.75 / sqrt(i + 1) + 0.25)`, then single units are added at a
/// fixed stride from the tail until the sum is exact.
pub fn exodus_proxy_degrees() -> Vec<usize> {
    const NODES: usize = 895;
    const SUM: i64 = 4142;
    let mut d: Vec<i64> = (0..NODES)
        .map(|i| ((74.75 / ((i + 1) as f64).sqrt() + 0.25).floor() as i64).max(1))
        .collect();
    let mut diff = SUM - d.iter().sum::<i64>();
    let step = diff.signum();
    let mut k = 0;
    while diff != 0 {
        let j = NODES - 1 - (k * 7) % NODES;
        k += 1;
        if step < 0 && d[j] <= 1 {
            continue;
        }
        d[j] += step;
        diff -= step;
    }
    let mut out: Vec<usize> = d.into_iter().map(|x| x as usize).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// A model family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Gnp { n: usize, p: f64 },
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    RandomRegular { n: usize, d: usize },
    Configuration { degrees: Vec<usize> },
    PreferentialAttachment { n: usize, k: usize },
    HyperbolicGrid { rings: usize },
}

/// Family, parameters and seed: everything needed to rebuild a model graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Graph> {
        let seed = self.seed;
        match &self.family {
            Family::Gnp { n, p } => gnp(*n, *p, seed),
            Family::WattsStrogatz { n, k, beta } => watts_strogatz(*n, *k, *beta, seed),
            Family::RandomRegular { n, d } => random_regular(*n, *d, seed),
            Family::Configuration { degrees } => configuration(degrees, seed),
            Family::PreferentialAttachment { n, k } => preferential_attachment(*n, *k, seed),
            Family::HyperbolicGrid { rings } => hyperbolic_grid(*rings),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Gnp { .. } => "gnp",
            Family::WattsStrogatz { .. } => "watts_strogatz",
            Family::RandomRegular { .. } => "random_regular",
            Family::Configuration { .. } => "configuration",
            Family::PreferentialAttachment { .. } => "preferential_attachment",
            Family::HyperbolicGrid { .. } => "hyperbolic_grid",
        }
    }

    /// Builds a generator from a family name and `key=value` pairs.
    ///
    /// Configuration takes `degrees=3:2:2:1` or `preset=exodus_proxy`.
    pub fn from_params(family: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Self> {
        let get = |key: &str| -> Result<&str> {
            params
                .get(key)
                .map(String::as_str)
                .ok_or_else(|| invalid(format!("{family} needs parameter {key}")))
        };
        let int = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .map_err(|_| invalid(format!("{key} must be a non-negative integer")))
        };
        let real = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|_| invalid(format!("{key} must be a number")))
        };
        let family = match family.replace('-', "_").as_str() {
            "gnp" | "er" => Family::Gnp {
                n: int("n")?,
                p: real("p")?,
            },
            "watts_strogatz" | "ws" => Family::WattsStrogatz {
                n: int("n")?,
                k: int("k")?,
                beta: real("beta")?,
            },
            "random_regular" | "rr" => Family::RandomRegular {
                n: int("n")?,
                d: int("d")?,
            },
            "configuration" | "config" => {
                let degrees = match (params.get("preset"), params.get("degrees")) {
                    (Some(p), None) if p.replace('-', "_") == "exodus_proxy" => exodus_proxy_degrees(),
                    (Some(p), None) => return Err(invalid(format!("unknown degree preset {p}"))),
                    (None, Some(list)) => list
                        .split(':')
                        .map(|s| s.trim().parse().map_err(|_| invalid(format!("bad degree {s:?}"))))
                        .collect::<Result<_>>()?,
                    _ => return Err(invalid("configuration needs exactly one of degrees=, preset=")),
                };
                Family::Configuration { degrees }
            }
            "preferential_attachment" | "ba" => Family::PreferentialAttachment {
                n: int("n")?,
                k: int("k")?,
            },
            "hyperbolic_grid" | "h37" => Family::HyperbolicGrid { rings: int("rings")? },
            other => return Err(invalid(format!("unknown family {other}"))),
        };
        Ok(GenSpec { family, seed })
    }
}
