//! Immutable undirected simple graphs with dense integer node ids.
//!
//! Every other module reads graphs through this type. Construction drops
//! self-loops and collapses duplicate edges; the adjacency lists are sorted
//! and the edge list is kept in canonical [`EdgeId`] order.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentinel hop count for unreachable nodes in dense distance buffers.
pub const UNREACHED: u32 = u32::MAX;

/// Canonical undirected edge key, always stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub u: usize,
    pub v: usize,
}

impl EdgeId {
    /// Orders the endpoints. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop is not an edge");
        if a < b {
            EdgeId { u: a, v: b }
        } else {
            EdgeId { u: b, v: a }
        }
    }

    pub fn other(&self, end: usize) -> usize {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<EdgeId>,
    labels: Option<Vec<String>>,
}

/// What [`build_graph`] discarded on the way in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub input_pairs: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl Graph {
    /// Builds a graph on nodes `0..n`. Self-loops and repeated pairs are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let (g, _) = Self::from_edges_with_report(n, edges)?;
        Ok(g)
    }

    fn from_edges_with_report<I>(n: usize, edges: I) -> Result<(Self, BuildReport)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut report = BuildReport::default();
        let mut list = Vec::new();
        for (a, b) in edges {
            report.input_pairs += 1;
            for x in [a, b] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if a == b {
                report.self_loops_dropped += 1;
                continue;
            }
            list.push(EdgeId::new(a, b));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        report.duplicates_dropped = before - list.len();

        let mut adj = vec![Vec::new(); n];
        for e in &list {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok((
            Graph {
                adj,
                edges: list,
                labels: None,
            },
            report,
        ))
    }

    /// Attaches string labels, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a >= self.node_count() || b >= self.node_count() {
            return false;
        }
        let (small, other) = if self.adj[a].len() <= self.adj[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[small].binary_search(&other).is_ok()
    }

    /// Position of `e` in the canonical edge list.
    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The original string id of `v`, or its integer id when unlabeled.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Label to id lookup table.
    pub fn label_index(&self) -> HashMap<String, usize> {
        (0..self.node_count()).map(|v| (self.label(v), v)).collect()
    }

    /// Isomorphic copy where node `v` becomes `perm[v]`. Labels travel with their nodes.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::InvalidParameter("permutation length".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let g = Graph::from_edges(n, self.edges.iter().map(|e| (perm[e.u], perm[e.v])))?;
        match &self.labels {
            Some(l) => {
                let mut moved = vec![String::new(); n];
                for (v, lab) in l.iter().enumerate() {
                    moved[perm[v]] = lab.clone();
                }
                g.with_labels(moved)
            }
            None => Ok(g),
        }
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v,
                n: self.node_count(),
            })
        }
    }

    /// Fills `dist` with hop counts from `source` (or [`UNREACHED`]), stopping
    /// at `max_depth`. Returns the visit order.
    pub fn bfs_into(&self, source: usize, max_depth: Option<u32>, dist: &mut Vec<u32>, order: &mut Vec<usize>) {
        dist.clear();
        dist.resize(self.node_count(), UNREACHED);
        order.clear();
        dist[source] = 0;
        order.push(source);
        let limit = max_depth.unwrap_or(UNREACHED - 1);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            let du = dist[u];
            if du >= limit {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == UNREACHED {
                    dist[w] = du + 1;
                    order.push(w);
                }
            }
        }
    }

    /// Dense hop-count vector from `source`; unreachable nodes hold [`UNREACHED`].
    pub fn hop_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = Vec::new();
        let mut order = Vec::new();
        self.bfs_into(source, None, &mut dist, &mut order);
        dist
    }
}

/// Maps string ids to `0..n` in first-appearance order and builds the graph.
pub fn build_graph<S: AsRef<str>>(raw_edges: &[(S, S)]) -> Result<(Graph, BuildReport)> {
    if raw_edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs = Vec::with_capacity(raw_edges.len());
    for (a, b) in raw_edges {
        let ia = intern(&mut ids, &mut labels, a.as_ref());
        let ib = intern(&mut ids, &mut labels, b.as_ref());
        pairs.push((ia, ib));
    }
    let (g, report) = Graph::from_edges_with_report(labels.len(), pairs)?;
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    Ok((g.with_labels(labels)?, report))
}

fn intern<'a>(ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>, s: &'a str) -> usize {
    *ids.entry(s).or_insert_with(|| {
        labels.push(s.to_string());
        labels.len() - 1
    })
}

/// Exact hop distances from `source`, truncated at `max_depth` when given.
/// Unreachable nodes are absent from the map.
pub fn bfs_distances(g: &Graph, source: usize, max_depth: Option<u32>) -> Result<BTreeMap<usize, u32>> {
    g.check_node(source)?;
    let mut dist = Vec::new();
    let mut order = Vec::new();
    g.bfs_into(source, max_depth, &mut dist, &mut order);
    Ok(order.into_iter().map(|v| (v, dist[v])).collect())
}

/// Component count and a per-node label in `0..count`, numbered by lowest member id.
pub fn connected_components(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (count, label)
}

pub fn largest_component_size(g: &Graph) -> usize {
    let (count, label) = connected_components(g);
    let mut sizes = vec![0usize; count];
    for l in label {
        sizes[l] += 1;
    }
    sizes.into_iter().max().unwrap_or(0)
}

/// Nodes of the largest component (lowest label wins ties), ascending.
pub fn largest_component(g: &Graph) -> Vec<usize> {
    let (count, label) = connected_components(g);
    let mut sizes = vec![0usize; count];
    for &l in &label {
        sizes[l] += 1;
    }
    let Some(best) = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))) else {
        return Vec::new();
    };
    (0..g.node_count()).filter(|&v| label[v] == best).collect()
}

/// Table-I style summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    /// Hops, largest component.
    pub diameter: u32,
    /// Over unordered pairs of the largest component.
    pub mean_shortest_path_length: f64,
}

/// Diameter and mean path length come from the largest component. Equal-size
/// components are ranked by (diameter, path sum) so the choice survives relabeling.
pub fn graph_stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    let (count, label) = connected_components(g);
    let mut members = vec![Vec::new(); count];
    for v in 0..n {
        members[label[v]].push(v);
    }
    let biggest = members.iter().map(Vec::len).max().unwrap_or(0);
    let (diameter, total) = members
        .iter()
        .filter(|m| m.len() == biggest)
        .map(|m| component_path_totals(g, m))
        .max()
        .unwrap_or((0, 0));
    let c = biggest as u64;
    let pairs = c * c.saturating_sub(1);
    GraphStats {
        node_count: n,
        edge_count: g.edge_count(),
        max_degree: g.max_degree(),
        avg_degree: if n == 0 {
            0.0
        } else {
            2.0 * g.edge_count() as f64 / n as f64
        },
        diameter,
        mean_shortest_path_length: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
    }
}

/// Eccentricity maximum and ordered-pair distance sum over one component.
fn component_path_totals(g: &Graph, nodes: &[usize]) -> (u32, u64) {
    nodes
        .par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(dist, order), &s| {
                g.bfs_into(s, None, dist, order);
                let mut far = 0u32;
                let mut sum = 0u64;
                for &v in order.iter() {
                    far = far.max(dist[v]);
                    sum += u64::from(dist[v]);
                }
                (far, sum)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn grid(w: usize, h: usize) -> Graph {
        let id = |x: usize, y: usize| y * w + x;
        let mut e = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    e.push((id(x, y), id(x + 1, y)));
                }
                if y + 1 < h {
                    e.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        Graph::from_edges(w * h, e).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn build_drops_loops_and_duplicates() {
        let (g, rep) = build_graph(&[("a", "b"), ("b", "a"), ("a", "a")]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(rep.duplicates_dropped, 1);
        assert_eq!(rep.self_loops_dropped, 1);
        assert_eq!(g.label(0), "a");
        assert_eq!(g.label(1), "b");
    }

    #[test]
    fn build_triangle() {
        let (g, _) = build_graph(&[("x", "y"), ("y", "z"), ("z", "x")]).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn build_empty_is_error() {
        let empty: [(&str, &str); 0] = [];
        assert!(matches!(build_graph(&empty), Err(Error::NoEdges)));
        assert!(matches!(build_graph(&[("a", "a")]), Err(Error::NoEdges)));
    }

    #[test]
    fn bfs_path() {
        let g = path(3);
        let d = bfs_distances(&g, 0, None).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        let d = bfs_distances(&g, 0, Some(1)).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        assert!(bfs_distances(&g, 3, None).is_err());
    }

    #[test]
    fn bfs_omits_unreachable() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(bfs_distances(&g, 0, None).unwrap().len(), 2);
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&complete(3)).0, 1);
        assert_eq!(connected_components(&Graph::from_edges(5, []).unwrap()).0, 5);
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let (count, label) = connected_components(&g);
        assert_eq!(count, 2);
        assert_eq!(label, vec![0, 0, 0, 1, 1]);
        assert_eq!(largest_component_size(&g), 3);
        assert_eq!(largest_component_size(&Graph::from_edges(4, []).unwrap()), 1);
        assert_eq!(largest_component_size(&path(5)), 5);
        assert_eq!(largest_component_size(&Graph::from_edges(0, []).unwrap()), 0);
    }

    // Brute-force all-pairs over the largest component.
    fn stats_oracle(g: &Graph) -> (u32, f64) {
        let (count, label) = connected_components(g);
        let mut best = (0usize, 0u32, 0u64, 0u64);
        for c in 0..count {
            let nodes: Vec<usize> = (0..g.node_count()).filter(|&v| label[v] == c).collect();
            let mut diam = 0;
            let mut sum = 0u64;
            let mut pairs = 0u64;
            for (i, &a) in nodes.iter().enumerate() {
                let d = g.hop_distances(a);
                for &b in &nodes[i + 1..] {
                    diam = diam.max(d[b]);
                    sum += u64::from(d[b]);
                    pairs += 1;
                }
            }
            best = best.max((nodes.len(), diam, sum, pairs));
        }
        let (_, diam, sum, pairs) = best;
        (diam, if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 })
    }

    #[test]
    fn stats_small_graphs() {
        let s = graph_stats(&path(3));
        assert_eq!(s.diameter, 2);
        assert!((s.mean_shortest_path_length - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(stats_oracle(&path(3)), (2, 4.0 / 3.0));

        let s = graph_stats(&complete(4));
        assert_eq!((s.diameter, s.mean_shortest_path_length), (1, 1.0));
        assert_eq!(s.avg_degree, 3.0);

        let s = graph_stats(&cycle(5));
        assert_eq!(s.diameter, 2);
        assert!((s.mean_shortest_path_length - 1.5).abs() < 1e-12);
    }

    #[test]
    fn stats_use_largest_component() {
        // P_4 plus a disjoint edge: diameter comes from the path.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap();
        let s = graph_stats(&g);
        assert_eq!(s.diameter, 3);
        assert_eq!(s.node_count, 6);
        assert!((s.mean_shortest_path_length - 10.0 / 6.0).abs() < 1e-12);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..25).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..60).prop_map(move |e| Graph::from_edges(n, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn handshake_and_adjacency(g in arb_graph()) {
            let total: usize = (0..g.node_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(total, 2 * g.edge_count());
            for e in g.edges() {
                prop_assert!(e.u < e.v);
                prop_assert!(g.neighbors(e.u).contains(&e.v));
                prop_assert!(g.neighbors(e.v).contains(&e.u));
            }
        }

        #[test]
        fn bfs_triangle_inequality(g in arb_graph(), a in 0usize..25, b in 0usize..25, c in 0usize..25) {
            let n = g.node_count();
            let (a, b, c) = (a % n, b % n, c % n);
            let da = g.hop_distances(a);
            let db = g.hop_distances(b);
            if da[b] != UNREACHED && db[c] != UNREACHED {
                prop_assert!(da[c] <= da[b] + db[c]);
            }
        }

        #[test]
        fn adding_edges_merges_at_most_one(g in arb_graph()) {
            let n = g.node_count();
            let mut prev = n;
            for k in 1..=g.edge_count() {
                let partial = Graph::from_edges(n, g.edges()[..k].iter().map(|e| (e.u, e.v))).unwrap();
                let c = connected_components(&partial).0;
                prop_assert!(c <= prev && prev - c <= 1);
                prev = c;
            }
        }

        #[test]
        fn stats_invariant_under_relabeling(g in arb_graph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut perm: Vec<usize> = (0..g.node_count()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let h = g.permuted(&perm).unwrap();
            let (s, t) = (graph_stats(&g), graph_stats(&h));
            prop_assert_eq!(s.diameter, t.diameter);
            prop_assert!((s.mean_shortest_path_length - t.mean_shortest_path_length).abs() < 1e-12);
            prop_assert_eq!(s.max_degree, t.max_degree);
            let (d, m) = stats_oracle(&g);
            prop_assert_eq!(s.diameter, d);
            prop_assert!((s.mean_shortest_path_length - m).abs() < 1e-12);
            if g.node_count() > 1 {
                prop_assert!(f64::from(s.diameter) >= s.mean_shortest_path_length);
            }
        }
    }
}
