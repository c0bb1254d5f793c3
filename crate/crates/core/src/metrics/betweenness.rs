use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};
use rayon::prelude::*;

use super::{MetricKind, MetricValues, MetricVector};
use crate::graph::{EdgeId, Graph, UNREACHED};

/// Sources per partial sum. Fixed so the floating-point reduction order does
/// not depend on the number of threads.
const SOURCE_CHUNK: usize = 32;

struct Scratch<T> {
    dist: Vec<u32>,
    order: Vec<usize>,
    sigma: Vec<T>,
    delta: Vec<T>,
}

impl<T: Num + Clone> Scratch<T> {
    fn new(n: usize) -> Self {
        Scratch {
            dist: vec![UNREACHED; n],
            order: Vec::with_capacity(n),
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
        }
    }
}

/// Adds the dependencies of every target on `source` into `acc`, indexed by
/// canonical edge position.
fn accumulate<T: Num + Clone>(g: &Graph, source: usize, s: &mut Scratch<T>, acc: &mut [T]) {
    g.bfs_into(source, None, &mut s.dist, &mut s.order);
    for &v in &s.order {
        s.sigma[v] = T::zero();
        s.delta[v] = T::zero();
    }
    s.sigma[source] = T::one();
    for &v in &s.order {
        let dv = s.dist[v];
        for &w in g.neighbors(v) {
            if s.dist[w] == dv + 1 {
                let add = s.sigma[v].clone();
                s.sigma[w] = s.sigma[w].clone() + add;
            }
        }
    }
    for &w in s.order.iter().rev() {
        let dw = s.dist[w];
        if dw == 0 {
            continue;
        }
        let coeff = (T::one() + s.delta[w].clone()) / s.sigma[w].clone();
        for &v in g.neighbors(w) {
            if s.dist[v] + 1 == dw {
                let c = s.sigma[v].clone() * coeff.clone();
                let idx = g.edge_index(EdgeId::new(v, w)).expect("neighbor edge exists");
                acc[idx] = acc[idx].clone() + c.clone();
                s.delta[v] = s.delta[v].clone() + c;
            }
        }
    }
}

/// `B(e)` summed over unordered node pairs, every shortest path counted with
/// weight `1 / sigma`. The pair joined by `e` itself contributes 1 to `e`.
pub fn edge_betweenness(g: &Graph) -> MetricVector {
    let n = g.node_count();
    let m = g.edge_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scratch = Scratch::<f64>::new(n);
            let mut acc = vec![0.0; m];
            for &s in chunk {
                accumulate(g, s, &mut scratch, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; m];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    MetricVector {
        kind: MetricKind::EdgeBetweenness,
        values: MetricValues::Edges(g.edges().iter().zip(total).map(|(&e, b)| (e, b / 2.0)).collect()),
    }
}

/// Exact rational edge betweenness, in canonical edge order.
pub fn edge_betweenness_exact(g: &Graph) -> Vec<BigRational> {
    let n = g.node_count();
    let mut scratch = Scratch::<BigRational>::new(n);
    let mut acc = vec![BigRational::zero(); g.edge_count()];
    for s in 0..n {
        accumulate(g, s, &mut scratch, &mut acc);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    acc.into_iter().map(|b| b / two.clone()).collect()
}
