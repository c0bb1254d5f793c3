//! Finite patches of the order-7 triangular tiling, grown ring by ring.
//!
//! Ring 1 is a 7-cycle around the center. To close a ring, each boundary
//! vertex `v` of current degree `d` gets a fan of `6 - d` new triangles and
//! each boundary edge gets one apex vertex, so `v` ends with degree 7. The new
//! vertices, in fan order, form the next boundary cycle.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tiling patch with `rings` rings around a central vertex. Every vertex not
/// on the outermost ring has degree 7 and every bounded face is a triangle.
pub fn hyperbolic_grid(rings: usize) -> Result<Graph> {
    if rings == 0 {
        return Err(Error::InvalidParameter("hyperbolic_grid needs rings >= 1".into()));
    }
    let mut edges = Vec::new();
    let mut degree = vec![0usize; 8];
    let link = |edges: &mut Vec<(usize, usize)>, degree: &mut Vec<usize>, a: usize, b: usize| {
        edges.push((a, b));
        degree[a] += 1;
        degree[b] += 1;
    };

    let mut boundary: Vec<usize> = (1..=7).collect();
    for &v in &boundary {
        link(&mut edges, &mut degree, 0, v);
    }
    close_cycle(&boundary, |a, b| link(&mut edges, &mut degree, a, b));

    let mut next_id = 8;
    for _ in 1..rings {
        let len = boundary.len();
        let start: Vec<usize> = boundary.iter().map(|&v| degree[v]).collect();
        let mut ring = Vec::new();
        for i in 0..len {
            let v = boundary[i];
            let w = boundary[(i + 1) % len];
            let fan = 6 - start[i];
            for _ in 1..fan {
                degree.push(0);
                link(&mut edges, &mut degree, v, next_id);
                ring.push(next_id);
                next_id += 1;
            }
            degree.push(0);
            link(&mut edges, &mut degree, v, next_id);
            link(&mut edges, &mut degree, w, next_id);
            ring.push(next_id);
            next_id += 1;
        }
        close_cycle(&ring, |a, b| link(&mut edges, &mut degree, a, b));
        boundary = ring;
    }
    Graph::from_edges(next_id, edges)
}

fn close_cycle(ring: &[usize], mut link: impl FnMut(usize, usize)) {
    for i in 0..ring.len() {
        link(ring[i], ring[(i + 1) % ring.len()]);
    }
}

/// Vertex count of each ring, center first: `1, 7, 21, 56, ...`.
pub fn ring_sizes(rings: usize) -> Vec<usize> {
    let mut sizes = vec![1];
    if rings == 0 {
        return sizes;
    }
    // Boundary vertices with one inward neighbor (degree 3) and with two (degree 4).
    let (mut single, mut double) = (7usize, 0usize);
    sizes.push(7);
    for _ in 1..rings {
        let apexes = single + double;
        let fans = 2 * single + double;
        sizes.push(apexes + fans);
        single = fans;
        double = apexes;
    }
    sizes
}
