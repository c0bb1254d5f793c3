//! Independent check for [`super::wasserstein`].
//!
//! Both measures are blown up into `D` unit atoms of mass `1/D` and matched by
//! the Hungarian algorithm on the resulting `D x D` cost matrix. Shares nothing
//! with the flow solver beyond the input types.

use super::{cost_matrix, scale_to_integers, MassDistribution, Rational};
use crate::error::{Error, Result};

/// Largest common denominator the oracle will expand.
pub const ORACLE_MAX_SCALE: i64 = 10_000;

pub fn oracle_wasserstein<D>(mu: &MassDistribution, nu: &MassDistribution, dist: D) -> Result<Rational>
where
    D: FnMut(usize, usize) -> Option<u32>,
{
    let cost = cost_matrix(mu, nu, dist)?;
    let (denom, supply, demand) = scale_to_integers(mu, nu)?;
    if denom > ORACLE_MAX_SCALE {
        return Err(Error::OracleScaleExceeded(denom));
    }
    let rows: Vec<usize> = expand(&supply);
    let cols: Vec<usize> = expand(&demand);
    let width = demand.len();
    let units = rows.len();
    let matrix: Vec<i64> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .map(|(i, j)| cost[i * width + j])
        .collect();
    Ok(Rational::new(assignment_cost(&matrix, units), denom))
}

fn expand(counts: &[i64]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
        .collect()
}

/// Minimum-cost perfect matching on an `n x n` matrix (Kuhn-Munkres, O(n^3)).
pub(crate) fn assignment_cost(cost: &[i64], n: usize) -> i64 {
    const INF: i64 = i64::MAX / 4;
    // 1-based rows/cols with a dummy column 0.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[(matched_row[j] - 1) * n + (j - 1)]).sum()
}
