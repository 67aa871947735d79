use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{sorted_intersection_count, Graph, GraphError};

/// Measured sparsity of a graph.
///
/// `local_density` is the largest average degree of a neighbourhood-induced
/// subgraph `G[N(v)]`, kept as an exact rational; vertices of degree 0
/// contribute an average degree of 0. `rho` is `max_degree / (local_density + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityProfile {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub local_density: Rational64,
    pub rho: Rational64,
    /// Number of edges of `G[N(v)]`, per vertex.
    pub neighbourhood_edge_counts: Vec<usize>,
    /// Geometric mean of the degrees; `None` when some vertex is isolated.
    pub geometric_mean_degree: Option<f64>,
}

impl SparsityProfile {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn rho_f64(&self) -> f64 {
        ratio_to_f64(self.rho)
    }

    pub fn local_density_f64(&self) -> f64 {
        ratio_to_f64(self.local_density)
    }
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn local_density(g: &Graph) -> SparsityProfile {
    let n = g.n();
    let degrees = g.degrees();
    let neighbourhood_edge_counts: Vec<usize> = (0..n).map(|v| neighbourhood_edges(g, v)).collect();
    let mut d = Rational64::from_integer(0);
    for v in 0..n {
        if degrees[v] > 0 {
            let avg = Rational64::new(2 * neighbourhood_edge_counts[v] as i64, degrees[v] as i64);
            if avg > d {
                d = avg;
            }
        }
    }
    let max_degree = g.max_degree();
    let rho = Rational64::from_integer(max_degree as i64) / (d + 1);
    SparsityProfile {
        geometric_mean_degree: geometric_mean(&degrees).ok(),
        degrees,
        max_degree,
        local_density: d,
        rho,
        neighbourhood_edge_counts,
    }
}

fn neighbourhood_edges(g: &Graph, v: usize) -> usize {
    if let Some(mv) = g.neighbor_mask(v) {
        let twice: u32 = g
            .neighbors(v)
            .iter()
            .map(|&u| (g.neighbor_mask(u).unwrap() & mv).count_ones())
            .sum();
        return twice as usize / 2;
    }
    let nv = g.neighbors(v);
    nv.iter()
        .map(|&u| sorted_intersection_count(g.neighbors(u), nv))
        .sum::<usize>()
        / 2
}

/// Degree of each `u ∈ N(v)` inside `G[N(v)]`, aligned with `g.neighbors(v)`.
pub fn neighbourhood_degrees(g: &Graph, v: usize) -> Vec<usize> {
    let nv = g.neighbors(v);
    match g.neighbor_mask(v) {
        Some(mv) => nv
            .iter()
            .map(|&u| (g.neighbor_mask(u).unwrap() & mv).count_ones() as usize)
            .collect(),
        None => nv
            .iter()
            .map(|&u| sorted_intersection_count(g.neighbors(u), nv))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub geometric_mean: f64,
}

/// Degrees, maximum degree and the geometric mean degree `D`.
///
/// `D` is computed in log space; an isolated vertex makes it undefined.
pub fn degree_stats(g: &Graph) -> Result<DegreeStats, GraphError> {
    let degrees = g.degrees();
    let geometric_mean = geometric_mean(&degrees)?;
    Ok(DegreeStats {
        max_degree: g.max_degree(),
        degrees,
        geometric_mean,
    })
}

fn geometric_mean(degrees: &[usize]) -> Result<f64, GraphError> {
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(GraphError::IsolatedVertex(v));
    }
    if degrees.is_empty() {
        // empty product
        return Ok(1.0);
    }
    let mean_log = degrees.iter().map(|&d| (d as f64).ln()).sum::<f64>() / degrees.len() as f64;
    Ok(mean_log.exp())
}
