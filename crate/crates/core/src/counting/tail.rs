use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{
    count_colourings_with, count_extensions_with, for_each_colouring, CountConfig, CountError,
    ListAssignment, PartialColouring,
};
use crate::graph::{Graph, VertexSet};

/// Exact probability that `ℓ_c(u) <= t` for `c` uniform on `𝒞(g)`, where
/// `ℓ_c(u)` counts the colours of `L(u)` unused on `N(u)`.
///
/// Colourings are grouped by their restriction `φ` to `N(u)`: each group has
/// `ℓ_φ(u) · ext(φ)` members, where `ext(φ)` counts colourings of `g - u`
/// extending `φ`. The enumeration budget bounds the number of `φ`.
pub fn tail_probability(
    g: &Graph,
    lists: &ListAssignment,
    u: usize,
    t: f64,
) -> Result<BigRational, CountError> {
    tail_probability_with(g, lists, u, t, &CountConfig::default())
}

pub fn tail_probability_with(
    g: &Graph,
    lists: &ListAssignment,
    u: usize,
    t: f64,
    cfg: &CountConfig,
) -> Result<BigRational, CountError> {
    if u >= g.n() || lists.n() != g.n() {
        return Err(CountError::InvalidInput(format!(
            "vertex {u} or list count does not match the graph"
        )));
    }
    if t.is_nan() {
        return Err(CountError::InvalidInput("threshold is NaN".into()));
    }
    let total = count_colourings_with(g, lists, cfg)?;
    if total.is_zero() {
        return Err(CountError::UncolourableBase);
    }
    let size = lists.size(u);
    if t >= size as f64 {
        return Ok(BigRational::one());
    }
    if t < size as f64 - g.degree(u) as f64 {
        return Ok(BigRational::zero());
    }

    let rest = g.without_vertex(u).expect("vertex in range");
    let rest_lists = lists.restrict(&rest);
    let around: VertexSet = g.neighbors(u).iter().copied().collect();
    let local = g.induced_subgraph(&around).expect("neighbours in range");
    let local_lists = lists.restrict(&local);

    let mut numerator = BigUint::zero();
    let mut failure = None;
    for_each_colouring(&local.graph, &local_lists, cfg.enumeration_budget, |phi| {
        if failure.is_some() {
            return;
        }
        let free = lists.list(u).iter().filter(|x| !phi.contains(x)).count();
        if free as f64 > t || free == 0 {
            return;
        }
        let mut c = PartialColouring::new(rest.graph.n());
        for (i, &x) in phi.iter().enumerate() {
            let old = local.new_to_old[i];
            c.set(rest.old_to_new[old].expect("neighbour survives"), x);
        }
        match count_extensions_with(&rest.graph, &rest_lists, &c, cfg) {
            Ok(ext) => numerator += ext * free,
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BigRational::new(
        BigInt::from(numerator),
        BigInt::from(total),
    ))
}
