use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::{
    count_colourings_with, Colour, CountConfig, CountError, ListAssignment, PartialColouring,
};
use crate::graph::{Graph, VertexSet};

/// `L_c(v)`: the colours of `L(v)` not used on a coloured neighbour of `v`.
pub fn available_list(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
    v: usize,
) -> Result<Vec<Colour>, CountError> {
    if v >= g.n() || c.n() != g.n() || lists.n() != g.n() {
        return Err(CountError::InvalidInput(format!(
            "vertex {v} or sizes do not match the graph"
        )));
    }
    if let Some(x) = c.get(v) {
        return Err(CountError::InvalidInput(format!(
            "vertex {v} is already coloured {x}"
        )));
    }
    Ok(available(g, lists, c, v))
}

fn available(g: &Graph, lists: &ListAssignment, c: &PartialColouring, v: usize) -> Vec<Colour> {
    lists
        .list(v)
        .iter()
        .copied()
        .filter(|&x| g.neighbors(v).iter().all(|&u| c.get(u) != Some(x)))
        .collect()
}

/// Number of proper colourings of `g` that agree with `c`.
pub fn count_extensions(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
) -> Result<BigUint, CountError> {
    count_extensions_with(g, lists, c, &CountConfig::default())
}

pub fn count_extensions_with(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    c.validate(g, lists)?;
    let free: VertexSet = (0..g.n()).filter(|&v| c.get(v).is_none()).collect();
    let sub = g.induced_subgraph(&free).expect("vertices in range");
    let reduced = ListAssignment::new(
        sub.new_to_old
            .iter()
            .map(|&v| available(g, lists, c, v))
            .collect(),
    );
    count_colourings_with(&sub.graph, &reduced, cfg)
}

/// `|𝒞(g)| / |𝒞(g - v)|`, the mean of `ℓ_c(v)` over uniform `c ∈ 𝒞(g - v)`.
pub fn expected_available(
    g: &Graph,
    lists: &ListAssignment,
    v: usize,
) -> Result<BigRational, CountError> {
    expected_available_with(g, lists, v, &CountConfig::default())
}

pub fn expected_available_with(
    g: &Graph,
    lists: &ListAssignment,
    v: usize,
    cfg: &CountConfig,
) -> Result<BigRational, CountError> {
    if v >= g.n() || lists.n() != g.n() {
        return Err(CountError::InvalidInput(format!(
            "vertex {v} or list count does not match the graph"
        )));
    }
    let sub = g.without_vertex(v).expect("vertex in range");
    let base = count_colourings_with(&sub.graph, &lists.restrict(&sub), cfg)?;
    if base == BigUint::from(0u32) {
        return Err(CountError::UncolourableBase);
    }
    let full = count_colourings_with(g, lists, cfg)?;
    Ok(BigRational::new(BigInt::from(full), BigInt::from(base)))
}
