//! Exact counting of proper list colourings.
//!
//! [`count_colourings`] dispatches per connected component:
//!
//! * forests use a linear dynamic program over a rooted traversal;
//! * components with identical lists on at most [`CountConfig::subset_dp_max_n`]
//!   vertices evaluate the chromatic polynomial with the ranked
//!   inclusion–exclusion subset DP;
//! * everything else goes to a bitmask backtracking counter that re-splits
//!   into components and finishes trees by DP as it descends.
//!
//! All counts are exact [`BigUint`]s.

mod backtrack;
mod chromatic;
mod colouring;
mod enumerate;
mod extensions;
mod forest;
mod lists;
mod modular;
mod star;
mod tail;

pub use chromatic::{chromatic_polynomial_eval, chromatic_polynomial_eval_with};
pub use colouring::PartialColouring;
pub use enumerate::for_each_colouring;
pub use extensions::{
    available_list, count_extensions, count_extensions_with, expected_available,
    expected_available_with,
};
pub use forest::count_forest;
pub use lists::{Colour, ListAssignment};
pub use star::{verify_star, verify_star_with, StarReport, StarStep};
pub use tail::{tail_probability, tail_probability_with};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {what} (limit {limit}); {advice}")]
    Capacity {
        what: &'static str,
        limit: u64,
        advice: &'static str,
    },
    #[error("the base graph has no proper colouring")]
    UncolourableBase,
}

impl CountError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, CountError::Capacity { .. })
    }
}

/// Budgets for the exponential algorithms. Exceeding any of them yields
/// [`CountError::Capacity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest component handled by the chromatic-polynomial subset DP.
    pub subset_dp_max_n: usize,
    /// Memory cap for the subset DP table.
    pub subset_dp_max_bytes: u64,
    /// Search-tree nodes the backtracking counter may visit.
    pub node_budget: u64,
    /// Objects an explicit enumeration may visit.
    pub enumeration_budget: u64,
    /// Split root-level branches across the rayon pool.
    pub parallel: bool,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            subset_dp_max_n: 30,
            subset_dp_max_bytes: 1 << 30,
            node_budget: 1_000_000_000,
            enumeration_budget: 1_000_000,
            parallel: true,
        }
    }
}

/// `|𝒞(G)|`: the number of proper `L`-colourings of `g`.
pub fn count_colourings(g: &Graph, lists: &ListAssignment) -> Result<BigUint, CountError> {
    count_colourings_with(g, lists, &CountConfig::default())
}

pub fn count_colourings_with(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    check_lengths(g, lists)?;
    if (0..g.n()).any(|v| lists.size(v) == 0) {
        return Ok(BigUint::zero());
    }
    if g.is_forest() {
        return Ok(count_forest(g, lists));
    }
    let mut total = BigUint::one();
    for comp in g.components() {
        let c = if comp.len() == 1 {
            BigUint::from(lists.size(comp[0]))
        } else {
            let sub = g
                .induced_subgraph(&VertexSet::from_iter(comp))
                .expect("component in range");
            count_connected(&sub.graph, &lists.restrict(&sub), cfg)?
        };
        if c.is_zero() {
            return Ok(c);
        }
        total *= c;
    }
    Ok(total)
}

fn count_connected(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    if g.is_forest() {
        return Ok(count_forest(g, lists));
    }
    if let Some(q) = lists.uniform_size() {
        if chromatic::fits_budget(g, cfg) {
            return chromatic_polynomial_eval_with(g, q as u64, cfg);
        }
    }
    backtrack::count(g, lists, cfg)
}

/// Counts with the backtracking counter only, bypassing the faster
/// specialised paths. Used to cross-check the dispatching counter.
pub fn count_by_backtracking(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    check_lengths(g, lists)?;
    let mut total = BigUint::one();
    for comp in g.components() {
        let sub = g
            .induced_subgraph(&VertexSet::from_iter(comp))
            .expect("component in range");
        total *= backtrack::count(&sub.graph, &lists.restrict(&sub), cfg)?;
    }
    Ok(total)
}

fn check_lengths(g: &Graph, lists: &ListAssignment) -> Result<(), CountError> {
    if g.n() != lists.n() {
        return Err(CountError::InvalidInput(format!(
            "graph has {} vertices but {} lists were given",
            g.n(),
            lists.n()
        )));
    }
    Ok(())
}
