//! Closed-form list-size and colouring-count bounds.
//!
//! Every quantity here is a pure function of measured graph parameters. Counts
//! that overflow `f64` are carried as [`LogValue`]s.

mod formulas;
mod hypotheses;
mod lambert;
mod logvalue;
mod params;

pub use formulas::{
    geometric_count_bound, regular_count_ceiling, sparse_list_bound, triangle_free_count_bound,
    CountBound, SparseListBound,
};
pub use hypotheses::{check_list_hypotheses, HypothesisCheck, HypothesisReport};
pub use lambert::lambert_w;
pub use logvalue::{compare_at_least, LogValue, Verdict, MARGINAL_BAND};
pub use params::{geometric_demand_params, list_size_params, BoundParams, DemandMode};

use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("rho = {rho} must exceed 1")]
    RhoNotAboveOne { rho: Rational64 },
    #[error("rho = {rho} must be at least 6")]
    RhoBelowSix { rho: Rational64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl BoundError {
    /// Short machine-readable reason, used for empty cells in bound tables.
    pub fn reason_code(&self) -> &'static str {
        match self {
            BoundError::Domain { .. } => "domain",
            BoundError::RhoNotAboveOne { .. } => "rho_le_1",
            BoundError::RhoBelowSix { .. } => "rho_lt_6",
            BoundError::InvalidInput(_) => "invalid_input",
        }
    }
}
