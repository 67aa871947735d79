use serde::{Deserialize, Serialize};

use super::{Colour, CountError, ListAssignment};
use crate::graph::{Graph, VertexSet};

/// A colouring of some subset of the vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialColouring {
    assignment: Vec<Option<Colour>>,
}

impl PartialColouring {
    /// Nothing coloured.
    pub fn new(n: usize) -> Self {
        Self {
            assignment: vec![None; n],
        }
    }

    pub fn from_assignment(assignment: Vec<Option<Colour>>) -> Self {
        Self { assignment }
    }

    pub fn from_full(colours: &[Colour]) -> Self {
        Self {
            assignment: colours.iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn get(&self, v: usize) -> Option<Colour> {
        self.assignment[v]
    }

    pub fn set(&mut self, v: usize, x: Colour) {
        self.assignment[v] = Some(x);
    }

    pub fn unset(&mut self, v: usize) {
        self.assignment[v] = None;
    }

    pub fn assignment(&self) -> &[Option<Colour>] {
        &self.assignment
    }

    pub fn domain(&self) -> VertexSet {
        (0..self.n())
            .filter(|&v| self.assignment[v].is_some())
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// The colours as a plain vector when every vertex is coloured.
    pub fn to_full(&self) -> Option<Vec<Colour>> {
        self.assignment.iter().copied().collect()
    }

    /// Restriction to the vertices where `keep` holds.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            assignment: (0..self.n())
                .map(|v| if keep(v) { self.assignment[v] } else { None })
                .collect(),
        }
    }

    /// Checks list membership on the domain and that no edge inside the
    /// domain is monochromatic.
    pub fn validate(&self, g: &Graph, lists: &ListAssignment) -> Result<(), CountError> {
        if self.n() != g.n() || lists.n() != g.n() {
            return Err(CountError::InvalidInput(format!(
                "colouring covers {} vertices, graph has {}, lists {}",
                self.n(),
                g.n(),
                lists.n()
            )));
        }
        for v in 0..g.n() {
            if let Some(x) = self.assignment[v] {
                if !lists.contains(v, x) {
                    return Err(CountError::InvalidInput(format!(
                        "colour {x} not in the list of vertex {v}"
                    )));
                }
            }
        }
        for (u, v) in g.edges() {
            if let (Some(a), Some(b)) = (self.assignment[u], self.assignment[v]) {
                if a == b {
                    return Err(CountError::InvalidInput(format!(
                        "edge {u}-{v} is monochromatic (colour {a})"
                    )));
                }
            }
        }
        Ok(())
    }
}
