//! Simple undirected graphs with a word-parallel fast path for small vertex counts.
//!
//! A [`Graph`] is immutable once built. Every graph keeps sorted adjacency
//! lists; graphs with at most 64 vertices additionally carry one `u64`
//! neighbour mask per vertex, which the counting engine uses for candidate
//! filtering.

mod io;
mod profile;

pub use profile::{
    degree_stats, local_density, neighbourhood_degrees, DegreeStats, SparsityProfile,
};

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Largest vertex count that gets bitmask rows.
pub const MASK_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} is isolated; the geometric mean degree is undefined")]
    IsolatedVertex(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    masks: Option<Vec<u64>>,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_adjacency(vec![Vec::new(); n])
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for row in &mut adjacency {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let n = adjacency.len();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let masks = (n <= MASK_LIMIT).then(|| {
            adjacency
                .iter()
                .map(|row| row.iter().fold(0u64, |m, &u| m | (1u64 << u)))
                .collect()
        });
        Self {
            adjacency,
            masks,
            edge_count,
            labels: None,
        }
    }

    /// Attaches opaque vertex labels (one per vertex).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCount {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Neighbour bitmask of `v`, present only when `n <= 64`.
    pub fn neighbor_mask(&self, v: usize) -> Option<u64> {
        self.masks.as_ref().map(|m| m[v])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.masks {
            Some(m) => m[u] >> v & 1 == 1,
            None => self.adjacency[u].binary_search(&v).is_ok(),
        }
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.adjacency.iter().all(|row| row.len() == degree)
    }

    /// Subgraph induced by `x`, with the index maps between old and new vertices.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        let n = self.n();
        if let Some(&bad) = x.members().iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n });
        }
        let new_to_old = x.members().to_vec();
        let mut old_to_new = vec![None; n];
        for (i, &v) in new_to_old.iter().enumerate() {
            old_to_new[v] = Some(i);
        }
        let adjacency = new_to_old
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&u| old_to_new[u])
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut graph = Self::from_sorted_adjacency(adjacency);
        if let Some(labels) = &self.labels {
            graph.labels = Some(new_to_old.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok(InducedSubgraph {
            graph,
            new_to_old,
            old_to_new,
        })
    }

    /// `G \ v`.
    pub fn without_vertex(&self, v: usize) -> Result<InducedSubgraph, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        self.induced_subgraph(&VertexSet::from_iter((0..self.n()).filter(|&u| u != v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A simple graph is a forest iff `m = n - #components`.
    pub fn is_forest(&self) -> bool {
        self.edge_count + self.components().len() == self.n()
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| {
            let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
            !sorted_intersect(a, b)
        })
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(
            other
                .adjacency
                .iter()
                .map(|row| row.iter().map(|&u| u + shift).collect()),
        );
        Self::from_sorted_adjacency(adjacency)
    }
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.edge_count)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// New index -> original vertex.
    pub new_to_old: Vec<usize>,
    /// Original vertex -> new index, `None` when not selected.
    pub old_to_new: Vec<Option<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn clique_restriction() {
        let k3 = complete(3);
        let sub = k3.induced_subgraph(&VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(sub.graph.n(), 2);
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn empty_selection() {
        let sub = cycle(5).induced_subgraph(&VertexSet::new()).unwrap();
        assert_eq!(sub.graph.n(), 0);
        assert_eq!(sub.graph.edge_count(), 0);
    }

    #[test]
    fn cycle_restriction_keeps_one_edge() {
        let c5 = cycle(5);
        let sub = c5
            .induced_subgraph(&VertexSet::from_iter([0, 1, 3]))
            .unwrap();
        assert_eq!(sub.graph.n(), 3);
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(sub.graph.degree(2), 0);
        assert_eq!(sub.new_to_old, vec![0, 1, 3]);
        assert_eq!(sub.old_to_new[3], Some(2));
        assert_eq!(sub.old_to_new[2], None);
    }

    #[test]
    fn out_of_range_selection() {
        let err = cycle(4)
            .induced_subgraph(&VertexSet::from_iter([1, 7]))
            .unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { vertex: 7, n: 4 });
    }

    #[test]
    fn rejects_self_loops_and_merges_duplicates() {
        assert_eq!(
            Graph::from_edges(3, [(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn large_graphs_use_lists() {
        let g = cycle(100);
        assert!(g.neighbor_mask(0).is_none());
        assert!(g.has_edge(99, 0));
        assert!(!g.has_edge(0, 50));
        assert!(cycle(64).neighbor_mask(63).is_some());
    }

    #[test]
    fn forests_and_triangles() {
        assert!(!cycle(4).is_forest());
        assert!(Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap().is_forest());
        assert!(cycle(5).is_triangle_free());
        assert!(!complete(3).is_triangle_free());
        assert_eq!(complete(4).disjoint_union(&cycle(3)).components().len(), 2);
    }
}
