use super::GenError;
use crate::graph::Graph;

/// Most doubling rounds [`regularize`] performs.
pub const MAX_ROUNDS: usize = 10;

/// A `degree`-regular graph `H` and a map `φ: V(H) -> V(g)`.
///
/// Each round takes two disjoint copies of the current graph and joins every
/// vertex of degree below `degree` to its twin. A twin has no other
/// neighbour in common with its partner, so the number of edges inside each
/// neighbourhood is preserved: `e(H[N(x)]) = e(g[N(φ(x))])`.
pub fn regularize(g: &Graph, degree: usize) -> Result<(Graph, Vec<usize>), GenError> {
    if degree < g.max_degree() {
        return Err(GenError::InvalidSpec(format!(
            "target degree {degree} is below the maximum degree {}",
            g.max_degree()
        )));
    }
    let mut h = g.clone();
    let mut phi: Vec<usize> = (0..g.n()).collect();
    let mut rounds = 0;
    while !h.is_regular(degree) {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(GenError::Exhausted {
                what: "doubling rounds",
                attempts: MAX_ROUNDS as u64,
            });
        }
        let n = h.n();
        let joins: Vec<(usize, usize)> = (0..n)
            .filter(|&v| h.degree(v) < degree)
            .map(|v| (v, v + n))
            .collect();
        let edges: Vec<(usize, usize)> = h
            .edges()
            .flat_map(|(u, v)| [(u, v), (u + n, v + n)])
            .chain(joins)
            .collect();
        h = Graph::from_edges(2 * n, edges).expect("indices in range");
        phi.extend_from_within(..);
    }
    Ok((h, phi))
}
