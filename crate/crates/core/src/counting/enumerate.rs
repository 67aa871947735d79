use super::{Colour, CountError, ListAssignment};
use crate::graph::Graph;

/// Calls `visit` on every proper `lists`-colouring of `g`, in lexicographic
/// order of the colour vectors. Returns how many were visited.
///
/// Fails with a capacity error once more than `budget` colourings have been
/// produced.
pub fn for_each_colouring(
    g: &Graph,
    lists: &ListAssignment,
    budget: u64,
    mut visit: impl FnMut(&[Colour]),
) -> Result<u64, CountError> {
    if g.n() != lists.n() {
        return Err(CountError::InvalidInput(format!(
            "graph has {} vertices but {} lists were given",
            g.n(),
            lists.n()
        )));
    }
    let n = g.n();
    let mut colours: Vec<Colour> = vec![0; n];
    let mut choice = vec![0usize; n];
    let mut visited = 0u64;
    if n == 0 {
        visit(&colours);
        return Ok(1);
    }
    let fits = |colours: &[Colour], v: usize, x: Colour| {
        g.neighbors(v).iter().all(|&u| u >= v || colours[u] != x)
    };
    let mut v = 0usize;
    loop {
        // advance vertex v to its next admissible colour, or backtrack
        let list = lists.list(v);
        let mut i = choice[v];
        while i < list.len() && !fits(&colours, v, list[i]) {
            i += 1;
        }
        if i < list.len() {
            colours[v] = list[i];
            choice[v] = i + 1;
            if v + 1 == n {
                visited += 1;
                if visited > budget {
                    return Err(CountError::Capacity {
                        what: "colourings in an explicit enumeration",
                        limit: budget,
                        advice: "raise the enumeration budget or estimate by sampling",
                    });
                }
                visit(&colours);
            } else {
                v += 1;
                choice[v] = 0;
            }
        } else {
            if v == 0 {
                return Ok(visited);
            }
            v -= 1;
        }
    }
}
