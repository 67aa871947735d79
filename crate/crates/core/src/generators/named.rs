use super::GenError;
use crate::graph::Graph;

pub(crate) fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
}

pub(crate) fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
}

pub(crate) fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
}

pub(crate) fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid")
}

pub(crate) fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("valid")
}

pub(crate) fn cube() -> Graph {
    let edges = (0..8usize)
        .flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b))))
        .filter(|&(u, v)| u < v);
    Graph::from_edges(8, edges).expect("valid")
}

/// Builds a graph from its name:
///
/// `petersen`, `cube` (or `q3`), `Kn`, `Ka,b` (also `K_{a,b}`), `Cn`, `Pn`,
/// `starn` (`K1,n`), `emptyn`.
pub fn named_graph(name: &str) -> Result<Graph, GenError> {
    let key: String = name
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !matches!(c, '_' | '{' | '}' | ' '))
        .collect();
    let bad = || GenError::UnknownName(name.to_string());
    let number = |s: &str| s.parse::<usize>().map_err(|_| bad());
    match key.as_str() {
        "petersen" => return Ok(petersen()),
        "cube" | "q3" => return Ok(cube()),
        _ => {}
    }
    if let Some(rest) = key.strip_prefix("star") {
        return Ok(complete_bipartite(1, number(rest)?));
    }
    if let Some(rest) = key.strip_prefix("empty") {
        return Ok(Graph::empty(number(rest)?));
    }
    if let Some(rest) = key.strip_prefix('k') {
        return match rest.split_once(',') {
            Some((a, b)) => Ok(complete_bipartite(number(a)?, number(b)?)),
            None => Ok(complete(number(rest)?)),
        };
    }
    if let Some(rest) = key.strip_prefix('c') {
        let n = number(rest)?;
        if n < 3 {
            return Err(GenError::InvalidSpec(format!(
                "cycles need at least 3 vertices, got {n}"
            )));
        }
        return Ok(cycle(n));
    }
    if let Some(rest) = key.strip_prefix('p') {
        return Ok(path(number(rest)?));
    }
    Err(bad())
}
