//! Independent oracles shared by the integration tests. None of them call
//! into the counting engine.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use sparsecolour_core::counting::{Colour, ListAssignment};
use sparsecolour_core::graph::Graph;

/// Every proper colouring, by walking the full product of the lists.
pub fn brute_force_colourings(g: &Graph, lists: &ListAssignment) -> Vec<Vec<Colour>> {
    let n = g.n();
    let mut out = Vec::new();
    if (0..n).any(|v| lists.size(v) == 0) {
        return out;
    }
    let mut idx = vec![0usize; n];
    loop {
        let c: Vec<Colour> = (0..n).map(|v| lists.list(v)[idx[v]]).collect();
        if g.edges().all(|(u, v)| c[u] != c[v]) {
            out.push(c);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            idx[i] += 1;
            if idx[i] < lists.size(i) {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_force_count(g: &Graph, lists: &ListAssignment) -> BigUint {
    BigUint::from(brute_force_colourings(g, lists).len())
}

/// `P(G, q)` by deletion and contraction on an edge list.
pub fn deletion_contraction(n: usize, edges: &[(usize, usize)], q: u64) -> BigInt {
    let mut es: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    es.sort_unstable();
    es.dedup();
    let Some(&(u, v)) = es.first() else {
        return BigInt::from(q).pow(n as u32);
    };
    let deleted: Vec<_> = es[1..].to_vec();
    let (contracted_n, contracted) = contract(n, &es, u, v);
    deletion_contraction(n, &deleted, q) - deletion_contraction(contracted_n, &contracted, q)
}

/// Merges `v` into `u`; vertices above `v` shift down by one.
pub fn contract(
    n: usize,
    edges: &[(usize, usize)],
    u: usize,
    v: usize,
) -> (usize, Vec<(usize, usize)>) {
    let relabel = |w: usize| {
        let w = if w == v { u } else { w };
        if w > v {
            w - 1
        } else {
            w
        }
    };
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    out.sort_unstable();
    out.dedup();
    (n - 1, out)
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every connected labelled graph on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect::<Vec<_>>()
        })
        .filter(|es| is_connected(n, es))
        .map(|es| Graph::from_edges(n, es).unwrap())
        .collect()
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Lists drawn from `{0, .., palette-1}`, each of size `1..=palette`.
pub fn random_lists<R: Rng>(n: usize, palette: u32, rng: &mut R) -> ListAssignment {
    ListAssignment::new(
        (0..n)
            .map(|_| {
                let mut l: Vec<Colour> = (0..palette).filter(|_| rng.gen_bool(0.6)).collect();
                if l.is_empty() {
                    l.push(rng.gen_range(0..palette));
                }
                l
            })
            .collect(),
    )
}

/// Bisection for `w e^w = z`.
pub fn w_bisection(z: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, z.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < z {
            lo = mid
        } else {
            hi = mid
        }
    }
    lo
}

/// Edges inside `N(v)`, counted directly.
pub fn neighbourhood_edges(g: &Graph, v: usize) -> usize {
    let nb = g.neighbors(v);
    nb.iter()
        .enumerate()
        .map(|(i, &a)| nb[i + 1..].iter().filter(|&&b| g.has_edge(a, b)).count())
        .sum()
}
