use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ListAssignment;
use crate::graph::Graph;

/// Exact list-colouring count of a forest.
///
/// For a vertex `v` and colour `x ∈ L(v)`, `f(v, x)` counts colourings of the
/// subtree below `v` with `v` coloured `x`; a child `c` contributes the factor
/// `Σ f(c, ·) - f(c, x)`. The graph must be acyclic.
pub fn count_forest(g: &Graph, lists: &ListAssignment) -> BigUint {
    debug_assert!(g.is_forest());
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut roots = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        roots.push(r);
        seen[r] = true;
        let start = order.len();
        order.push(r);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    order.push(u);
                }
            }
            i += 1;
        }
    }

    // f[v][i] aligned with lists.list(v); totals[v] = Σ_i f[v][i].
    let mut f: Vec<Vec<BigUint>> = (0..n)
        .map(|v| vec![BigUint::one(); lists.size(v)])
        .collect();
    let mut totals: Vec<BigUint> = vec![BigUint::zero(); n];
    for &v in order.iter().rev() {
        let total: BigUint = f[v].iter().sum();
        totals[v] = total;
        let p = parent[v];
        if p == usize::MAX {
            continue;
        }
        let child = std::mem::take(&mut f[v]);
        let child_list = lists.list(v);
        let child_total = &totals[v];
        for (slot, &x) in f[p].iter_mut().zip(lists.list(p)) {
            if slot.is_zero() {
                continue;
            }
            let factor = match child_list.binary_search(&x) {
                Ok(i) => child_total - &child[i],
                Err(_) => child_total.clone(),
            };
            *slot *= factor;
        }
    }
    let mut count = BigUint::one();
    for r in roots {
        if totals[r].is_zero() {
            return BigUint::zero();
        }
        count *= &totals[r];
    }
    count
}
