//! Backtracking list-colouring counter on bitmasks.
//!
//! Vertices of one component are numbered `0..64` and colours `0..128`, so a
//! vertex set is a `u64` and a candidate list a `u128`. Each search node
//! drops to zero as soon as a candidate list empties, splits the uncoloured
//! vertices into components and multiplies, finishes single vertices and
//! trees directly, and otherwise branches on the uncoloured vertex that
//! comes last in a minimum-fill elimination order.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{CountConfig, CountError, ListAssignment};
use crate::graph::Graph;

const MAX_VERTICES: usize = 64;
const MAX_COLOURS: usize = 128;

/// Exact count of proper `lists`-colourings of `g` (at most 64 vertices).
pub(crate) fn count(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    let n = g.n();
    if n == 0 {
        return Ok(BigUint::one());
    }
    if n > MAX_VERTICES {
        return Err(CountError::Capacity {
            what: "vertices in one component for the backtracking counter",
            limit: MAX_VERTICES as u64,
            advice: "split the instance or use a forest/uniform-list path",
        });
    }
    let colours = lists.colours();
    if colours.len() > MAX_COLOURS {
        return Err(CountError::Capacity {
            what: "distinct colours in one component for the backtracking counter",
            limit: MAX_COLOURS as u64,
            advice: "use fewer distinct colours",
        });
    }
    let avail: Vec<u128> = (0..n)
        .map(|v| {
            lists
                .list(v)
                .iter()
                .map(|c| colours.binary_search(c).expect("colour collected"))
                .fold(0u128, |m, i| m | 1 << i)
        })
        .collect();
    let nbr: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let counter = Counter {
        position: elimination_positions(&nbr),
        nbr,
        nodes: AtomicU64::new(0),
        budget: cfg.node_budget,
        parallel: cfg.parallel,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    match counter.top::<u128>(all, &avail) {
        Ok(c) => Ok(BigUint::from(c)),
        Err(Abort::Overflow) => {
            counter.nodes.store(0, Ordering::Relaxed);
            counter
                .top::<BigUint>(all, &avail)
                .map_err(|a| a.into_error(cfg))
        }
        Err(a) => Err(a.into_error(cfg)),
    }
}

/// Position of each vertex in a greedy minimum-fill elimination order, ties
/// broken by smallest index.
fn elimination_positions(nbr: &[u64]) -> Vec<usize> {
    let n = nbr.len();
    let mut adj = nbr.to_vec();
    let mut alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut position = vec![0; n];
    for step in 0..n {
        let mut best = (usize::MAX, 0);
        for v in bits(alive) {
            let around = adj[v] & alive;
            let fill: usize = bits(around)
                .map(|u| (around & !adj[u] & !(1 << u)).count_ones() as usize)
                .sum::<usize>()
                / 2;
            if fill < best.0 {
                best = (fill, v);
            }
        }
        let v = best.1;
        let around = adj[v] & alive;
        for u in bits(around) {
            adj[u] |= around & !(1 << u);
        }
        alive &= !(1 << v);
        position[v] = step;
    }
    position
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn colour_bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let c = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(c)
        }
    })
}

enum Abort {
    Overflow,
    Budget,
}

impl Abort {
    fn into_error(self, cfg: &CountConfig) -> CountError {
        match self {
            Abort::Budget => CountError::Capacity {
                what: "search-tree nodes for the backtracking counter",
                limit: cfg.node_budget,
                advice: "raise the node budget or shrink the instance",
            },
            Abort::Overflow => unreachable!("big-integer counts cannot overflow"),
        }
    }
}

/// Count arithmetic: `u128` that reports overflow, or exact big integers.
trait Tally: Clone + Send + Sync + Sized {
    fn zero() -> Self;
    fn small(x: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Result<Self, Abort>;
    fn times(&self, other: &Self) -> Result<Self, Abort>;
    /// `self - other` where `other <= self`.
    fn minus(&self, other: &Self) -> Self;
}

impl Tally for u128 {
    fn zero() -> Self {
        0
    }
    fn small(x: u64) -> Self {
        x as u128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn plus(&self, other: &Self) -> Result<Self, Abort> {
        self.checked_add(*other).ok_or(Abort::Overflow)
    }
    fn times(&self, other: &Self) -> Result<Self, Abort> {
        self.checked_mul(*other).ok_or(Abort::Overflow)
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl Tally for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn small(x: u64) -> Self {
        BigUint::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Result<Self, Abort> {
        Ok(self + other)
    }
    fn times(&self, other: &Self) -> Result<Self, Abort> {
        Ok(self * other)
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

struct Counter {
    nbr: Vec<u64>,
    position: Vec<usize>,
    nodes: AtomicU64,
    budget: u64,
    parallel: bool,
}

impl Counter {
    fn tick(&self) -> Result<(), Abort> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            Err(Abort::Budget)
        } else {
            Ok(())
        }
    }

    /// Root call: the first branching is spread over the rayon pool.
    fn top<T: Tally>(&self, set: u64, avail: &[u128]) -> Result<T, Abort> {
        self.tick()?;
        if bits(set).any(|v| avail[v] == 0) {
            return Ok(T::zero());
        }
        let comps = self.components(set);
        if !self.parallel || comps.len() != 1 || self.is_tree(set) || set.count_ones() == 1 {
            let mut avail = avail.to_vec();
            return self.count(set, &mut avail);
        }
        let v = self.pivot(set);
        let rest = set & !(1 << v);
        let parts: Vec<Result<T, Abort>> = colour_bits(avail[v])
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| {
                let mut avail = avail.to_vec();
                for u in bits(self.nbr[v] & rest) {
                    avail[u] &= !(1 << x);
                }
                self.count(rest, &mut avail)
            })
            .collect();
        let mut total = T::zero();
        for p in parts {
            total = total.plus(&p?)?;
        }
        Ok(total)
    }

    fn count<T: Tally>(&self, set: u64, avail: &mut [u128]) -> Result<T, Abort> {
        self.tick()?;
        if bits(set).any(|v| avail[v] == 0) {
            return Ok(T::zero());
        }
        let comps = self.components(set);
        if comps.len() == 1 {
            return self.component(set, avail);
        }
        let mut total = T::small(1);
        for c in comps {
            let part: T = self.component(c, avail)?;
            if part.is_zero() {
                return Ok(part);
            }
            total = total.times(&part)?;
        }
        Ok(total)
    }

    fn component<T: Tally>(&self, set: u64, avail: &mut [u128]) -> Result<T, Abort> {
        if set.count_ones() == 1 {
            let v = set.trailing_zeros() as usize;
            return Ok(T::small(avail[v].count_ones() as u64));
        }
        if self.is_tree(set) {
            return self.tree(set, avail);
        }
        let v = self.pivot(set);
        let rest = set & !(1 << v);
        let around = self.nbr[v] & rest;
        let mut total = T::zero();
        let mut saved = [0u128; MAX_VERTICES];
        for x in colour_bits(avail[v]) {
            let bit = 1u128 << x;
            let mut dead = false;
            for u in bits(around) {
                saved[u] = avail[u];
                avail[u] &= !bit;
                dead |= avail[u] == 0;
            }
            if !dead {
                let sub = self.count::<T>(rest, avail);
                for u in bits(around) {
                    avail[u] = saved[u];
                }
                total = total.plus(&sub?)?;
            } else {
                for u in bits(around) {
                    avail[u] = saved[u];
                }
            }
        }
        Ok(total)
    }

    fn pivot(&self, set: u64) -> usize {
        bits(set)
            .max_by_key(|&v| self.position[v])
            .expect("non-empty set")
    }

    fn is_tree(&self, set: u64) -> bool {
        let twice: u32 = bits(set).map(|v| (self.nbr[v] & set).count_ones()).sum();
        twice / 2 + 1 == set.count_ones()
    }

    fn components(&self, set: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut left = set;
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let reach = bits(frontier).fold(0u64, |m, v| m | self.nbr[v]) & left & !comp;
                comp |= reach;
                frontier = reach;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// Colour counts on a tree: `f(v, x) = Π_children (Σ f(c, ·) - f(c, x))`.
    fn tree<T: Tally>(&self, set: u64, avail: &[u128]) -> Result<T, Abort> {
        let root = set.trailing_zeros() as usize;
        let mut order = vec![root];
        let mut parent = [usize::MAX; MAX_VERTICES];
        let mut seen = 1u64 << root;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for u in bits(self.nbr[v] & set & !seen) {
                seen |= 1 << u;
                parent[u] = v;
                order.push(u);
            }
            i += 1;
        }
        let mut f: Vec<Vec<(usize, T)>> = vec![Vec::new(); MAX_VERTICES];
        for &v in &order {
            f[v] = colour_bits(avail[v]).map(|x| (x, T::small(1))).collect();
        }
        let mut total = T::zero();
        for &v in order.iter().rev() {
            let child = std::mem::take(&mut f[v]);
            let mut sum = T::zero();
            for (_, val) in &child {
                sum = sum.plus(val)?;
            }
            let p = parent[v];
            if p == usize::MAX {
                total = sum;
                break;
            }
            for (x, slot) in f[p].iter_mut() {
                if slot.is_zero() {
                    continue;
                }
                let factor = match child.binary_search_by_key(x, |(c, _)| *c) {
                    Ok(i) => sum.minus(&child[i].1),
                    Err(_) => sum.clone(),
                };
                *slot = slot.times(&factor)?;
            }
        }
        Ok(total)
    }
}
