//! Chromatic polynomial evaluation by inclusion–exclusion over vertex subsets.
//!
//! For uniform lists of size `q`,
//!
//! ```text
//! P(G, q) = Σ_{S ⊆ V} (-1)^{n-|S|} [z^n] I_S(z)^q
//! ```
//!
//! where `I_S(z)` counts the independent sets of `G[S]` by size: the
//! coefficient counts `q`-tuples of independent sets inside `S` of total size
//! `n`, and the alternating sum keeps exactly those covering `V`, which are
//! then pairwise disjoint. `I_S` comes from `I_S = I_{S-v} + z·I_{S-N[v]}`.
//! The power-series coefficient is computed modulo several primes near
//! `2^61` and the exact value recovered by CRT.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use super::modular::{crt, primes_for_bits, Prime};
use super::{CountConfig, CountError};
use crate::graph::{Graph, VertexSet};

/// `P(g, q)`, the number of proper colourings with `q` colours.
pub fn chromatic_polynomial_eval(g: &Graph, q: u64) -> Result<BigUint, CountError> {
    chromatic_polynomial_eval_with(g, q, &CountConfig::default())
}

pub fn chromatic_polynomial_eval_with(
    g: &Graph,
    q: u64,
    cfg: &CountConfig,
) -> Result<BigUint, CountError> {
    if g.n() == 0 {
        return Ok(BigUint::one());
    }
    if q == 0 {
        return Ok(BigUint::zero());
    }
    let mut total = BigUint::one();
    for comp in g.components() {
        let k = comp.len();
        let factor = if k == 1 {
            BigUint::from(q)
        } else {
            let sub = g
                .induced_subgraph(&VertexSet::from_iter(comp))
                .expect("component in range");
            let h = &sub.graph;
            if h.edge_count() == k - 1 {
                BigUint::from(q) * BigUint::from(q - 1).pow(k as u32 - 1)
            } else {
                connected(h, q, cfg)?
            }
        };
        if factor.is_zero() {
            return Ok(factor);
        }
        total *= factor;
    }
    Ok(total)
}

/// True when the subset DP for this graph stays within both budgets.
pub(crate) fn fits_budget(g: &Graph, cfg: &CountConfig) -> bool {
    g.n() <= cfg.subset_dp_max_n.min(32)
        && table_bytes(g.n(), independence_number(&masks(g))) <= cfg.subset_dp_max_bytes
}

fn table_bytes(n: usize, alpha: usize) -> u64 {
    (1u64 << n)
        .saturating_mul(alpha as u64 + 1)
        .saturating_mul(4)
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect()
}

/// Size of a maximum independent set, by branching on a vertex of maximum
/// degree (vertices of degree at most one are always taken).
fn independence_number(nbr: &[u32]) -> usize {
    fn go(nbr: &[u32], set: u32) -> usize {
        if set == 0 {
            return 0;
        }
        let mut best = (0u32, usize::MAX);
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (nbr[v] & set).count_ones();
            if d <= 1 {
                return 1 + go(nbr, set & !(nbr[v] | 1 << v));
            }
            if best.1 == usize::MAX || d > best.0 {
                best = (d, v);
            }
        }
        let v = best.1;
        go(nbr, set & !(1 << v)).max(1 + go(nbr, set & !(nbr[v] | 1 << v)))
    }
    let n = nbr.len();
    go(nbr, if n == 32 { u32::MAX } else { (1u32 << n) - 1 })
}

fn connected(g: &Graph, q: u64, cfg: &CountConfig) -> Result<BigUint, CountError> {
    let n = g.n();
    let limit = cfg.subset_dp_max_n.min(32);
    if n > limit {
        return Err(CountError::Capacity {
            what: "vertices for the chromatic-polynomial subset DP",
            limit: limit as u64,
            advice: "count with the backtracking counter instead",
        });
    }
    let nbr = masks(g);
    let alpha = independence_number(&nbr);
    let bytes = table_bytes(n, alpha);
    if bytes > cfg.subset_dp_max_bytes {
        return Err(CountError::Capacity {
            what: "bytes for the chromatic-polynomial subset DP table",
            limit: cfg.subset_dp_max_bytes,
            advice: "count with the backtracking counter instead",
        });
    }
    let stride = alpha + 1;
    let table = independent_set_table(&nbr, stride);

    // 0 <= P(G, q) <= q^n; two spare bits absorb rounding in the logarithm
    let bound_bits = (n as f64 * (q as f64).log2()).ceil() as u64 + 2;
    let primes = primes_for_bits(bound_bits).ok_or(CountError::Capacity {
        what: "bits in the chromatic polynomial value",
        limit: 60 * 64,
        advice: "use fewer colours or vertices",
    })?;
    let contexts: Vec<PrimeContext> = primes.iter().map(|&p| PrimeContext::new(p, q, n)).collect();

    let subsets = 1usize << n;
    let chunk = (subsets / (rayon::current_num_threads() * 8)).max(1 << 10);
    let sums = table
        .par_chunks(stride * chunk)
        .enumerate()
        .map(|(ci, rows)| {
            let mut pos = vec![0u64; contexts.len()];
            let mut neg = vec![0u64; contexts.len()];
            let mut r = vec![0u64; n + 1];
            for (i, row) in rows.chunks_exact(stride).enumerate() {
                let s = ci * chunk + i;
                let a = row.iter().rposition(|&x| x != 0).unwrap_or(0);
                if (q as u128) * (a as u128) < n as u128 {
                    continue;
                }
                let odd = (n - s.count_ones() as usize) % 2 == 1;
                for (k, ctx) in contexts.iter().enumerate() {
                    let c = ctx.top_coefficient(&row[..=a], &mut r);
                    let acc = if odd { &mut neg[k] } else { &mut pos[k] };
                    *acc = ctx.prime.add(*acc, c);
                }
            }
            (pos, neg)
        })
        .reduce(
            || (vec![0; contexts.len()], vec![0; contexts.len()]),
            |(mut p1, mut n1), (p2, n2)| {
                for (k, ctx) in contexts.iter().enumerate() {
                    p1[k] = ctx.prime.add(p1[k], p2[k]);
                    n1[k] = ctx.prime.add(n1[k], n2[k]);
                }
                (p1, n1)
            },
        );
    let residues: Vec<u64> = contexts
        .iter()
        .enumerate()
        .map(|(k, ctx)| ctx.prime.sub(sums.0[k], sums.1[k]))
        .collect();
    Ok(crt(&residues, primes))
}

/// Row `S` holds the number of independent sets of each size in `G[S]`.
fn independent_set_table(nbr: &[u32], stride: usize) -> Vec<u32> {
    let n = nbr.len();
    let mut table = vec![0u32; stride << n];
    table[0] = 1;
    for s in 1..1usize << n {
        let v = s.trailing_zeros() as usize;
        let without = s & !(1 << v);
        let apart = s & !(nbr[v] as usize | 1 << v);
        let (done, rest) = table.split_at_mut(s * stride);
        let row = &mut rest[..stride];
        row.copy_from_slice(&done[without * stride..(without + 1) * stride]);
        let other = &done[apart * stride..(apart + 1) * stride];
        for k in 1..stride {
            row[k] += other[k - 1];
        }
    }
    table
}

struct PrimeContext {
    prime: Prime,
    /// `(q + 1) mod p`
    q1: u64,
    /// `1/m mod p` for `m <= n`.
    inv: Vec<u64>,
    n: usize,
}

impl PrimeContext {
    fn new(prime: Prime, q: u64, n: usize) -> Self {
        let inv = (0..=n as u64)
            .map(|m| if m == 0 { 0 } else { prime.inv(m) })
            .collect();
        Self {
            prime,
            q1: prime.reduce(q as u128 + 1),
            inv,
            n,
        }
    }

    /// `[z^n] f(z)^q mod p` for `f(0) = 1`, via
    /// `m r_m = Σ_j ((q+1) j - m) f_j r_{m-j}`.
    fn top_coefficient(&self, f: &[u32], r: &mut [u64]) -> u64 {
        let p = self.prime;
        let a = f.len() - 1;
        r[0] = 1;
        for m in 1..=self.n {
            let mut weighted = 0u128;
            let mut plain = 0u128;
            for j in 1..=a.min(m) {
                let fr = f[j] as u128 * r[m - j] as u128;
                plain += fr;
                weighted += j as u128 * fr;
            }
            let w = p.mul(self.q1, p.reduce(weighted));
            let b = p.mul(m as u64, p.reduce(plain));
            r[m] = p.mul(self.inv[m], p.sub(w, b));
        }
        r[self.n]
    }
}
