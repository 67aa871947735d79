//! Exact output distributions, found by following every random branch with
//! rational weights.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::experiment::Reduced;
use super::uniform::step_distribution;
use super::{ExperimentSetup, SampleError};
use crate::counting::{
    count_colourings_with, for_each_colouring, Colour, CountConfig, ListAssignment,
    PartialColouring,
};
use crate::graph::Graph;

/// Probability of each full colour vector.
pub type Distribution = BTreeMap<Vec<Colour>, BigRational>;

/// Cap on the number of random branches followed.
pub const MAX_BRANCHES: u64 = 1_000_000;

struct Branches {
    used: u64,
}

impl Branches {
    fn take(&mut self, k: u64) -> Result<(), SampleError> {
        self.used += k;
        if self.used > MAX_BRANCHES {
            Err(SampleError::Capacity {
                what: "random branches in exact propagation",
                limit: MAX_BRANCHES,
                advice: "use Monte-Carlo trials instead",
            })
        } else {
            Ok(())
        }
    }
}

fn full(c: &PartialColouring) -> Vec<Colour> {
    c.to_full().expect("complete colouring")
}

fn add(dist: &mut Distribution, key: Vec<Colour>, p: BigRational) {
    *dist.entry(key).or_insert_with(BigRational::zero) += p;
}

/// Every outcome of [`super::sample_extension`] from `c` with its probability.
fn extension_branches(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
    weight: BigRational,
    cfg: &CountConfig,
    branches: &mut Branches,
    out: &mut Vec<(PartialColouring, BigRational)>,
) -> Result<(), SampleError> {
    let Some(v) = (0..g.n()).find(|&v| c.get(v).is_none()) else {
        branches.take(1)?;
        out.push((c.clone(), weight));
        return Ok(());
    };
    let options = step_distribution(g, lists, c, v, cfg)?;
    let total: BigUint = options.iter().map(|(_, n)| n).sum();
    if total.is_zero() {
        return Err(SampleError::Uncolourable { count: total });
    }
    let total = BigInt::from(total);
    let mut next = c.clone();
    for (x, n) in options {
        next.set(v, x);
        let w = &weight * BigRational::new(BigInt::from(n), total.clone());
        extension_branches(g, lists, &next, w, cfg, branches, out)?;
    }
    Ok(())
}

/// The output distribution of the self-reducible sampler.
pub fn sampler_distribution(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &CountConfig,
) -> Result<Distribution, SampleError> {
    let mut out = Vec::new();
    let mut branches = Branches { used: 0 };
    extension_branches(
        g,
        lists,
        &PartialColouring::new(g.n()),
        BigRational::one(),
        cfg,
        &mut branches,
        &mut out,
    )?;
    let mut dist = Distribution::new();
    for (c, p) in out {
        add(&mut dist, full(&c), p);
    }
    Ok(dist)
}

/// The uniform distribution on proper colourings, by direct enumeration.
pub fn uniform_distribution(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<Distribution, SampleError> {
    let mut all = Vec::new();
    for_each_colouring(g, lists, MAX_BRANCHES, |c| all.push(c.to_vec()))?;
    if all.is_empty() {
        return Err(SampleError::Uncolourable {
            count: BigUint::zero(),
        });
    }
    let p = BigRational::new(BigInt::one(), BigInt::from(all.len()));
    Ok(all.into_iter().map(|c| (c, p.clone())).collect())
}

/// Pushes `input` through [`super::resample_once`].
pub fn resample_distribution(
    g: &Graph,
    lists: &ListAssignment,
    input: &Distribution,
) -> Result<Distribution, SampleError> {
    if (0..g.n()).any(|v| lists.size(v) < g.degree(v) + 1) {
        return Err(SampleError::Hypothesis(
            "some list is not longer than its vertex degree".into(),
        ));
    }
    let mut branches = Branches { used: 0 };
    let mut current = input.clone();
    for v in 0..g.n() {
        let mut next = Distribution::new();
        for (c, p) in &current {
            let free: Vec<Colour> = lists
                .list(v)
                .iter()
                .copied()
                .filter(|x| g.neighbors(v).iter().all(|&u| c[u] != *x))
                .collect();
            branches.take(free.len() as u64)?;
            let share = p / BigRational::from_integer(BigInt::from(free.len()));
            for x in free {
                let mut d = c.clone();
                d[v] = x;
                add(&mut next, d, share.clone());
            }
        }
        current = next;
    }
    Ok(current)
}

/// Output distribution of the four-step experiment over colourings of
/// `g - v` (vertices in increasing order, `v` left out).
pub fn experiment_distribution(
    g: &Graph,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    cfg: &CountConfig,
) -> Result<Distribution, SampleError> {
    let red = Reduced::new(g, lists, setup)?;
    let h = &red.sub.graph;
    let base = count_colourings_with(h, &red.lists, cfg)?;
    if base.is_zero() {
        return Err(SampleError::Uncolourable { count: base });
    }
    let mut branches = Branches { used: 0 };
    let mut initial = Vec::new();
    extension_branches(
        h,
        &red.lists,
        &PartialColouring::new(h.n()),
        BigRational::one(),
        cfg,
        &mut branches,
        &mut initial,
    )?;
    let mut dist = Distribution::new();
    for (c, p) in initial {
        let ell_c0 = red.ell_c0(&c);
        let in_x0 = red.uncolour_mask(setup, &ell_c0);
        let c1 = red.restrict_away(&c, &in_x0);
        let mut finals = Vec::new();
        extension_branches(h, &red.lists, &c1, p, cfg, &mut branches, &mut finals)?;
        for (f, q) in finals {
            add(&mut dist, full(&f), q);
        }
    }
    Ok(dist)
}

/// `½ Σ |a(x) - b(x)|`.
pub fn total_variation(a: &Distribution, b: &Distribution) -> BigRational {
    let zero = BigRational::zero();
    let keys: std::collections::BTreeSet<&Vec<Colour>> = a.keys().chain(b.keys()).collect();
    let sum = keys
        .into_iter()
        .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).abs())
        .fold(BigRational::zero(), |s, x| s + x);
    sum / BigRational::from_integer(BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_uniform_on_a_small_cycle() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let lists = ListAssignment::uniform(4, 3);
        let s = sampler_distribution(&c4, &lists, &CountConfig::default()).unwrap();
        let u = uniform_distribution(&c4, &lists).unwrap();
        assert_eq!(s.len(), 18);
        assert!(total_variation(&s, &u).is_zero());
    }

    #[test]
    fn resampling_an_edge_preserves_uniformity() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let lists = ListAssignment::uniform(2, 3);
        let u = uniform_distribution(&k2, &lists).unwrap();
        let out = resample_distribution(&k2, &lists, &u).unwrap();
        assert!(total_variation(&out, &u).is_zero());

        // a point mass is not preserved
        let point: Distribution = [(vec![0, 1], BigRational::one())].into_iter().collect();
        let moved = resample_distribution(&k2, &lists, &point).unwrap();
        assert!(!total_variation(&moved, &u).is_zero());
        assert_eq!(
            moved.values().fold(BigRational::zero(), |s, p| s + p),
            BigRational::one()
        );
    }

    #[test]
    fn total_variation_of_disjoint_supports_is_one() {
        let a: Distribution = [(vec![0], BigRational::one())].into_iter().collect();
        let b: Distribution = [(vec![1], BigRational::one())].into_iter().collect();
        assert_eq!(total_variation(&a, &b), BigRational::one());
    }
}
