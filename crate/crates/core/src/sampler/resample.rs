use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::SampleError;
use crate::counting::{count_colourings_with, Colour, CountConfig, ListAssignment};
use crate::graph::Graph;

fn check_slack(g: &Graph, lists: &ListAssignment) -> Result<(), SampleError> {
    if lists.n() != g.n() {
        return Err(SampleError::InvalidInput(format!(
            "{} lists for {} vertices",
            lists.n(),
            g.n()
        )));
    }
    match (0..g.n()).find(|&v| lists.size(v) < g.degree(v) + 1) {
        Some(v) => Err(SampleError::Hypothesis(format!(
            "vertex {v} has {} colours but degree {}",
            lists.size(v),
            g.degree(v)
        ))),
        None => Ok(()),
    }
}

/// Visits the vertices in index order and redraws each colour uniformly
/// from the colours its neighbours currently leave free.
///
/// Needs `|L(v)| >= deg(v) + 1` everywhere, so no list ever runs out.
pub fn resample_once<R: Rng + ?Sized>(
    g: &Graph,
    lists: &ListAssignment,
    colouring: &[Colour],
    rng: &mut R,
) -> Result<Vec<Colour>, SampleError> {
    check_slack(g, lists)?;
    if colouring.len() != g.n() {
        return Err(SampleError::InvalidInput(
            "colouring length differs from the vertex count".into(),
        ));
    }
    let mut c = colouring.to_vec();
    for v in 0..g.n() {
        let free: Vec<Colour> = lists
            .list(v)
            .iter()
            .copied()
            .filter(|x| g.neighbors(v).iter().all(|&u| c[u] != *x))
            .collect();
        c[v] = free[rng.gen_range(0..free.len())];
    }
    Ok(c)
}

/// `Π_v (1 - 1/(|L(v)| - deg(v)))`, a lower bound on the probability that a
/// uniform colouring avoids any fixed colour everywhere.
pub fn avoidance_probability_bound(g: &Graph, lists: &ListAssignment) -> Result<f64, SampleError> {
    check_slack(g, lists)?;
    Ok((0..g.n())
        .map(|v| 1.0 - 1.0 / (lists.size(v) - g.degree(v)) as f64)
        .product())
}

/// The same product in exact arithmetic.
pub fn avoidance_probability_bound_exact(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<BigRational, SampleError> {
    check_slack(g, lists)?;
    Ok((0..g.n())
        .map(|v| {
            let slack = BigInt::from(lists.size(v) - g.degree(v));
            BigRational::new(&slack - 1, slack)
        })
        .fold(BigRational::one(), |acc, f| acc * f))
}

/// Exact probability that a uniform colouring uses colour `x` nowhere:
/// colourings with `x` struck from every list over all colourings.
pub fn exact_avoidance_probability(
    g: &Graph,
    lists: &ListAssignment,
    x: Colour,
    cfg: &CountConfig,
) -> Result<BigRational, SampleError> {
    let total = count_colourings_with(g, lists, cfg)?;
    if total.is_zero() {
        return Err(SampleError::Uncolourable { count: total });
    }
    let avoiding: BigUint = count_colourings_with(g, &lists.without_colour(x), cfg)?;
    Ok(BigRational::new(
        BigInt::from(avoiding),
        BigInt::from(total),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::RandomSource;

    #[test]
    fn edge_with_three_colours() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        let lists = ListAssignment::uniform(2, 3);
        assert_eq!(avoidance_probability_bound(&k2, &lists).unwrap(), 0.25);
        let exact = exact_avoidance_probability(&k2, &lists, 1, &CountConfig::default()).unwrap();
        assert_eq!(exact, BigRational::new(1.into(), 3.into()));
        assert_eq!(
            avoidance_probability_bound_exact(&k2, &lists).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn tight_slack_gives_zero_bound_and_never_runs_dry() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let lists = ListAssignment::uniform(3, 3);
        assert_eq!(avoidance_probability_bound(&k3, &lists).unwrap(), 0.0);
        let mut rng = RandomSource::new(5, 0).rng();
        let mut c = vec![0, 1, 2];
        for _ in 0..100 {
            c = resample_once(&k3, &lists, &c, &mut rng).unwrap();
            assert!(c[0] != c[1] && c[1] != c[2] && c[0] != c[2]);
        }
    }

    #[test]
    fn short_lists_are_rejected() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let lists = ListAssignment::uniform(3, 2);
        assert!(matches!(
            avoidance_probability_bound(&k3, &lists),
            Err(SampleError::Hypothesis(_))
        ));
        assert!(
            resample_once(&k3, &lists, &[0, 1, 0], &mut RandomSource::new(1, 1).rng()).is_err()
        );
    }
}
