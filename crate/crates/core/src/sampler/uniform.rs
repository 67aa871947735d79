use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::SampleError;
use crate::counting::{
    available_list, count_extensions_with, Colour, CountConfig, ListAssignment, PartialColouring,
};
use crate::graph::Graph;

/// A sampled colouring with the product of the probabilities of the choices
/// that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledColouring {
    pub colouring: PartialColouring,
    pub probability: BigRational,
}

/// For an uncoloured vertex `v`, each available colour with the number of
/// extensions of `c + {v -> x}`. Colours with no extension are left out.
pub fn step_distribution(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
    v: usize,
    cfg: &CountConfig,
) -> Result<Vec<(Colour, BigUint)>, SampleError> {
    let mut out = Vec::new();
    let mut next = c.clone();
    for x in available_list(g, lists, c, v)? {
        next.set(v, x);
        let n = count_extensions_with(g, lists, &next, cfg)?;
        if !n.is_zero() {
            out.push((x, n));
        }
    }
    Ok(out)
}

/// Colours the uncoloured vertices of `c` in increasing index order so that
/// the result is uniform among the proper extensions of `c`.
pub fn sample_extension<R: Rng + ?Sized>(
    g: &Graph,
    lists: &ListAssignment,
    c: &PartialColouring,
    rng: &mut R,
    cfg: &CountConfig,
) -> Result<SampledColouring, SampleError> {
    let mut current = c.clone();
    let mut probability = BigRational::one();
    for v in 0..g.n() {
        if current.get(v).is_some() {
            continue;
        }
        let options = step_distribution(g, lists, &current, v, cfg)?;
        let total: BigUint = options.iter().map(|(_, n)| n).sum();
        if total.is_zero() {
            return Err(SampleError::Uncolourable { count: total });
        }
        let mut r = rng.gen_biguint_below(&total);
        let (x, weight) = options
            .into_iter()
            .find(|(_, n)| {
                if r < *n {
                    true
                } else {
                    r -= n;
                    false
                }
            })
            .expect("draw below total");
        probability *= BigRational::new(BigInt::from(weight), BigInt::from(total));
        current.set(v, x);
    }
    Ok(SampledColouring {
        colouring: current,
        probability,
    })
}

/// A uniformly random proper `lists`-colouring of `g`.
pub fn sample_uniform<R: Rng + ?Sized>(
    g: &Graph,
    lists: &ListAssignment,
    rng: &mut R,
) -> Result<PartialColouring, SampleError> {
    Ok(sample_uniform_with(g, lists, rng, &CountConfig::default())?.colouring)
}

pub fn sample_uniform_with<R: Rng + ?Sized>(
    g: &Graph,
    lists: &ListAssignment,
    rng: &mut R,
    cfg: &CountConfig,
) -> Result<SampledColouring, SampleError> {
    if lists.n() != g.n() {
        return Err(SampleError::InvalidInput(format!(
            "{} lists for {} vertices",
            lists.n(),
            g.n()
        )));
    }
    sample_extension(g, lists, &PartialColouring::new(g.n()), rng, cfg)
}
