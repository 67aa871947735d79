use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{count_colourings_with, CountConfig, CountError, ListAssignment};
use crate::bounds::{compare_at_least, LogValue, Verdict};
use crate::graph::{Graph, VertexSet};

/// One prefix `H_i = g[v_1..v_i]` of the vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct StarStep {
    /// 1-based prefix length.
    pub index: usize,
    pub vertex: usize,
    /// `|𝒞(H_i)|`.
    pub count: BigUint,
    /// `|𝒞(H_i)| / |𝒞(H_{i-1})|`; `None` once the previous count is zero.
    pub ratio: Option<BigRational>,
    /// `|𝒞(H_i)| >= ℓ |𝒞(H_{i-1})|`.
    pub verdict: Verdict,
}

impl StarStep {
    /// `ratio` as a float, `None` when undefined.
    pub fn ratio_f64(&self) -> Option<f64> {
        let r = self.ratio.as_ref()?;
        if let Some(x) = r.to_f64().filter(|x| x.is_finite()) {
            return Some(x);
        }
        let num = LogValue::from_biguint(r.numer().magnitude());
        let den = LogValue::from_biguint(r.denom().magnitude());
        Some(if num.is_zero() {
            0.0
        } else {
            (num.ln() - den.ln()).exp()
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarReport {
    pub ell: f64,
    pub order: Vec<usize>,
    pub steps: Vec<StarStep>,
    /// Index (1-based) of the first failing prefix.
    pub first_violation: Option<usize>,
    pub final_count: BigUint,
    /// `|𝒞(g)| >= ℓ^n`.
    pub final_verdict: Verdict,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none() && !self.final_verdict.is_failure()
    }

    /// Smallest prefix ratio, the largest `ℓ` the order certifies.
    pub fn min_ratio(&self) -> Option<BigRational> {
        self.steps.iter().filter_map(|s| s.ratio.clone()).min()
    }
}

/// Checks `|𝒞(H_i)| >= ℓ |𝒞(H_{i-1})|` along every prefix of `order`, and
/// `|𝒞(g)| >= ℓ^n` at the end.
pub fn verify_star(
    g: &Graph,
    lists: &ListAssignment,
    ell: f64,
    order: &[usize],
) -> Result<StarReport, CountError> {
    verify_star_with(g, lists, ell, order, &CountConfig::default())
}

pub fn verify_star_with(
    g: &Graph,
    lists: &ListAssignment,
    ell: f64,
    order: &[usize],
    cfg: &CountConfig,
) -> Result<StarReport, CountError> {
    let n = g.n();
    if lists.n() != n {
        return Err(CountError::InvalidInput(format!(
            "{} lists for {} vertices",
            lists.n(),
            n
        )));
    }
    let mut seen = vec![false; n];
    if order.len() != n
        || !order
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    {
        return Err(CountError::InvalidInput(
            "order is not a permutation of the vertices".into(),
        ));
    }
    if !(ell >= 0.0 && ell.is_finite()) {
        return Err(CountError::InvalidInput(format!(
            "ell must be finite and non-negative, got {ell}"
        )));
    }
    let counts = (1..=n)
        .into_par_iter()
        .map(|i| {
            let prefix: VertexSet = order[..i].iter().copied().collect();
            let sub = g.induced_subgraph(&prefix).expect("order in range");
            count_colourings_with(&sub.graph, &lists.restrict(&sub), cfg)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let ell_log = LogValue::from_f64(ell);
    let mut previous = BigUint::from(1u32);
    let mut steps = Vec::with_capacity(n);
    let mut first_violation = None;
    for (i, count) in counts.into_iter().enumerate() {
        let ratio = (!previous.is_zero())
            .then(|| BigRational::new(BigInt::from(count.clone()), BigInt::from(previous.clone())));
        let verdict = compare_at_least(
            LogValue::from_biguint(&count),
            ell_log * LogValue::from_biguint(&previous),
        );
        if verdict.is_failure() && first_violation.is_none() {
            first_violation = Some(i + 1);
        }
        steps.push(StarStep {
            index: i + 1,
            vertex: order[i],
            count: count.clone(),
            ratio,
            verdict,
        });
        previous = count;
    }
    let final_verdict = compare_at_least(LogValue::from_biguint(&previous), ell_log.powi(n as u64));
    Ok(StarReport {
        ell,
        order: order.to_vec(),
        steps,
        first_violation,
        final_count: previous,
        final_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_graph_ratios_are_list_sizes() {
        let g = Graph::empty(4);
        let lists = ListAssignment::prefix(&[3, 4, 5, 6]);
        let r = verify_star(&g, &lists, 3.0, &[0, 1, 2, 3]).unwrap();
        assert!(r.passed());
        let ratios: Vec<f64> = r.steps.iter().map(|s| s.ratio_f64().unwrap()).collect();
        assert_eq!(ratios, vec![3.0, 4.0, 5.0, 6.0]);
        assert_eq!(r.steps[0].verdict, Verdict::Marginal);
        assert_eq!(r.final_count, BigUint::from(360u32));
    }

    #[test]
    fn triangle_with_two_colours_fails_at_the_last_prefix() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = verify_star(&k3, &ListAssignment::uniform(3, 2), 1.0, &[0, 1, 2]).unwrap();
        assert_eq!(r.first_violation, Some(3));
        assert_eq!(r.steps[2].ratio_f64(), Some(0.0));
        assert_eq!(r.final_verdict, Verdict::Fail);
    }

    #[test]
    fn rejects_bad_orders() {
        let g = Graph::empty(3);
        let lists = ListAssignment::uniform(3, 2);
        assert!(verify_star(&g, &lists, 1.0, &[0, 1]).is_err());
        assert!(verify_star(&g, &lists, 1.0, &[0, 1, 1]).is_err());
        assert!(verify_star(&g, &lists, 1.0, &[0, 1, 3]).is_err());
    }
}
