use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::Reduced;
use super::{
    four_step_experiment_with, ExperimentSetup, ExperimentTrace, RandomSource, SampleError,
};
use crate::bounds::BoundParams;
use crate::counting::{for_each_colouring, CountConfig, ListAssignment, PartialColouring};
use crate::graph::Graph;

/// A Monte-Carlo mean with its standard error, next to the value the
/// analysis predicts for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub bound: f64,
    /// `">="` when the mean should be at least `bound`, `"<="` otherwise.
    pub relation: String,
}

impl Estimate {
    fn from_samples(xs: &[f64], bound: f64, relation: &str) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            stderr: (var / n).sqrt(),
            samples: xs.len() as u64,
            bound,
            relation: relation.into(),
        }
    }

    /// Consistent with the bound once `sigmas` standard errors of slack are
    /// allowed.
    pub fn consistent(&self, sigmas: f64) -> bool {
        let slack = sigmas * self.stderr + 1e-12 * self.bound.abs().max(1.0);
        match self.relation.as_str() {
            ">=" => self.mean + slack >= self.bound,
            _ => self.mean - slack <= self.bound,
        }
    }

    pub fn variance(&self) -> f64 {
        self.stderr.powi(2) * self.samples as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub vertex: usize,
    pub trials: u64,
    /// `E[k(v)]` against `k(v) - t deg(v) / ℓ`.
    pub k_v: Estimate,
    /// `E[ℓ_c(v)]` against `ℓ`.
    pub ell_final: Estimate,
    /// Per neighbour, frequency of `ℓ_{c0}(u) <= t_u` against `t_u / ℓ`.
    pub short_list: Vec<(usize, Estimate)>,
    /// The double sum against `(1 + 1/ln ρ) deg(v)`; absent when some trial
    /// had a non-positive denominator.
    pub double_sum: Option<Estimate>,
    pub anomalies: u64,
}

fn analytic_bounds(setup: &ExperimentSetup, params: &BoundParams) -> (f64, f64, Vec<f64>, f64) {
    let v = setup.vertex;
    let deg = setup.neighbours.len() as f64;
    let k_bound = params.demand[v] - params.t * deg / params.ell;
    let tails = setup.thresholds.iter().map(|t| t / params.ell).collect();
    let double = (1.0 + 1.0 / params.ln_rho) * deg;
    (k_bound, params.ell, tails, double)
}

/// Runs `trials` independent experiments on streams `source.stream + i`.
pub fn experiment_diagnostics(
    g: &Graph,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    params: &BoundParams,
    source: RandomSource,
    trials: u64,
    cfg: &CountConfig,
) -> Result<Diagnostics, SampleError> {
    if trials == 0 {
        return Err(SampleError::InvalidInput(
            "at least one trial is needed".into(),
        ));
    }
    if params.demand.len() != g.n() {
        return Err(SampleError::InvalidInput(
            "parameters belong to another graph".into(),
        ));
    }
    let traces: Vec<ExperimentTrace> = (0..trials)
        .into_par_iter()
        .map(|i| {
            four_step_experiment_with(
                g,
                lists,
                setup,
                source.with_stream(source.stream.wrapping_add(i)),
                cfg,
            )
        })
        .collect::<Result<_, _>>()?;
    let (k_bound, ell, tails, double) = analytic_bounds(setup, params);
    let ks: Vec<f64> = traces.iter().map(|t| t.k_v as f64).collect();
    let ells: Vec<f64> = traces.iter().map(|t| t.ell_final as f64).collect();
    let short_list = setup
        .neighbours
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let hits: Vec<f64> = traces
                .iter()
                .map(|t| f64::from(u8::from(t.ell_c0[i] as f64 <= setup.thresholds[i])))
                .collect();
            (u, Estimate::from_samples(&hits, tails[i], "<="))
        })
        .collect();
    let sums: Option<Vec<f64>> = traces.iter().map(|t| t.double_sum).collect();
    Ok(Diagnostics {
        vertex: setup.vertex,
        trials,
        k_v: Estimate::from_samples(&ks, k_bound, ">="),
        ell_final: Estimate::from_samples(&ells, ell, ">="),
        short_list,
        double_sum: sums.map(|s| Estimate::from_samples(&s, double, "<=")),
        anomalies: traces.iter().filter(|t| t.anomaly.is_some()).count() as u64,
    })
}

/// Exact expectations over the uniform initial colouring.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDiagnostics {
    pub vertex: usize,
    pub colourings: u64,
    pub k_v: BigRational,
    pub k_v_bound: f64,
    /// `E[ℓ_c(v)]`; the final colouring is uniform, so this averages over
    /// the initial one.
    pub ell: BigRational,
    pub ell_bound: f64,
    pub short_list: Vec<(usize, BigRational, f64)>,
    pub double_sum: Option<BigRational>,
    pub double_sum_bound: f64,
}

impl ExactDiagnostics {
    pub fn k_v_holds(&self) -> bool {
        self.k_v.to_f64().unwrap_or(f64::NAN) >= self.k_v_bound
    }
}

/// Exact version of [`experiment_diagnostics`] by enumerating every proper
/// colouring of `g - v`.
pub fn exact_diagnostics(
    g: &Graph,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    params: &BoundParams,
    cfg: &CountConfig,
) -> Result<ExactDiagnostics, SampleError> {
    let red = Reduced::new(g, lists, setup)?;
    let h = &red.sub.graph;
    let d = setup.neighbours.len();
    let mut k_sum = BigInt::zero();
    let mut ell_sum = BigInt::zero();
    let mut short = vec![0u64; d];
    let mut double = Some(BigRational::zero());
    let v = setup.vertex;
    let visited = for_each_colouring(h, &red.lists, cfg.enumeration_budget, |colours| {
        let c = PartialColouring::from_full(colours);
        let ell_c0 = red.ell_c0(&c);
        let in_x0 = red.uncolour_mask(setup, &ell_c0);
        let c1 = red.restrict_away(&c, &in_x0);
        k_sum += red.free_at_vertex(lists, v, &c1);
        ell_sum += red.free_at_vertex(lists, v, &c);
        for i in 0..d {
            if ell_c0[i] as f64 <= setup.thresholds[i] {
                short[i] += 1;
            }
        }
        if let Some(acc) = double.as_mut() {
            match exact_double_sum(&red, lists, setup, &c1, &ell_c0, &in_x0) {
                Some(x) => *acc += x,
                None => double = None,
            }
        }
    })?;
    if visited == 0 {
        return Err(SampleError::Uncolourable { count: 0u32.into() });
    }
    let n = BigInt::from(visited);
    let over = |x: BigInt| BigRational::new(x, n.clone());
    let (k_bound, ell_bound, tails, double_bound) = analytic_bounds(setup, params);
    Ok(ExactDiagnostics {
        vertex: v,
        colourings: visited,
        k_v: over(k_sum),
        k_v_bound: k_bound,
        ell: over(ell_sum),
        ell_bound,
        short_list: setup
            .neighbours
            .iter()
            .zip(short)
            .zip(tails)
            .map(|((&u, s), b)| (u, over(BigInt::from(s)), b))
            .collect(),
        double_sum: double.map(|s| s / BigRational::from_integer(n.clone())),
        double_sum_bound: double_bound,
    })
}

fn exact_double_sum(
    red: &Reduced,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    c1: &PartialColouring,
    ell_c0: &[usize],
    in_x0: &[bool],
) -> Option<BigRational> {
    let mut sum = BigRational::zero();
    for (i, &u) in red.neighbours.iter().enumerate() {
        if !in_x0[i] {
            continue;
        }
        let seen = lists
            .list(setup.vertex)
            .iter()
            .filter(|&&x| {
                red.lists.contains(u, x)
                    && red
                        .sub
                        .graph
                        .neighbors(u)
                        .iter()
                        .all(|&w| c1.get(w) != Some(x))
            })
            .count();
        if seen == 0 {
            continue;
        }
        let denom = ell_c0[i] as i64 - setup.inner_degrees[i] as i64 - 1;
        if denom <= 0 {
            return None;
        }
        sum += BigRational::new(BigInt::from(seen), BigInt::from(denom));
    }
    Some(sum)
}
