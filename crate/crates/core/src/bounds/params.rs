use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{lambert_w, BoundError, LogValue};
use crate::graph::SparsityProfile;

/// Which list-size demand the parameters describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandMode {
    /// `k(v) = (1 + 2/ln ρ) deg(v) / W(deg(v)/ℓ)`; lists need `|L(v)| >= k(v)`.
    LowerBoundEll,
    /// `q(v) = (1 + 1/ln ρ) deg(v) / W(deg(v)/ℓ')` with `ℓ' = (d+1)(ln ρ)^3`;
    /// lists need `|L(v)| >= (1 + 1/ln ρ) q(v)`.
    GeometricMean,
}

/// Derived proof quantities for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub mode: DemandMode,
    pub rho: Rational64,
    pub ln_rho: f64,
    pub local_density: Rational64,
    pub ell: f64,
    /// `t = (d+1)(ln ρ + 1)`.
    pub t: f64,
    pub degrees: Vec<usize>,
    /// `k(v)` or `q(v)` per vertex.
    pub demand: Vec<f64>,
    /// Real list size each vertex needs.
    pub required: Vec<f64>,
    /// `⌈required(v)⌉`.
    pub list_floor: Vec<usize>,
}

impl BoundParams {
    /// `t_u = (d_u + 1)(ln ρ + 1)` for a vertex of degree `d_u` inside `G[N(v)]`.
    pub fn threshold(&self, d_u: usize) -> f64 {
        (d_u as f64 + 1.0) * (self.ln_rho + 1.0)
    }

    pub fn max_list_floor(&self) -> usize {
        self.list_floor.iter().copied().max().unwrap_or(0)
    }

    /// Geometric mean of the per-vertex demands.
    pub fn geometric_mean_demand(&self) -> LogValue {
        if self.demand.is_empty() {
            return LogValue::ONE;
        }
        let mean = self.demand.iter().map(|q| q.ln()).sum::<f64>() / self.demand.len() as f64;
        LogValue::from_ln(mean)
    }
}

/// `factor · deg / W(deg/ell)`, extended continuously by `factor · ell` at `deg = 0`.
fn demand(deg: usize, ell: f64, factor: f64) -> Result<f64, BoundError> {
    if deg == 0 {
        return Ok(factor * ell);
    }
    let deg = deg as f64;
    Ok(factor * deg / lambert_w(deg / ell)?)
}

fn ceil_sizes(required: &[f64]) -> Vec<usize> {
    required
        .iter()
        .map(|r| r.ceil().max(0.0) as usize)
        .collect()
}

fn ln_ratio(r: Rational64) -> f64 {
    (*r.numer() as f64).ln() - (*r.denom() as f64).ln()
}

/// Per-vertex list sizes `k(v)` that guarantee `ℓ^n` colourings.
pub fn list_size_params(profile: &SparsityProfile, ell: f64) -> Result<BoundParams, BoundError> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(BoundError::Domain {
            what: "ell",
            value: ell,
        });
    }
    if profile.rho <= Rational64::from_integer(1) {
        return Err(BoundError::RhoNotAboveOne { rho: profile.rho });
    }
    let ln_rho = ln_ratio(profile.rho);
    let factor = 1.0 + 2.0 / ln_rho;
    let demand = profile
        .degrees
        .iter()
        .map(|&d| demand(d, ell, factor))
        .collect::<Result<Vec<_>, _>>()?;
    let d1 = profile.local_density_f64() + 1.0;
    Ok(BoundParams {
        mode: DemandMode::LowerBoundEll,
        rho: profile.rho,
        ln_rho,
        local_density: profile.local_density,
        ell,
        t: d1 * (ln_rho + 1.0),
        degrees: profile.degrees.clone(),
        list_floor: ceil_sizes(&demand),
        required: demand.clone(),
        demand,
    })
}

/// Per-vertex demands `q(v)` for the geometric-mean count bound.
pub fn geometric_demand_params(profile: &SparsityProfile) -> Result<BoundParams, BoundError> {
    if profile.rho < Rational64::from_integer(6) {
        return Err(BoundError::RhoBelowSix { rho: profile.rho });
    }
    let ln_rho = ln_ratio(profile.rho);
    let factor = 1.0 + 1.0 / ln_rho;
    let d1 = profile.local_density_f64() + 1.0;
    let ell = d1 * ln_rho.powi(3);
    let demand = profile
        .degrees
        .iter()
        .map(|&d| demand(d, ell, factor))
        .collect::<Result<Vec<_>, _>>()?;
    let required: Vec<f64> = demand.iter().map(|q| factor * q).collect();
    Ok(BoundParams {
        mode: DemandMode::GeometricMean,
        rho: profile.rho,
        ln_rho,
        local_density: profile.local_density,
        ell,
        t: d1 * (ln_rho + 1.0),
        degrees: profile.degrees.clone(),
        list_floor: ceil_sizes(&required),
        required,
        demand,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{local_density, Graph};

    fn profile(degrees: Vec<usize>, rho: i64) -> SparsityProfile {
        SparsityProfile {
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            geometric_mean_degree: None,
            neighbourhood_edge_counts: vec![0; degrees.len()],
            degrees,
            local_density: Rational64::from_integer(0),
            rho: Rational64::from_integer(rho),
        }
    }

    /// Bisection oracle for W, kept apart from the Halley implementation.
    fn w_oracle(z: f64) -> f64 {
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

    #[test]
    fn degree_six_list_size() {
        let p = list_size_params(&profile(vec![6], 6), 6.0).unwrap();
        let expected = (1.0 + 2.0 / 6f64.ln()) * 6.0 / w_oracle(1.0);
        assert!((p.demand[0] - expected).abs() < 1e-10);
        assert!((p.demand[0] - 22.388_217_816_066_6).abs() < 1e-9);
        assert_eq!(p.list_floor[0], 23);
    }

    #[test]
    fn isolated_vertex_uses_limit() {
        let p = list_size_params(&profile(vec![0, 6], 6), 4.5).unwrap();
        assert!((p.demand[0] - (1.0 + 2.0 / 6f64.ln()) * 4.5).abs() < 1e-12);
    }

    #[test]
    fn degree_ell_e_gives_unit_w() {
        let deg = 8usize;
        let ell_e = deg as f64 / std::f64::consts::E;
        let p = list_size_params(&profile(vec![deg], 10), ell_e).unwrap();
        let factor = 1.0 + 2.0 / 10f64.ln();
        assert!((p.demand[0] - factor * deg as f64).abs() < 1e-10);
    }

    #[test]
    fn rho_at_most_one_is_rejected() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let err = list_size_params(&local_density(&k4), 6.0).unwrap_err();
        assert_eq!(err.reason_code(), "rho_le_1");
    }

    #[test]
    fn k66_geometric_demand() {
        let k66 = Graph::from_edges(12, (0..6).flat_map(|u| (6..12).map(move |v| (u, v)))).unwrap();
        let p = geometric_demand_params(&local_density(&k66)).unwrap();
        let l6 = 6f64.ln();
        let expected = (1.0 + 1.0 / l6) * 6.0 / w_oracle(6.0 / l6.powi(3));
        for &q in &p.demand {
            assert!((q - expected).abs() < 1e-10);
        }
        assert!((expected - 16.048_282_064_565_9).abs() < 1e-9);
        assert_eq!(p.list_floor, vec![26; 12]);
        assert!((p.geometric_mean_demand().to_f64() - expected).abs() < 1e-10);
    }

    #[test]
    fn geometric_mean_of_two_classes() {
        let mut p = geometric_demand_params(&profile(vec![1, 6, 1, 6], 6)).unwrap();
        let (a, b) = (p.demand[0], p.demand[1]);
        assert!((p.geometric_mean_demand().to_f64() - (a * b).sqrt()).abs() < 1e-10);
        p.demand.clear();
        assert_eq!(p.geometric_mean_demand(), LogValue::ONE);
    }

    #[test]
    fn low_rho_has_no_geometric_demand() {
        let err = geometric_demand_params(&profile(vec![5], 5)).unwrap_err();
        assert_eq!(err.reason_code(), "rho_lt_6");
    }

    #[test]
    fn demand_dominates_ell_and_is_monotone() {
        for rho in [2i64, 6, 50, 1000] {
            for ell in [0.5, 2.0, 6.0, 40.0] {
                let degrees: Vec<usize> = (0..200).collect();
                let p = list_size_params(&profile(degrees, rho), ell).unwrap();
                for d in 1..200 {
                    assert!(p.demand[d] >= ell, "k(v) < ell at deg {d}");
                    assert!(p.demand[d] >= p.demand[d - 1] - 1e-12);
                }
            }
        }
    }
}
