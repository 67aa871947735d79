//! Plot-ready tables of the closed-form bounds over a parameter grid.

use std::io::Write;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    geometric_demand_params, list_size_params, regular_count_ceiling, sparse_list_bound,
    triangle_free_count_bound, BoundError, CountBound,
};
use crate::graph::SparsityProfile;

/// Grid for [`bounds_table`]: one row per `(Δ, f, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsGrid {
    pub degrees: Vec<u64>,
    pub fs: Vec<f64>,
    pub qs: Vec<u64>,
    /// Vertex count of the notional `Δ`-regular graph behind the count
    /// columns; they are reported per vertex.
    pub n: u64,
}

impl Default for BoundsGrid {
    fn default() -> Self {
        Self {
            degrees: vec![3, 6, 12, 24, 48, 100, 300, 1000],
            fs: vec![3.0, 10.0, 100.0, 300.0, 10_000.0],
            qs: vec![4, 8, 16, 40, 100, 400],
            n: 1000,
        }
    }
}

/// One grid cell. A column that cannot be evaluated is empty and its
/// `*_reason` column says why.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub delta: u64,
    pub f: f64,
    pub q: u64,
    /// Local density implied by `f`: neighbourhoods with at most `Δ²/f`
    /// edges have average degree at most `2Δ/f`.
    pub implied_density: f64,
    pub sparse_list_bound: Option<f64>,
    /// `Δ / ln min{Δ, f}`.
    pub sparse_reference: Option<f64>,
    pub sparse_reason: String,
    /// `k(v)` at degree `Δ` with the smallest admissible `ℓ = (d+1)(ln ρ)^3`.
    pub list_size: Option<f64>,
    pub list_size_reason: String,
    /// `q(v)` at degree `Δ`.
    pub geometric_demand: Option<f64>,
    pub geometric_reason: String,
    /// `ln` of the triangle-free count bound, divided by `n`.
    pub count_bound_ln_per_vertex: Option<f64>,
    pub count_bound_reason: String,
    /// `ln` of the regular-graph ceiling, divided by `n`.
    pub ceiling_ln_per_vertex: Option<f64>,
    pub ceiling_reason: String,
}

fn regular_profile(delta: u64, density: f64) -> SparsityProfile {
    let d = Rational64::approximate_float(density).unwrap_or_default();
    SparsityProfile {
        degrees: vec![delta as usize],
        max_degree: delta as usize,
        local_density: d,
        rho: Rational64::from_integer(delta as i64) / (d + 1),
        neighbourhood_edge_counts: vec![0],
        geometric_mean_degree: Some(delta as f64),
    }
}

fn split<T>(r: Result<T, BoundError>) -> (Option<T>, String) {
    match r {
        Ok(x) => (Some(x), String::new()),
        Err(e) => (None, e.reason_code().into()),
    }
}

fn list_size(profile: &SparsityProfile) -> Result<f64, BoundError> {
    let rho = profile.rho_f64();
    if rho <= 1.0 {
        return Err(BoundError::RhoNotAboveOne { rho: profile.rho });
    }
    let ell = (profile.local_density_f64() + 1.0) * rho.ln().powi(3);
    Ok(list_size_params(profile, ell)?.demand[0])
}

pub fn bounds_table(grid: &BoundsGrid) -> Vec<BoundsRow> {
    let mut rows = Vec::new();
    for &delta in &grid.degrees {
        for &f in &grid.fs {
            let density = 2.0 * delta as f64 / f;
            let profile = regular_profile(delta, density);
            let (sparse, sparse_reason) = split(sparse_list_bound(delta, f));
            let (list_size, list_size_reason) = split(list_size(&profile));
            let (geometric, geometric_reason) =
                split(geometric_demand_params(&profile).map(|p| p.demand[0]));
            for &q in &grid.qs {
                let n = grid.n;
                let m = delta * n / 2;
                let (count, mut count_reason) = split(triangle_free_count_bound(n, m, delta, q));
                let count = match count {
                    Some(CountBound::Bound(b)) => Some(b.ln() / n as f64),
                    Some(CountBound::Vacuous { .. }) => {
                        count_reason = "vacuous".into();
                        None
                    }
                    None => None,
                };
                let (ceiling, ceiling_reason) =
                    split(regular_count_ceiling(n, delta, q).map(|c| c.ln() / n as f64));
                rows.push(BoundsRow {
                    delta,
                    f,
                    q,
                    implied_density: density,
                    sparse_list_bound: sparse.as_ref().map(|s| s.bound),
                    sparse_reference: sparse.as_ref().map(|s| s.reference),
                    sparse_reason: sparse_reason.clone(),
                    list_size,
                    list_size_reason: list_size_reason.clone(),
                    geometric_demand: geometric,
                    geometric_reason: geometric_reason.clone(),
                    count_bound_ln_per_vertex: count,
                    count_bound_reason: count_reason,
                    ceiling_ln_per_vertex: ceiling,
                    ceiling_reason,
                });
            }
        }
    }
    rows
}

pub fn write_bounds_csv<W: Write>(rows: &[BoundsRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
