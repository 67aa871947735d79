use serde::{Deserialize, Serialize};

use super::{lambert_w, BoundError, LogValue};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseListBound {
    /// `min{f, Δ} / 3`.
    pub rho: f64,
    /// `(1 + 2/ln ρ) Δ / W(ρ / (ln ρ)^3)`.
    pub bound: f64,
    /// Asymptotic reference `Δ / ln min{Δ, f}`.
    pub reference: f64,
}

/// Sufficient list size for graphs whose neighbourhoods span at most `Δ²/f` edges.
pub fn sparse_list_bound(max_degree: u64, f: f64) -> Result<SparseListBound, BoundError> {
    let delta = max_degree as f64;
    if !(f >= 1.0 && f <= delta * delta + 1.0) {
        return Err(BoundError::Domain {
            what: "f (must satisfy 1 <= f <= Δ²+1)",
            value: f,
        });
    }
    let m = f.min(delta);
    let rho = m / 3.0;
    if rho <= 1.0 {
        return Err(BoundError::RhoNotAboveOne {
            rho: num_rational::Rational64::approximate_float(rho).unwrap_or_default(),
        });
    }
    let ln_rho = rho.ln();
    let bound = (1.0 + 2.0 / ln_rho) * delta / lambert_w(rho / ln_rho.powi(3))?;
    Ok(SparseListBound {
        rho,
        bound,
        reference: delta / m.ln(),
    })
}

/// Result of the triangle-free `q`-colouring count bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountBound {
    Bound(LogValue),
    /// `δ >= 1`: the formula gives nothing.
    Vacuous {
        delta: f64,
    },
}

/// `(1 - 1/q)^m ((1 - δ) q)^n` with `δ = (4/q) e^{Δ/q}`, in log space.
///
/// A pure formula evaluation; it makes no claim that the count bound applies.
pub fn triangle_free_count_bound(
    n: u64,
    m: u64,
    max_degree: u64,
    q: u64,
) -> Result<CountBound, BoundError> {
    if q < 2 {
        return Err(BoundError::InvalidInput(format!(
            "q = {q} must be at least 2"
        )));
    }
    let qf = q as f64;
    let delta = 4.0 / qf * (max_degree as f64 / qf).exp();
    if delta >= 1.0 {
        return Ok(CountBound::Vacuous { delta });
    }
    let ln = m as f64 * (1.0 - 1.0 / qf).ln() + n as f64 * ((1.0 - delta) * qf).ln();
    Ok(CountBound::Bound(LogValue::from_ln(ln)))
}

/// `(1 - 1/q)^{Δn/2} ((1 + 2 ln n / n) q)^n`, in log space.
pub fn regular_count_ceiling(n: u64, max_degree: u64, q: u64) -> Result<LogValue, BoundError> {
    if n < 2 || q < 2 {
        return Err(BoundError::InvalidInput(format!(
            "need n >= 2 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    let (nf, qf) = (n as f64, q as f64);
    let ln = max_degree as f64 * nf / 2.0 * (1.0 - 1.0 / qf).ln()
        + nf * ((1.0 + 2.0 * nf.ln() / nf) * qf).ln();
    Ok(LogValue::from_ln(ln))
}

/// `(q / √D)^n` in log space.
pub fn geometric_count_bound(
    q_geomean: LogValue,
    geometric_mean_degree: f64,
    n: u64,
) -> Result<LogValue, BoundError> {
    if geometric_mean_degree.is_nan() || geometric_mean_degree < 1.0 {
        return Err(BoundError::Domain {
            what: "geometric mean degree (must be >= 1)",
            value: geometric_mean_degree,
        });
    }
    if n == 0 {
        return Ok(LogValue::ONE);
    }
    let ln = n as f64 * (q_geomean.ln() - 0.5 * geometric_mean_degree.ln());
    Ok(LogValue::from_ln(ln))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn sparse_bound_regression() {
        let b = sparse_list_bound(300, 300.0).unwrap();
        assert_eq!(b.rho, 100.0);
        let l = 100f64.ln();
        let expected = (1.0 + 2.0 / l) * 300.0 / w_oracle(100.0 / l.powi(3));
        assert!((b.bound - expected).abs() < 1e-9);
        assert!((b.bound - 747.370_273_459_240_2).abs() < 1e-8);
        assert!((b.reference - 300.0 / 300f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sparse_bound_clamps_at_max_degree() {
        let a = sparse_list_bound(300, 300.0).unwrap();
        let b = sparse_list_bound(300, 1e4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sparse_bound_rejects_small_f() {
        assert_eq!(
            sparse_list_bound(300, 3.0).unwrap_err().reason_code(),
            "rho_le_1"
        );
        assert_eq!(
            sparse_list_bound(3, 100.0).unwrap_err().reason_code(),
            "domain"
        );
        assert_eq!(
            sparse_list_bound(300, 0.5).unwrap_err().reason_code(),
            "domain"
        );
    }

    #[test]
    fn triangle_free_bound_regression() {
        let CountBound::Bound(b) = triangle_free_count_bound(10, 15, 6, 12).unwrap() else {
            panic!("unexpected vacuous bound");
        };
        let delta = 4.0 / 12.0 * 0.5f64.exp();
        assert!((delta - 0.549_573_756_900_042_7).abs() < 1e-15);
        let expected = 15.0 * (11.0f64 / 12.0).ln() + 10.0 * ((1.0 - delta) * 12.0).ln();
        assert!((b.ln() - expected).abs() < 1e-12);
        assert!((b.ln() - 15.568_286_466_572_1).abs() < 1e-10);
    }

    #[test]
    fn triangle_free_bound_vacuous_and_edgeless() {
        assert!(matches!(
            triangle_free_count_bound(10, 15, 12, 4).unwrap(),
            CountBound::Vacuous { .. }
        ));
        let CountBound::Bound(b) = triangle_free_count_bound(7, 0, 1, 40).unwrap() else {
            panic!()
        };
        let delta = 0.1 * (1.0f64 / 40.0).exp();
        assert!((b.ln() - 7.0 * ((1.0 - delta) * 40.0).ln()).abs() < 1e-12);
        assert!(triangle_free_count_bound(1, 0, 0, 1).is_err());
    }

    #[test]
    fn ceiling_regression() {
        let c = regular_count_ceiling(10, 3, 4).unwrap();
        let expected = 15.0 * 0.75f64.ln() + 10.0 * ((1.0 + 2.0 * 10f64.ln() / 10.0) * 4.0).ln();
        assert!((c.ln() - expected).abs() < 1e-12);
        assert!((c.ln() - 13.335_617_478_039_03).abs() < 1e-10);
        assert!(regular_count_ceiling(10, 3, 1).is_err());
        assert!(regular_count_ceiling(1, 3, 4).is_err());
    }

    #[test]
    fn bound_stays_below_ceiling_for_regular_inputs() {
        for delta in 1..=12u64 {
            for q in 2..=40u64 {
                for n in [10u64, 20, 50, 100] {
                    if delta * n % 2 == 1 {
                        continue;
                    }
                    let ceiling = regular_count_ceiling(n, delta, q).unwrap();
                    if let CountBound::Bound(b) =
                        triangle_free_count_bound(n, delta * n / 2, delta, q).unwrap()
                    {
                        assert!(b.ln() < ceiling.ln(), "Δ={delta} q={q} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn geometric_bound() {
        let b = geometric_count_bound(LogValue::from_f64(24.0), 6.0, 12).unwrap();
        assert!((b.ln() - 12.0 * (24f64.ln() - 0.5 * 6f64.ln())).abs() < 1e-12);
        assert!((b.ln() - 27.386_089_148_807_02).abs() < 1e-10);
        let cancel = geometric_count_bound(LogValue::from_f64(6f64.sqrt()), 6.0, 9).unwrap();
        assert!(cancel.ln().abs() < 1e-12);
        assert_eq!(
            geometric_count_bound(LogValue::from_f64(5.0), 4.0, 0).unwrap(),
            LogValue::ONE
        );
        assert!(geometric_count_bound(LogValue::from_f64(5.0), 0.5, 3).is_err());
    }
}
