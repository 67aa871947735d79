use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::list_size_params;
use crate::counting::ListAssignment;
use crate::graph::{local_density, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn check(
    name: impl Into<String>,
    lhs: String,
    relation: &str,
    rhs: String,
    holds: bool,
) -> HypothesisCheck {
    HypothesisCheck {
        name: name.into(),
        lhs,
        relation: relation.into(),
        rhs,
        holds,
    }
}

/// Hypotheses of the `ℓ^n` colouring bound on a concrete instance.
///
/// The density condition `d <= Δ/6 - 1` is compared exactly. Failures are
/// reported, never raised.
pub fn check_list_hypotheses(g: &Graph, lists: &ListAssignment, ell: f64) -> HypothesisReport {
    let profile = local_density(g);
    let d = profile.local_density;
    let cap = Rational64::new(profile.max_degree as i64, 6) - 1;
    let mut checks = vec![check(
        "local_density",
        d.to_string(),
        "<=",
        cap.to_string(),
        d <= cap,
    )];

    let rho = profile.rho_f64();
    let ell_min = (profile.local_density_f64() + 1.0) * rho.ln().powi(3);
    checks.push(check(
        "ell",
        ell.to_string(),
        ">=",
        ell_min.to_string(),
        ell >= ell_min,
    ));

    match list_size_params(&profile, ell) {
        Ok(params) => {
            for v in 0..g.n() {
                let size = lists.size(v);
                checks.push(check(
                    format!("list_size[{v}]"),
                    size.to_string(),
                    ">=",
                    params.demand[v].to_string(),
                    size as f64 >= params.demand[v],
                ));
            }
        }
        Err(e) => checks.push(check(
            "list_size",
            "-".into(),
            ">=",
            format!("undefined: {e}"),
            false,
        )),
    }
    HypothesisReport { checks }
}
