use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::uniform::sample_extension;
use super::{RandomSource, SampleError};
use crate::bounds::BoundParams;
use crate::counting::{
    count_colourings_with, Colour, CountConfig, ListAssignment, PartialColouring,
};
use crate::graph::{neighbourhood_degrees, Graph, InducedSubgraph};

/// The vertex under study and a threshold `t_u` for each of its neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSetup {
    pub vertex: usize,
    /// `N(v)` in increasing order.
    pub neighbours: Vec<usize>,
    /// `d_u`: degree of each neighbour inside `g[N(v)]`.
    pub inner_degrees: Vec<usize>,
    pub thresholds: Vec<f64>,
}

impl ExperimentSetup {
    /// `t_u = (d_u + 1)(ln ρ + 1)` with `ρ` from `params`.
    pub fn from_params(g: &Graph, v: usize, params: &BoundParams) -> Result<Self, SampleError> {
        let mut s = Self::with_threshold(g, v, 0.0)?;
        s.thresholds = s
            .inner_degrees
            .iter()
            .map(|&d| params.threshold(d))
            .collect();
        Ok(s)
    }

    /// The same threshold for every neighbour.
    pub fn with_threshold(g: &Graph, v: usize, t: f64) -> Result<Self, SampleError> {
        if v >= g.n() {
            return Err(SampleError::InvalidInput(format!(
                "vertex {v} out of range"
            )));
        }
        if t.is_nan() {
            return Err(SampleError::InvalidInput("threshold is NaN".into()));
        }
        let neighbours = g.neighbors(v).to_vec();
        Ok(Self {
            vertex: v,
            thresholds: vec![t; neighbours.len()],
            inner_degrees: neighbourhood_degrees(g, v),
            neighbours,
        })
    }
}

/// One run of the experiment. Colourings are indexed by the vertices of `g`;
/// the studied vertex stays uncoloured throughout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTrace {
    pub seed: u64,
    pub stream: u64,
    pub vertex: usize,
    /// Neighbours with `ℓ_{c0}(u) < t_u`; they keep their colour.
    pub marked: Vec<usize>,
    /// `X_0`: neighbours with `ℓ_{c0}(u) >= t_u`, uncoloured then recoloured.
    pub uncoloured: Vec<usize>,
    /// `t_u`, aligned with `neighbours`.
    #[serde(serialize_with = "ser_reals", deserialize_with = "de_reals")]
    pub thresholds: Vec<f64>,
    /// `|L_{c1}(v)|`: colours of `L(v)` not used on a marked neighbour.
    pub k_v: usize,
    /// `ℓ_c(v)` for the final colouring.
    pub ell_final: usize,
    pub neighbours: Vec<usize>,
    /// `ℓ_{c0}(u)`, aligned with `neighbours`.
    pub ell_c0: Vec<usize>,
    /// `Σ_{x ∈ L(v)} Σ_{u ∈ 𝒩(x)} 1/(ℓ_{c0}(u) - d_u - 1)`, where `𝒩(x)` holds
    /// the uncoloured neighbours that still see `x` under the kept colours.
    /// Absent when a denominator is not positive.
    pub double_sum: Option<f64>,
    pub initial: Vec<Option<Colour>>,
    pub recoloured: Vec<Option<Colour>>,
    /// Set when the uncoloured set had no proper recolouring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anomaly: Option<String>,
}

impl ExperimentTrace {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace serialises")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Real {
    Finite(f64),
    Named(String),
}

fn ser_reals<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let reals: Vec<Real> = xs
        .iter()
        .map(|&x| {
            if x.is_finite() {
                Real::Finite(x)
            } else {
                Real::Named(if x > 0.0 { "inf" } else { "-inf" }.into())
            }
        })
        .collect();
    reals.serialize(s)
}

fn de_reals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    Vec::<Real>::deserialize(d)?
        .into_iter()
        .map(|r| match r {
            Real::Finite(x) => Ok(x),
            Real::Named(s) if s == "inf" => Ok(f64::INFINITY),
            Real::Named(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Real::Named(s) => Err(serde::de::Error::custom(format!("not a number: {s}"))),
        })
        .collect()
}

/// `g - v` with lists and the position of each neighbour of `v` in it.
pub(crate) struct Reduced {
    pub sub: InducedSubgraph,
    pub lists: ListAssignment,
    pub neighbours: Vec<usize>,
}

impl Reduced {
    pub fn new(
        g: &Graph,
        lists: &ListAssignment,
        setup: &ExperimentSetup,
    ) -> Result<Self, SampleError> {
        if lists.n() != g.n()
            || setup.vertex >= g.n()
            || setup.neighbours != g.neighbors(setup.vertex)
        {
            return Err(SampleError::InvalidInput(
                "setup does not match the graph".into(),
            ));
        }
        let sub = g.without_vertex(setup.vertex).expect("vertex in range");
        let neighbours = setup
            .neighbours
            .iter()
            .map(|&u| sub.old_to_new[u].expect("neighbour survives"))
            .collect();
        Ok(Self {
            lists: lists.restrict(&sub),
            sub,
            neighbours,
        })
    }

    fn is_neighbour(&self, w: usize) -> bool {
        self.neighbours.contains(&w)
    }

    /// `ℓ_{c0}(u)` for each neighbour, where `c0` keeps only the colours
    /// outside `N(v)`.
    pub fn ell_c0(&self, c: &PartialColouring) -> Vec<usize> {
        self.neighbours
            .iter()
            .map(|&u| {
                self.lists
                    .list(u)
                    .iter()
                    .filter(|&&x| {
                        self.sub
                            .graph
                            .neighbors(u)
                            .iter()
                            .all(|&w| self.is_neighbour(w) || c.get(w) != Some(x))
                    })
                    .count()
            })
            .collect()
    }

    /// Per neighbour: true when it belongs to `X_0`.
    pub fn uncolour_mask(&self, setup: &ExperimentSetup, ell_c0: &[usize]) -> Vec<bool> {
        ell_c0
            .iter()
            .zip(&setup.thresholds)
            .map(|(&l, &t)| l as f64 >= t)
            .collect()
    }

    /// `c` with `X_0` uncoloured.
    pub fn restrict_away(&self, c: &PartialColouring, in_x0: &[bool]) -> PartialColouring {
        let mut c1 = c.clone();
        for (&u, &drop) in self.neighbours.iter().zip(in_x0) {
            if drop {
                c1.unset(u);
            }
        }
        c1
    }

    /// Colours of `L(v)` not used by `c` on any neighbour that `c` colours.
    pub fn free_at_vertex(&self, lists: &ListAssignment, v: usize, c: &PartialColouring) -> usize {
        lists
            .list(v)
            .iter()
            .filter(|&&x| self.neighbours.iter().all(|&u| c.get(u) != Some(x)))
            .count()
    }

    pub fn double_sum(
        &self,
        lists: &ListAssignment,
        setup: &ExperimentSetup,
        c1: &PartialColouring,
        ell_c0: &[usize],
        in_x0: &[bool],
    ) -> Option<f64> {
        let mut sum = 0.0;
        for (i, &u) in self.neighbours.iter().enumerate() {
            if !in_x0[i] {
                continue;
            }
            let denom = ell_c0[i] as f64 - setup.inner_degrees[i] as f64 - 1.0;
            let seen = lists
                .list(setup.vertex)
                .iter()
                .filter(|&&x| {
                    self.lists.contains(u, x)
                        && self
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
            if denom <= 0.0 {
                return None;
            }
            sum += seen as f64 / denom;
        }
        Some(sum)
    }

    pub fn lift(&self, c: &PartialColouring, n: usize) -> Vec<Option<Colour>> {
        let mut out = vec![None; n];
        for (i, &old) in self.sub.new_to_old.iter().enumerate() {
            out[old] = c.get(i);
        }
        out
    }

    pub fn lift_set(&self, local: impl Iterator<Item = usize>) -> Vec<usize> {
        local.map(|i| self.sub.new_to_old[i]).collect()
    }
}

/// Runs the experiment around `setup.vertex` on `g - v`:
///
/// 1. draw `c` uniformly from the proper colourings of `g - v`;
/// 2. let `c0` be `c` restricted away from `N(v)` and keep (mark) the
///    neighbours with `ℓ_{c0}(u) < t_u`;
/// 3. uncolour the others, `X_0`, leaving `c1`;
/// 4. recolour `X_0` uniformly among the proper extensions of `c1`.
pub fn four_step_experiment(
    g: &Graph,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    source: RandomSource,
) -> Result<ExperimentTrace, SampleError> {
    four_step_experiment_with(g, lists, setup, source, &CountConfig::default())
}

pub fn four_step_experiment_with(
    g: &Graph,
    lists: &ListAssignment,
    setup: &ExperimentSetup,
    source: RandomSource,
    cfg: &CountConfig,
) -> Result<ExperimentTrace, SampleError> {
    let red = Reduced::new(g, lists, setup)?;
    let mut rng = source.rng();
    let base = count_colourings_with(&red.sub.graph, &red.lists, cfg)?;
    if base == 0u32.into() {
        return Err(SampleError::Uncolourable { count: base });
    }
    let c = sample_extension(
        &red.sub.graph,
        &red.lists,
        &PartialColouring::new(red.sub.graph.n()),
        &mut rng,
        cfg,
    )?
    .colouring;
    let ell_c0 = red.ell_c0(&c);
    let in_x0 = red.uncolour_mask(setup, &ell_c0);
    let c1 = red.restrict_away(&c, &in_x0);
    let (recoloured, anomaly) =
        match sample_extension(&red.sub.graph, &red.lists, &c1, &mut rng, cfg) {
            Ok(s) => (s.colouring, None),
            Err(SampleError::Uncolourable { .. }) => (
                c.clone(),
                Some("no proper recolouring of the uncoloured set".to_string()),
            ),
            Err(e) => return Err(e),
        };
    let v = setup.vertex;
    let pick = |want: bool| {
        red.lift_set(
            red.neighbours
                .iter()
                .zip(&in_x0)
                .filter(move |(_, &x)| x == want)
                .map(|(&u, _)| u),
        )
    };
    Ok(ExperimentTrace {
        seed: source.seed,
        stream: source.stream,
        vertex: v,
        marked: pick(false),
        uncoloured: pick(true),
        thresholds: setup.thresholds.clone(),
        k_v: red.free_at_vertex(lists, v, &c1),
        ell_final: red.free_at_vertex(lists, v, &recoloured),
        neighbours: setup.neighbours.clone(),
        double_sum: red.double_sum(lists, setup, &c1, &ell_c0, &in_x0),
        ell_c0,
        initial: red.lift(&c, g.n()),
        recoloured: red.lift(&recoloured, g.n()),
        anomaly,
    })
}
