//! Test-corpus generators.
//!
//! Every random generator is driven by a seed, so a [`GeneratorSpec`]
//! determines its graph. The profile returned with each graph is measured
//! on the output; targets in the spec are only aimed at.
//!
//! Spec files are flat `key = value` text:
//!
//! ```text
//! kind = triangle_free_gnp
//! n = 12
//! p = 0.3
//! seed = 7
//! ```
//!
//! For `doubled_regularization`, `base` names the kind (or a named graph)
//! that is regularized and the remaining keys configure it.

mod named;
mod random;
mod regularize;

pub use named::named_graph;
pub use random::{
    bipartite_random, raise_density, regular_triangle_free, triangle_free_gnp, DEFAULT_ATTEMPTS,
};
pub use regularize::{regularize, MAX_ROUNDS};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{local_density, Graph, SparsityProfile};
use crate::sampler::RandomSource;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("unknown named graph '{0}'")]
    UnknownName(String),
    #[error("gave up after {attempts} {what}")]
    Exhausted { what: &'static str, attempts: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    TriangleFreeGnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    BipartiteRandom {
        left: usize,
        right: usize,
        p: f64,
        seed: u64,
    },
    RegularTriangleFree {
        n: usize,
        degree: usize,
        seed: u64,
        attempts: u64,
    },
    Named {
        name: String,
    },
    DoubledRegularization {
        base: Box<GeneratorSpec>,
        degree: usize,
    },
    /// A triangle-free `G(n, p)` with edges added inside neighbourhoods up
    /// to local density `target_d`.
    BoundedDensity {
        n: usize,
        p: f64,
        target_d: f64,
        seed: u64,
    },
}

/// A generated graph with its measured profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub graph: Graph,
    pub profile: SparsityProfile,
    /// For regularized graphs, the original vertex of each vertex.
    pub origin: Option<Vec<usize>>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    let (graph, origin) = build(spec)?;
    Ok(Generated {
        profile: local_density(&graph),
        graph,
        origin,
    })
}

fn build(spec: &GeneratorSpec) -> Result<(Graph, Option<Vec<usize>>), GenError> {
    let rng = |seed: u64| RandomSource::new(seed, 0).rng();
    Ok(match spec {
        GeneratorSpec::TriangleFreeGnp { n, p, seed } => {
            (triangle_free_gnp(*n, *p, &mut rng(*seed))?, None)
        }
        GeneratorSpec::BipartiteRandom {
            left,
            right,
            p,
            seed,
        } => (bipartite_random(*left, *right, *p, &mut rng(*seed))?, None),
        GeneratorSpec::RegularTriangleFree {
            n,
            degree,
            seed,
            attempts,
        } => (
            regular_triangle_free(*n, *degree, *attempts, &mut rng(*seed))?,
            None,
        ),
        GeneratorSpec::Named { name } => (named_graph(name)?, None),
        GeneratorSpec::DoubledRegularization { base, degree } => {
            let (g, inner) = build(base)?;
            let (h, phi) = regularize(&g, *degree)?;
            let origin = match inner {
                Some(first) => phi.into_iter().map(|v| first[v]).collect(),
                None => phi,
            };
            (h, Some(origin))
        }
        GeneratorSpec::BoundedDensity {
            n,
            p,
            target_d,
            seed,
        } => {
            let mut r = rng(*seed);
            let base = triangle_free_gnp(*n, *p, &mut r)?;
            (raise_density(&base, *target_d, &mut r)?, None)
        }
    })
}

impl GeneratorSpec {
    /// The seed driving the random choices, if any.
    pub fn seed(&self) -> Option<u64> {
        match self {
            GeneratorSpec::TriangleFreeGnp { seed, .. }
            | GeneratorSpec::BipartiteRandom { seed, .. }
            | GeneratorSpec::RegularTriangleFree { seed, .. }
            | GeneratorSpec::BoundedDensity { seed, .. } => Some(*seed),
            GeneratorSpec::Named { .. } => None,
            GeneratorSpec::DoubledRegularization { base, .. } => base.seed(),
        }
    }

    /// Parses the flat `key = value` format.
    pub fn parse_text(text: &str) -> Result<Self, GenError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                GenError::InvalidSpec(format!("line {}: expected key = value", i + 1))
            })?;
            let key = k.trim().to_string();
            if map.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(GenError::InvalidSpec(format!(
                    "line {}: duplicate key '{key}'",
                    i + 1
                )));
            }
        }
        let kind = map
            .remove("kind")
            .ok_or_else(|| GenError::InvalidSpec("missing 'kind'".into()))?;
        let mut fields = Fields(map);
        let spec = fields.spec(&kind)?;
        if let Some(k) = fields.0.keys().next() {
            return Err(GenError::InvalidSpec(format!(
                "unused key '{k}' for kind {kind}"
            )));
        }
        Ok(spec)
    }

    /// The flat text form; parses back to an equal spec.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        self.write_fields(&mut lines, "kind");
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn write_fields(&self, out: &mut Vec<(String, String)>, kind_key: &str) {
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        match self {
            GeneratorSpec::TriangleFreeGnp { n, p, seed } => {
                put(kind_key, "triangle_free_gnp".into());
                put("n", n.to_string());
                put("p", p.to_string());
                put("seed", seed.to_string());
            }
            GeneratorSpec::BipartiteRandom {
                left,
                right,
                p,
                seed,
            } => {
                put(kind_key, "bipartite_random".into());
                put("left", left.to_string());
                put("right", right.to_string());
                put("p", p.to_string());
                put("seed", seed.to_string());
            }
            GeneratorSpec::RegularTriangleFree {
                n,
                degree,
                seed,
                attempts,
            } => {
                put(kind_key, "regular_triangle_free".into());
                put("n", n.to_string());
                put("degree", degree.to_string());
                put("seed", seed.to_string());
                put("attempts", attempts.to_string());
            }
            GeneratorSpec::Named { name } => {
                put(kind_key, "named".into());
                put("name", name.clone());
            }
            GeneratorSpec::DoubledRegularization { base, degree } => {
                put(kind_key, "doubled_regularization".into());
                put("degree", degree.to_string());
                base.write_fields(out, "base");
            }
            GeneratorSpec::BoundedDensity {
                n,
                p,
                target_d,
                seed,
            } => {
                put(kind_key, "bounded_density".into());
                put("n", n.to_string());
                put("p", p.to_string());
                put("target_d", target_d.to_string());
                put("seed", seed.to_string());
            }
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut fields = Vec::new();
        self.write_fields(&mut fields, "kind");
        let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, GenError> {
        let raw = self
            .0
            .remove(key)
            .ok_or_else(|| GenError::InvalidSpec(format!("missing '{key}'")))?;
        raw.parse()
            .map_err(|_| GenError::InvalidSpec(format!("bad value '{raw}' for '{key}'")))
    }

    fn take_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T, GenError> {
        if self.0.contains_key(key) {
            self.take(key)
        } else {
            Ok(default)
        }
    }

    fn spec(&mut self, kind: &str) -> Result<GeneratorSpec, GenError> {
        Ok(match kind {
            "triangle_free_gnp" => GeneratorSpec::TriangleFreeGnp {
                n: self.take("n")?,
                p: self.take("p")?,
                seed: self.take("seed")?,
            },
            "bipartite_random" => GeneratorSpec::BipartiteRandom {
                left: self.take("left")?,
                right: self.take("right")?,
                p: self.take("p")?,
                seed: self.take("seed")?,
            },
            "regular_triangle_free" => GeneratorSpec::RegularTriangleFree {
                n: self.take("n")?,
                degree: self.take("degree")?,
                seed: self.take("seed")?,
                attempts: self.take_or("attempts", DEFAULT_ATTEMPTS)?,
            },
            "named" => GeneratorSpec::Named {
                name: self.take("name")?,
            },
            "doubled_regularization" => {
                let degree = self.take("degree")?;
                let base: String = self.take("base")?;
                let base = match base.as_str() {
                    "triangle_free_gnp"
                    | "bipartite_random"
                    | "regular_triangle_free"
                    | "named"
                    | "bounded_density" => self.spec(&base)?,
                    name => GeneratorSpec::Named {
                        name: name.to_string(),
                    },
                };
                GeneratorSpec::DoubledRegularization {
                    base: Box::new(base),
                    degree,
                }
            }
            "bounded_density" => GeneratorSpec::BoundedDensity {
                n: self.take("n")?,
                p: self.take("p")?,
                target_d: self.take("target_d")?,
                seed: self.take("seed")?,
            },
            other => return Err(GenError::InvalidSpec(format!("unknown kind '{other}'"))),
        })
    }
}
