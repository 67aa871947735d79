//! Instance-level verification: each command measures a graph, evaluates the
//! relevant bounds, counts exactly where it can, and records every comparison
//! as a [`Check`] in a [`VerificationReport`].
//!
//! Commands never return early with an error. Problems are recorded in the
//! report's `error` field so a corpus run always yields one report per
//! instance.

mod commands;
mod probes;
mod report;
mod table;

pub use commands::{geometric_bound_report, list_bound_report};
pub use probes::{avoidance_report, experiment_report, markov_report, ExperimentOptions};
pub use report::{
    exit_code, Check, InstanceInfo, ReportBundle, ReportError, VerificationReport, VERSION,
};
pub use table::{bounds_table, write_bounds_csv, BoundsGrid, BoundsRow};

use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use crate::bounds::{BoundError, LogValue};
use crate::counting::{CountConfig, CountError, ListAssignment};
use crate::generators::{generate, named_graph, GenError, GeneratorSpec};
use crate::graph::{Graph, GraphError};
use crate::sampler::SampleError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Input(String),
}

impl VerifyError {
    pub fn kind(&self) -> &'static str {
        match self {
            VerifyError::Capacity(_) => "capacity",
            VerifyError::Domain(_) => "domain",
            VerifyError::Input(_) => "input",
        }
    }

    fn to_report_error(&self) -> ReportError {
        ReportError {
            kind: self.kind().into(),
            message: self.to_string(),
        }
    }
}

impl From<CountError> for VerifyError {
    fn from(e: CountError) -> Self {
        if e.is_capacity() {
            VerifyError::Capacity(e.to_string())
        } else {
            VerifyError::Input(e.to_string())
        }
    }
}

impl From<SampleError> for VerifyError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::Count(c) => c.into(),
            e if e.is_capacity() => VerifyError::Capacity(e.to_string()),
            e => VerifyError::Input(e.to_string()),
        }
    }
}

impl From<BoundError> for VerifyError {
    fn from(e: BoundError) -> Self {
        VerifyError::Domain(e.to_string())
    }
}

impl From<GraphError> for VerifyError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::IsolatedVertex(_) => VerifyError::Domain(e.to_string()),
            e => VerifyError::Input(e.to_string()),
        }
    }
}

impl From<GenError> for VerifyError {
    fn from(e: GenError) -> Self {
        VerifyError::Input(e.to_string())
    }
}

/// A graph together with where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: String,
    pub source: String,
    pub seed: Option<u64>,
    pub graph: Graph,
}

impl Instance {
    pub fn new(id: impl Into<String>, graph: Graph) -> Self {
        let id = id.into();
        Self {
            source: id.clone(),
            id,
            seed: None,
            graph,
        }
    }

    /// Loads `named:NAME`, `spec:FILE` (a generator spec) or a graph file.
    /// The source string doubles as the instance id.
    pub fn load(source: &str) -> Result<Self, VerifyError> {
        if let Some(name) = source.strip_prefix("named:") {
            return Ok(Self::new(source, named_graph(name)?));
        }
        if let Some(path) = source.strip_prefix("spec:") {
            let spec = GeneratorSpec::parse_text(&read(Path::new(path))?)?;
            let mut inst = Self::new(source, generate(&spec)?.graph);
            inst.seed = spec.seed();
            return Ok(inst);
        }
        Ok(Self::new(
            source,
            Graph::parse_text(&read(Path::new(source))?)?,
        ))
    }
}

fn read(path: &Path) -> Result<String, VerifyError> {
    std::fs::read_to_string(path)
        .map_err(|e| VerifyError::Input(format!("{}: {e}", path.display())))
}

/// Where the list assignment comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ListMode {
    /// Derived from the bound being verified.
    Auto,
    Uniform(usize),
    Explicit(ListAssignment),
}

impl ListMode {
    fn resolve(
        &self,
        n: usize,
        auto: impl FnOnce() -> Option<ListAssignment>,
    ) -> Result<Option<ListAssignment>, VerifyError> {
        match self {
            ListMode::Auto => Ok(auto()),
            ListMode::Uniform(q) => Ok(Some(ListAssignment::uniform(n, *q))),
            ListMode::Explicit(l) if l.n() == n => Ok(Some(l.clone())),
            ListMode::Explicit(l) => Err(VerifyError::Input(format!(
                "list file covers {} vertices, the graph has {n}",
                l.n()
            ))),
        }
    }

    fn is_auto(&self) -> bool {
        matches!(self, ListMode::Auto)
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub counting: CountConfig,
    pub lists: ListMode,
    /// Explicit vertex order; each command has its own default.
    pub order: Option<Vec<usize>>,
    /// Record per-check wall-clock time. Off by default so that reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            counting: CountConfig::default(),
            lists: ListMode::Auto,
            order: None,
            timings: false,
        }
    }
}

impl VerifyOptions {
    fn order_or(
        &self,
        n: usize,
        default: impl FnOnce() -> Vec<usize>,
    ) -> Result<Vec<usize>, VerifyError> {
        let Some(order) = &self.order else {
            return Ok(default());
        };
        let mut seen = vec![false; n];
        let ok = order.len() == n
            && order
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true));
        if !ok {
            return Err(VerifyError::Input(format!(
                "--order is not a permutation of 0..{n}"
            )));
        }
        Ok(order.clone())
    }
}

/// Ascending degree, ties by index.
pub fn default_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    order
}

/// Shortest exact decimal rendering of a log-space value; `-inf` for zero.
fn ln_text(x: LogValue) -> String {
    x.ln().to_string()
}

/// Runs `f`, returning its result and the elapsed milliseconds.
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn set_runtime(checks: &mut [Check], enabled: bool, ms: f64) {
    if enabled {
        for c in checks {
            c.runtime_ms = Some(ms);
        }
    }
}

fn finish(mut report: VerificationReport, outcome: Result<(), VerifyError>) -> VerificationReport {
    if let Err(e) = outcome {
        report.error = Some(e.to_report_error());
    }
    report
}
