//! Report types with lossless JSON and CSV forms.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bounds::Verdict;
use crate::graph::{Graph, SparsityProfile};

/// One compared pair of quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Which statement of the theory the check exercises.
    pub anchor: String,
    pub lhs: String,
    pub comparison: String,
    pub rhs: String,
    /// How `lhs` and `rhs` are written: `exact` integers, `rational`,
    /// `ln` (natural logarithms of the compared values), `f64`, or `text`.
    pub representation: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: &str,
        lhs: impl ToString,
        comparison: &str,
        rhs: impl ToString,
        representation: &str,
        verdict: Verdict,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            lhs: lhs.to_string(),
            comparison: comparison.into(),
            rhs: rhs.to_string(),
            representation: representation.into(),
            verdict,
            detail: String::new(),
            runtime_ms: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Where an instance came from and what it measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub id: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    /// Exact rational, e.g. `3/2`.
    pub local_density: String,
    pub rho: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometric_mean_degree: Option<f64>,
}

impl InstanceInfo {
    pub fn describe(
        id: &str,
        source: &str,
        seed: Option<u64>,
        g: &Graph,
        profile: &SparsityProfile,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            seed,
            n: g.n(),
            m: g.edge_count(),
            max_degree: profile.max_degree,
            local_density: profile.local_density.to_string(),
            rho: profile.rho.to_string(),
            geometric_mean_degree: profile.geometric_mean_degree,
        }
    }
}

/// An error that stopped an instance early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportError {
    /// `capacity`, `domain` or `input`.
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub version: String,
    pub instance: InstanceInfo,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ReportError>,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl VerificationReport {
    pub fn new(command: &str, instance: InstanceInfo) -> Self {
        Self {
            command: command.into(),
            version: VERSION.into(),
            instance,
            checks: Vec::new(),
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict.is_failure())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn strip_timings(&mut self) {
        for c in &mut self.checks {
            c.runtime_ms = None;
        }
    }
}

/// Reports for a corpus, sorted by instance id.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub reports: Vec<VerificationReport>,
}

/// Process exit status: 0 clean, 1 a check failed or an instance was
/// rejected, 2 a capacity limit was hit.
pub fn exit_code(bundle: &ReportBundle) -> i32 {
    let capacity = bundle
        .reports
        .iter()
        .any(|r| r.error.as_ref().is_some_and(|e| e.kind == "capacity"));
    if capacity {
        2
    } else if bundle
        .reports
        .iter()
        .any(|r| r.failed() || r.error.is_some())
    {
        1
    } else {
        0
    }
}

impl ReportBundle {
    pub fn new(mut reports: Vec<VerificationReport>) -> Self {
        reports.sort_by(|a, b| a.instance.id.cmp(&b.instance.id));
        Self { reports }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One row per check; instance and report fields are repeated on every
    /// row. A report without checks still gets one row with empty check
    /// fields.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.reports {
            if r.checks.is_empty() {
                w.serialize(Row::new(r, None))?;
            }
            for c in &r.checks {
                w.serialize(Row::new(r, Some(c)))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, csv::Error> {
        let mut reader = csv::Reader::from_reader(input);
        let mut reports: Vec<VerificationReport> = Vec::new();
        for row in reader.deserialize::<Row>() {
            let row = row?;
            let start_new = reports.last().is_none_or(|r| r.instance.id != row.id);
            if start_new {
                reports.push(row.report());
            }
            if let Some(c) = row.into_check() {
                reports.last_mut().expect("pushed above").checks.push(c);
            }
        }
        Ok(Self { reports })
    }
}

/// One CSV line. Check fields are empty on the single line written for a
/// report without checks.
#[derive(Clone, Serialize, Deserialize)]
struct Row {
    id: String,
    source: String,
    seed: Option<u64>,
    n: usize,
    m: usize,
    max_degree: usize,
    local_density: String,
    rho: String,
    geometric_mean_degree: Option<f64>,
    command: String,
    version: String,
    /// Notes joined by newlines.
    notes: String,
    error_kind: Option<String>,
    error_message: Option<String>,
    check: Option<String>,
    anchor: Option<String>,
    lhs: Option<String>,
    comparison: Option<String>,
    rhs: Option<String>,
    representation: Option<String>,
    verdict: Option<Verdict>,
    detail: Option<String>,
    runtime_ms: Option<f64>,
}

impl Row {
    fn new(r: &VerificationReport, c: Option<&Check>) -> Self {
        let i = &r.instance;
        Self {
            id: i.id.clone(),
            source: i.source.clone(),
            seed: i.seed,
            n: i.n,
            m: i.m,
            max_degree: i.max_degree,
            local_density: i.local_density.clone(),
            rho: i.rho.clone(),
            geometric_mean_degree: i.geometric_mean_degree,
            command: r.command.clone(),
            version: r.version.clone(),
            notes: r.notes.join("\n"),
            error_kind: r.error.as_ref().map(|e| e.kind.clone()),
            error_message: r.error.as_ref().map(|e| e.message.clone()),
            check: c.map(|c| c.name.clone()),
            anchor: c.map(|c| c.anchor.clone()),
            lhs: c.map(|c| c.lhs.clone()),
            comparison: c.map(|c| c.comparison.clone()),
            rhs: c.map(|c| c.rhs.clone()),
            representation: c.map(|c| c.representation.clone()),
            verdict: c.map(|c| c.verdict),
            detail: c.map(|c| c.detail.clone()),
            runtime_ms: c.and_then(|c| c.runtime_ms),
        }
    }

    fn report(&self) -> VerificationReport {
        VerificationReport {
            command: self.command.clone(),
            version: self.version.clone(),
            instance: InstanceInfo {
                id: self.id.clone(),
                source: self.source.clone(),
                seed: self.seed,
                n: self.n,
                m: self.m,
                max_degree: self.max_degree,
                local_density: self.local_density.clone(),
                rho: self.rho.clone(),
                geometric_mean_degree: self.geometric_mean_degree,
            },
            checks: Vec::new(),
            notes: if self.notes.is_empty() {
                Vec::new()
            } else {
                self.notes.split('\n').map(String::from).collect()
            },
            error: self.error_kind.clone().map(|kind| ReportError {
                kind,
                message: self.error_message.clone().unwrap_or_default(),
            }),
        }
    }

    fn into_check(self) -> Option<Check> {
        Some(Check {
            name: self.check?,
            anchor: self.anchor.unwrap_or_default(),
            lhs: self.lhs.unwrap_or_default(),
            comparison: self.comparison.unwrap_or_default(),
            rhs: self.rhs.unwrap_or_default(),
            representation: self.representation.unwrap_or_default(),
            verdict: self.verdict?,
            detail: self.detail.unwrap_or_default(),
            runtime_ms: self.runtime_ms,
        })
    }
}
