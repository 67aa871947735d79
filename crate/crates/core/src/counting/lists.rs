//! List assignments and their text format.
//!
//! ```text
//! 0: 1 2 3
//! 1: 2 3
//! ```
//!
//! or a single header line `uniform q`, meaning every vertex gets `{0, .., q-1}`.
//! Colour names in files may be sparse; they are renumbered densely in
//! increasing order on load.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::CountError;
use crate::graph::InducedSubgraph;

pub type Colour = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignment {
    lists: Vec<Vec<Colour>>,
    palette: usize,
    uniform: bool,
}

impl ListAssignment {
    /// Sorts and deduplicates every list.
    pub fn new(mut lists: Vec<Vec<Colour>>) -> Self {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        let palette = lists
            .iter()
            .filter_map(|l| l.last())
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0);
        let uniform = lists.windows(2).all(|w| w[0] == w[1]);
        Self {
            lists,
            palette,
            uniform,
        }
    }

    /// Every vertex gets `{0, .., q-1}`.
    pub fn uniform(n: usize, q: usize) -> Self {
        Self::new(vec![(0..q as Colour).collect(); n])
    }

    /// Vertex `v` gets `{0, .., sizes[v]-1}`.
    pub fn prefix(sizes: &[usize]) -> Self {
        Self::new(sizes.iter().map(|&s| (0..s as Colour).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: usize) -> &[Colour] {
        &self.lists[v]
    }

    pub fn size(&self, v: usize) -> usize {
        self.lists[v].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.lists.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, v: usize, x: Colour) -> bool {
        self.lists[v].binary_search(&x).is_ok()
    }

    /// One more than the largest colour in any list.
    pub fn palette(&self) -> usize {
        self.palette
    }

    /// True iff all lists are identical.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// The common list size when all lists are identical.
    pub fn uniform_size(&self) -> Option<usize> {
        if !self.uniform {
            None
        } else {
            Some(self.lists.first().map_or(0, Vec::len))
        }
    }

    /// All colours appearing in some list.
    pub fn colours(&self) -> Vec<Colour> {
        self.lists
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Lists carried over to an induced subgraph.
    pub fn restrict(&self, sub: &InducedSubgraph) -> Self {
        Self::new(
            sub.new_to_old
                .iter()
                .map(|&v| self.lists[v].clone())
                .collect(),
        )
    }

    /// Same lists with colour `x` removed everywhere.
    pub fn without_colour(&self, x: Colour) -> Self {
        Self::new(
            self.lists
                .iter()
                .map(|l| l.iter().copied().filter(|&c| c != x).collect())
                .collect(),
        )
    }

    /// Parses the text format for a graph on `n` vertices.
    ///
    /// Returns the dense assignment and the original colour names, indexed by
    /// dense colour.
    pub fn parse_text(text: &str, n: usize) -> Result<(Self, Vec<u64>), CountError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if let Some((line, first)) = lines.first() {
            if let Some(rest) = first.strip_prefix("uniform") {
                if lines.len() > 1 {
                    return Err(parse_error(
                        lines[1].0,
                        "no lines allowed after a uniform header",
                    ));
                }
                let q: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(*line, "expected `uniform q`"))?;
                return Ok((Self::uniform(n, q), (0..q as u64).collect()));
            }
        }
        let mut raw: Vec<Option<Vec<u64>>> = vec![None; n];
        for (line, text) in &lines {
            let (head, tail) = text
                .split_once(':')
                .ok_or_else(|| parse_error(*line, "expected `v: c1 c2 ...`"))?;
            let v: usize = head
                .trim()
                .parse()
                .map_err(|_| parse_error(*line, "bad vertex index"))?;
            if v >= n {
                return Err(parse_error(
                    *line,
                    format!("vertex {v} out of range for n = {n}"),
                ));
            }
            if raw[v].is_some() {
                return Err(parse_error(*line, format!("vertex {v} listed twice")));
            }
            let colours = tail
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| parse_error(*line, "bad colour"))?;
            raw[v] = Some(colours);
        }
        if let Some(v) = raw.iter().position(Option::is_none) {
            return Err(CountError::InvalidInput(format!(
                "no list given for vertex {v}"
            )));
        }
        let raw: Vec<Vec<u64>> = raw.into_iter().map(Option::unwrap).collect();
        let names: Vec<u64> = raw
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let dense = raw
            .iter()
            .map(|l| {
                l.iter()
                    .map(|c| names.binary_search(c).unwrap() as Colour)
                    .collect()
            })
            .collect();
        Ok((Self::new(dense), names))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, l) in self.lists.iter().enumerate() {
            out.push_str(&format!("{v}:"));
            for c in l {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        out
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> CountError {
    CountError::InvalidInput(format!("line {line}: {}", message.into()))
}
