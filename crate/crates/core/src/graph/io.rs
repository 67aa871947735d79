//! Plain-text graph format.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//!
//! Files without the `n m` header are read as bare edge lists with
//! `n = max index + 1`. When any token is not a non-negative integer the file
//! is read as a labelled edge list and labels are numbered in order of first
//! appearance.

use std::collections::HashMap;
use std::str::FromStr;

use super::{Graph, GraphError};

fn data_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect()
}

fn parse_error(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

impl Graph {
    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let lines = data_lines(text);
        for (line, toks) in &lines {
            if toks.len() != 2 {
                return Err(parse_error(
                    *line,
                    format!("expected two tokens, found {}", toks.len()),
                ));
            }
        }
        let numeric: Option<Vec<(usize, usize)>> = lines
            .iter()
            .map(|(_, t)| Some((t[0].parse().ok()?, t[1].parse().ok()?)))
            .collect();
        let Some(pairs) = numeric else {
            return Self::parse_labelled(&lines);
        };
        if let Some((&(n, m), rest)) = pairs.split_first() {
            if rest.len() == m && rest.iter().all(|&(u, v)| u < n && v < n) {
                return Self::from_edges(n, rest.iter().copied())
                    .map_err(|e| at_line(e, &lines[1..], rest));
            }
        }
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::from_edges(n, pairs.iter().copied()).map_err(|e| at_line(e, &lines, &pairs))
    }

    fn parse_labelled(lines: &[(usize, Vec<&str>)]) -> Result<Graph, GraphError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::with_capacity(lines.len());
        for (line, toks) in lines {
            let mut ends = [0usize; 2];
            for (slot, tok) in ends.iter_mut().zip(toks) {
                *slot = *index.entry(tok).or_insert_with(|| {
                    labels.push(tok.to_string());
                    labels.len() - 1
                });
            }
            if ends[0] == ends[1] {
                return Err(parse_error(*line, format!("self-loop at '{}'", toks[0])));
            }
            edges.push((ends[0], ends[1]));
        }
        Self::from_edges(labels.len(), edges)?.with_labels(labels)
    }

    /// Header-first text form; parses back to an equal graph.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn at_line(err: GraphError, lines: &[(usize, Vec<&str>)], pairs: &[(usize, usize)]) -> GraphError {
    match err {
        GraphError::SelfLoop(v) => {
            let line = pairs
                .iter()
                .position(|&(a, b)| a == v && b == v)
                .map(|i| lines[i].0)
                .unwrap_or(0);
            parse_error(line, format!("self-loop at vertex {v}"))
        }
        other => other,
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_format() {
        let g: Graph = "# triangle plus isolated\n4 3\n0 1\n1 2\n0 2\n"
            .parse()
            .unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn edge_list_only() {
        let g: Graph = "0 1\n1 2\n2 3\n".parse().unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 3));
    }

    #[test]
    fn labelled_edges() {
        let g: Graph = "a b\nb c\n".parse().unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.labels().unwrap(), ["a", "b", "c"]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            Graph::parse_text("3 2\n0 1 2\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_text("0 1\n2 2\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::from_edges(6, [(0, 3), (1, 4), (2, 5), (0, 5)]).unwrap();
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        let empty = Graph::empty(0);
        assert_eq!(Graph::parse_text(&empty.to_text()).unwrap(), empty);
    }
}
