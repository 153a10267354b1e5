//! Edge-list text format.
//!
//! ```text
//! # optional comments anywhere, '#' to end of line
//! n m
//! u v
//! ...
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{Digraph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn two_numbers(line_no: usize, line: &str) -> Result<(usize, usize), ParseError> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| ParseError::Syntax {
            line: line_no,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| ParseError::Syntax {
            line: line_no,
            msg: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(ParseError::Syntax {
            line: line_no,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = two_numbers(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        edges.push(two_numbers(no, line)?);
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Digraph::new(n, &edges)?)
}

/// Writes live-or-dead-agnostic edge list: header uses the id space size.
pub fn write_edge_list(g: &Digraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.id_bound(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}
