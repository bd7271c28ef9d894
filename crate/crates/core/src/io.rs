//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! n 3
//! e 1 2 5
//! e 1 3 4
//! e 2 3 3/2
//! ```
//!
//! Lengths are optional. When any are missing, a Henneberg I graph takes the
//! tight recipe lengths for the missing edges; any other graph takes
//! `1, 2, 3, ...` by position in sorted edge order.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::embed::tight_lengths;
use crate::graph::{edge, henneberg_decompose, Edge, Framework, Graph};
use crate::rational::{format_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_graph_file(text: &str) -> Result<Framework, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(Edge, Option<Rational>, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "n" => {
                if fields.len() != 2 {
                    return Err(err(line, "expected `n <count>`"));
                }
                if n.is_some() {
                    return Err(err(line, "vertex count given twice"));
                }
                n = Some(fields[1].parse().map_err(|_| err(line, format!("bad vertex count {:?}", fields[1])))?);
            }
            "e" => {
                let Some(count) = n else {
                    return Err(err(line, "edge before `n`"));
                };
                if !(3..=4).contains(&fields.len()) {
                    return Err(err(line, "expected `e <i> <j> [length]`"));
                }
                let label = |s: &str| -> Result<usize, ParseError> {
                    let v: usize = s.parse().map_err(|_| err(line, format!("bad vertex label {s:?}")))?;
                    if v == 0 || v > count {
                        return Err(err(line, format!("vertex {v} outside 1..={count}")));
                    }
                    Ok(v)
                };
                let (a, b) = (label(fields[1])?, label(fields[2])?);
                if a == b {
                    return Err(err(line, format!("loop at vertex {a}")));
                }
                let e = edge(a, b);
                if let Some((_, _, first)) = edges.iter().find(|(f, _, _)| *f == e) {
                    return Err(err(line, format!("duplicate edge {}-{} (first on line {first})", e.0, e.1)));
                }
                let length = match fields.get(3) {
                    Some(s) => {
                        let l = parse_rational(s).map_err(|e| err(line, e.to_string()))?;
                        if !l.is_positive() {
                            return Err(err(line, format!("non-positive length {}", format_rational(&l))));
                        }
                        Some(l)
                    }
                    None => None,
                };
                edges.push((e, length, line));
            }
            other => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| err(text.lines().count().max(1), "missing `n <count>`"))?;
    let graph = Graph::new(n, edges.iter().map(|(e, _, _)| *e)).map_err(|e| err(0, e.to_string()))?;
    let mut lengths: BTreeMap<Edge, Rational> =
        edges.iter().filter_map(|(e, l, _)| l.clone().map(|l| (*e, l))).collect();
    if lengths.len() < edges.len() {
        for (e, l) in default_lengths(&graph) {
            lengths.entry(e).or_insert(l);
        }
    }
    Framework::new(graph, lengths).map_err(|e| err(0, e.to_string()))
}

/// Tight recipe lengths for Henneberg I graphs, otherwise `1, 2, 3, ...`.
pub fn default_lengths(g: &Graph) -> BTreeMap<Edge, Rational> {
    if let Ok(dec) = henneberg_decompose(g) {
        if dec.sequence.only_step_i() {
            if let Ok(f) = tight_lengths(&dec.sequence) {
                let lab = |t: usize| dec.labels[t - 1];
                return f.lengths().iter().map(|(&(s, t), l)| (edge(lab(s), lab(t)), l.clone())).collect();
            }
        }
    }
    g.edges().enumerate().map(|(i, e)| (e, int(i as i64 + 1))).collect()
}

pub fn write_graph_file(f: &Framework) -> String {
    let mut out = format!("n {}\n", f.graph().n());
    for (&(a, b), l) in f.lengths() {
        out.push_str(&format!("e {a} {b} {}\n", format_rational(l)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::k33;

    #[test]
    fn parses_triangle() {
        let f = parse_graph_file("n 3\ne 1 2 5\ne 1 3 4\ne 2 3 3\n").unwrap();
        assert_eq!(f.length(1, 2), Some(&int(5)));
        assert_eq!(f.length(2, 3), Some(&int(3)));
    }

    #[test]
    fn comments_and_rationals() {
        let f = parse_graph_file("# tri\nn 3 # three\n\ne 1 2 3/2\ne 1 3 0.25\ne 2 3 1\n").unwrap();
        assert_eq!(f.length(1, 2), Some(&crate::rational::rat(3, 2)));
        assert_eq!(f.length(1, 3), Some(&crate::rational::rat(1, 4)));
    }

    #[test]
    fn defaults_for_k33() {
        let text: String =
            std::iter::once("n 6\n".to_string()).chain(k33().edges().map(|(a, b)| format!("e {a} {b}\n"))).collect();
        let f = parse_graph_file(&text).unwrap();
        assert_eq!(f.graph().edge_count(), 9);
        assert_eq!(f.length(1, 2), Some(&int(1)));
        assert_eq!(f.length(5, 6), Some(&int(9)));
    }

    #[test]
    fn defaults_for_henneberg_i_use_the_recipe() {
        let f = parse_graph_file("n 3\ne 1 2\ne 1 3\ne 2 3\n").unwrap();
        let mut ls: Vec<_> = f.lengths().values().cloned().collect();
        ls.sort();
        assert_eq!(ls, vec![int(3), int(4), int(5)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_graph_file("n 3\ne 1 1 2\n").unwrap_err().line, 2);
        assert_eq!(parse_graph_file("n 3\ne 1 2\ne 2 1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph_file("n 3\n\ne 1 2 -1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph_file("e 1 2\n").unwrap_err().line, 1);
        assert_eq!(parse_graph_file("n 3\nq\n").unwrap_err().line, 2);
        assert_eq!(parse_graph_file("n 3\ne 1 4\n").unwrap_err().line, 2);
        assert!(parse_graph_file("e 1 1 2").is_err());
    }

    #[test]
    fn round_trip() {
        let f = parse_graph_file("n 3\ne 1 2 5\ne 1 3 4\ne 2 3 7/2\n").unwrap();
        assert_eq!(parse_graph_file(&write_graph_file(&f)).unwrap(), f);
    }
}
