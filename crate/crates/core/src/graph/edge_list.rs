//! Whitespace-separated edge-list text format.
//!
//! Each data line is `u v` or `u v w`; `u` and `v` are base-10 non-negative
//! integers and `w` is a decimal real. Lines whose first non-blank character
//! is `#` are comments, blank lines are skipped.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One undirected weighted edge with raw (uncompacted) endpoint ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub u: u64,
    pub v: u64,
    pub w: T,
}

impl<T> Edge<T> {
    pub fn new(u: u64, v: u64, w: T) -> Self {
        Self { u, v, w }
    }
}

/// An ordered list of raw edges.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeList<T> {
    pub entries: Vec<Edge<T>>,
}

/// What [`EdgeList::validate`] removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub self_loops_dropped: usize,
}

impl<T: Scalar> EdgeList<T> {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, u: u64, v: u64, w: T) {
        self.entries.push(Edge::new(u, v, w));
    }

    /// Drops self-loops and rejects any weight that is not a positive finite
    /// real. Error line numbers are 1-based entry positions.
    pub fn validate(&mut self) -> Result<ValidationReport> {
        for (i, e) in self.entries.iter().enumerate() {
            check_weight(e.w, i + 1)?;
        }
        let before = self.entries.len();
        self.entries.retain(|e| e.u != e.v);
        Ok(ValidationReport { self_loops_dropped: before - self.entries.len() })
    }

    /// Replaces every weight with `w`.
    pub fn set_all_weights(&mut self, w: T) {
        for e in &mut self.entries {
            e.w = w;
        }
    }

    /// Writes one `u v w` line per entry.
    pub fn write_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for e in &self.entries {
            writeln!(out, "{} {} {}", e.u, e.v, e.w)?;
        }
        Ok(())
    }
}

fn check_weight<T: Scalar>(w: T, line: usize) -> Result<()> {
    if w.is_finite() && w > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight { line, weight: w.to_f64_lossy() })
    }
}

/// Parses and validates an edge list. Entries without a weight column take
/// `default_weight`; self-loops are dropped.
pub fn parse_edge_list<T: Scalar, R: BufRead>(reader: R, default_weight: T) -> Result<EdgeList<T>> {
    let mut list = EdgeList::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v` or `u v w`, got {} fields", fields.len()),
            });
        }
        let u = parse_id(fields[0], line_no)?;
        let v = parse_id(fields[1], line_no)?;
        let w = match fields.get(2) {
            Some(tok) => {
                let raw: f64 = tok
                    .parse()
                    .map_err(|_| Error::Parse { line: line_no, message: format!("invalid weight `{tok}`") })?;
                let w = T::from_f64_lossy(raw);
                if !raw.is_finite() || raw <= 0.0 || !w.is_finite() || w <= T::zero() {
                    return Err(Error::NonPositiveWeight { line: line_no, weight: raw });
                }
                w
            }
            None => default_weight,
        };
        if u != v {
            list.push(u, v, w);
        }
    }
    check_weight(default_weight, 0)
        .map_err(|_| Error::InvalidArgument(format!("default weight must be positive, got {default_weight}")))?;
    Ok(list)
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| Error::Parse { line, message: format!("invalid node id `{tok}`") })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<EdgeList<f64>> {
        parse_edge_list(text.as_bytes(), 1.0)
    }

    #[test]
    fn weighted_lines() {
        let el = parse("0 1 2.5\n1 2 1.0").unwrap();
        assert_eq!(el.entries, vec![Edge::new(0, 1, 2.5), Edge::new(1, 2, 1.0)]);
    }

    #[test]
    fn comment_and_default_weight() {
        let el = parse("# comment\n3 4").unwrap();
        assert_eq!(el.entries, vec![Edge::new(3, 4, 1.0)]);
    }

    #[test]
    fn self_loop_dropped() {
        let el = parse("0 0 1.0\n0 1 1.0").unwrap();
        assert_eq!(el.entries, vec![Edge::new(0, 1, 1.0)]);
    }

    #[test]
    fn blank_lines_and_indented_comments() {
        let el = parse("\n   \n  # x\n\t5\t6\t3\n").unwrap();
        assert_eq!(el.entries, vec![Edge::new(5, 6, 3.0)]);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        match parse("0 1\n2 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("0 1\n\n7\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("1 2 3 4"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("-1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("1 2 abc"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn non_positive_weights_rejected() {
        assert!(matches!(parse("0 1 0"), Err(Error::NonPositiveWeight { line: 1, .. })));
        assert!(matches!(parse("0 1 1\n1 2 -3"), Err(Error::NonPositiveWeight { line: 2, .. })));
        assert!(matches!(parse("0 1 nan"), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(parse("0 1 inf"), Err(Error::NonPositiveWeight { .. })));
        assert!(parse_edge_list::<f64, _>("0 1".as_bytes(), 0.0).is_err());
    }

    #[test]
    fn validate_in_memory_list() {
        let mut el = EdgeList::<f64>::new();
        el.push(1, 1, 2.0);
        el.push(1, 2, 2.0);
        assert_eq!(el.validate().unwrap().self_loops_dropped, 1);
        assert_eq!(el.len(), 1);
        el.push(2, 3, -1.0);
        assert!(matches!(el.validate(), Err(Error::NonPositiveWeight { line: 2, .. })));
    }

    #[test]
    fn write_then_parse() {
        let el = parse("10 20 2.5\n20 30 1\n").unwrap();
        let mut buf = Vec::new();
        el.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "10 20 2.5\n20 30 1\n");
        assert_eq!(parse_edge_list::<f64, _>(&buf[..], 1.0).unwrap(), el);
    }
}
