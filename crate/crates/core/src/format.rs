//! Line-oriented text format for A-types.
//!
//! ```text
//! ATYPE 1
//! NODES 3
//! 0 INPUT
//! 1 NAND
//! 2 NAND
//! ARROWS 4
//! 0 1
//! 0 1
//! 1 2
//! 1 2
//! INPUT_ORDER 0
//! OUTPUT_ORDER 2
//! DELAY 2
//! ```
//!
//! Repeated arrow lines are parallel arrows. Fields are separated by single
//! spaces, ids are decimal, and lines end with LF.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{validate, AType, ATypeGraph, NodeId, NodeKind, Violation};

pub const HEADER: &str = "ATYPE 1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEof(&'static str),
    #[error("expected header `{HEADER}`, found `{0}`")]
    BadHeader(String),
    #[error("expected `{expected}`, found `{found}`")]
    UnexpectedDirective { expected: &'static str, found: String },
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("unknown node kind `{0}`")]
    UnknownKind(String),
    #[error("node id {id} out of range (node count {count})")]
    DanglingNode { id: usize, count: usize },
    #[error("node {0} declared twice")]
    DuplicateNode(usize),
    #[error("trailing content `{0}`")]
    Trailing(String),
    #[error("invariant violated: {0}")]
    Invalid(Violation),
}

/// Renders an A-type in the text format. Output ends with a newline.
pub fn serialize(atype: &AType) -> String {
    let g = &atype.graph;
    let mut s = String::new();
    s.push_str(HEADER);
    s.push('\n');
    let _ = writeln!(s, "NODES {}", g.size());
    for (id, kind) in g.kinds().iter().enumerate() {
        let _ = writeln!(s, "{id} {kind}");
    }
    let _ = writeln!(s, "ARROWS {}", g.arrows().len());
    for (src, dst) in g.arrows() {
        let _ = writeln!(s, "{src} {dst}");
    }
    let _ = writeln!(s, "INPUT_ORDER{}", join_ids(g.input_order()));
    let _ = writeln!(s, "OUTPUT_ORDER{}", join_ids(g.output_order()));
    let _ = writeln!(s, "DELAY {}", atype.delay);
    s
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter().map(|id| format!(" {id}")).collect()
}

/// Parses and validates an A-type.
pub fn parse(text: &str) -> Result<AType, ParseError> {
    let (atype, lines) = parse_inner(text)?;
    if let Some(v) = validate(&atype.graph).into_iter().next() {
        let line = v
            .node()
            .and_then(|n| lines.node_lines.get(n).copied())
            .unwrap_or(lines.orders_line);
        return Err(ParseError {
            line,
            kind: ParseErrorKind::Invalid(v),
        });
    }
    Ok(atype)
}

/// Parses the syntax only; the graph may violate A-type invariants.
pub fn parse_unchecked(text: &str) -> Result<AType, ParseError> {
    parse_inner(text).map(|(a, _)| a)
}

struct LineInfo {
    node_lines: Vec<usize>,
    orders_line: usize,
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Split<'a, char>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &'static str) -> Result<&'a str, ParseError> {
        match self.iter.next() {
            Some((i, l)) if !(l.is_empty() && self.rest_blank()) => {
                self.line = i + 1;
                Ok(l)
            }
            _ => Err(ParseError {
                line: self.line + 1,
                kind: ParseErrorKind::UnexpectedEof(what),
            }),
        }
    }

    fn rest_blank(&self) -> bool {
        self.iter.clone().all(|(_, l)| l.is_empty())
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            kind,
        }
    }
}

fn parse_inner(text: &str) -> Result<(AType, LineInfo), ParseError> {
    let mut lines = Lines {
        iter: text.split('\n').enumerate(),
        line: 0,
    };

    let header = lines.next("header")?;
    if header != HEADER {
        return Err(lines.err(ParseErrorKind::BadHeader(header.to_string())));
    }

    let count = directive_count(&mut lines, "NODES")?;
    let mut kinds: Vec<Option<NodeKind>> = vec![None; count];
    let mut node_lines = vec![0; count];
    for _ in 0..count {
        let l = lines.next("node line")?;
        let (id, tok) = split_pair(l).ok_or_else(|| lines.err(ParseErrorKind::Malformed(l.into())))?;
        let id = parse_id(id).ok_or_else(|| lines.err(ParseErrorKind::Malformed(l.into())))?;
        let kind = NodeKind::from_token(tok)
            .ok_or_else(|| lines.err(ParseErrorKind::UnknownKind(tok.into())))?;
        if id >= count {
            return Err(lines.err(ParseErrorKind::DanglingNode { id, count }));
        }
        if kinds[id].is_some() {
            return Err(lines.err(ParseErrorKind::DuplicateNode(id)));
        }
        kinds[id] = Some(kind);
        node_lines[id] = lines.line;
    }
    // All ids are distinct and in range, so `count` lines cover every id.
    let kinds: Vec<NodeKind> = kinds.into_iter().map(|k| k.expect("every id declared")).collect();

    let arrow_count = directive_count(&mut lines, "ARROWS")?;
    let mut arrows = Vec::with_capacity(arrow_count);
    for _ in 0..arrow_count {
        let l = lines.next("arrow line")?;
        let (a, b) = split_pair(l).ok_or_else(|| lines.err(ParseErrorKind::Malformed(l.into())))?;
        let (a, b) = match (parse_id(a), parse_id(b)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(lines.err(ParseErrorKind::Malformed(l.into()))),
        };
        for id in [a, b] {
            if id >= count {
                return Err(lines.err(ParseErrorKind::DanglingNode { id, count }));
            }
        }
        arrows.push((a, b));
    }

    let inputs = directive_ids(&mut lines, "INPUT_ORDER", count)?;
    let outputs = directive_ids(&mut lines, "OUTPUT_ORDER", count)?;
    let orders_line = lines.line;

    let l = lines.next("DELAY")?;
    let delay = match l.strip_prefix("DELAY ") {
        Some(v) => parse_id(v).ok_or_else(|| lines.err(ParseErrorKind::Malformed(l.into())))?,
        None => {
            return Err(lines.err(ParseErrorKind::UnexpectedDirective {
                expected: "DELAY",
                found: l.into(),
            }))
        }
    };

    for (i, rest) in lines.iter.by_ref() {
        if !rest.is_empty() {
            return Err(ParseError {
                line: i + 1,
                kind: ParseErrorKind::Trailing(rest.into()),
            });
        }
    }

    let graph = ATypeGraph::from_parts(kinds, arrows, inputs, outputs);
    Ok((
        AType::new(graph, delay),
        LineInfo {
            node_lines,
            orders_line,
        },
    ))
}

fn split_pair(l: &str) -> Option<(&str, &str)> {
    let mut it = l.split(' ');
    let a = it.next()?;
    let b = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Strict decimal: digits only, no sign, no surrounding whitespace.
fn parse_id(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn directive_count(lines: &mut Lines<'_>, name: &'static str) -> Result<usize, ParseError> {
    let l = lines.next(name)?;
    let mut it = l.split(' ');
    if it.next() != Some(name) {
        return Err(lines.err(ParseErrorKind::UnexpectedDirective {
            expected: name,
            found: l.into(),
        }));
    }
    match (it.next().and_then(parse_id), it.next()) {
        (Some(n), None) => Ok(n),
        _ => Err(lines.err(ParseErrorKind::Malformed(l.into()))),
    }
}

fn directive_ids(
    lines: &mut Lines<'_>,
    name: &'static str,
    count: usize,
) -> Result<Vec<NodeId>, ParseError> {
    let l = lines.next(name)?;
    let mut it = l.split(' ');
    if it.next() != Some(name) {
        return Err(lines.err(ParseErrorKind::UnexpectedDirective {
            expected: name,
            found: l.into(),
        }));
    }
    let mut ids = Vec::new();
    for tok in it {
        let id = parse_id(tok).ok_or_else(|| lines.err(ParseErrorKind::Malformed(l.into())))?;
        if id >= count {
            return Err(lines.err(ParseErrorKind::DanglingNode { id, count }));
        }
        ids.push(id);
    }
    Ok(ids)
}
