//! Line-based text formats for posets and graphs.
//!
//! ```text
//! poset <name>
//! elements <n>
//! cover <u> <v>
//! ```
//!
//! `leq` is accepted for `cover`. Graphs use `graph`, `vertices <n>` and
//! `edge <u> <v>`. `#` starts a comment anywhere on a line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::generators::{GraphError, SimpleGraph};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    MissingCount(&'static str),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A parsed poset file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetFile {
    pub name: Option<String>,
    pub poset: Poset,
}

struct Parsed {
    name: Option<String>,
    count: Option<usize>,
    pairs: Vec<(usize, usize)>,
}

fn parse_lines(
    text: &str,
    header: &str,
    count_kw: &str,
    pair_kws: &[&str],
) -> Result<Parsed, FormatError> {
    let mut out = Parsed {
        name: None,
        count: None,
        pairs: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| FormatError::Syntax { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let number = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| err(format!("expected a non-negative integer, found `{w}`")))
        };
        match words[0] {
            kw if kw == header => {
                if words.len() > 1 {
                    out.name = Some(words[1..].join(" "));
                }
            }
            kw if kw == count_kw => {
                if words.len() != 2 {
                    return Err(err(format!("`{count_kw}` takes one number")));
                }
                if out.count.is_some() {
                    return Err(err(format!("duplicate `{count_kw}` line")));
                }
                out.count = Some(number(words[1])?);
            }
            kw if pair_kws.contains(&kw) => {
                if words.len() != 3 {
                    return Err(err(format!("`{kw}` takes two numbers")));
                }
                if out.count.is_none() {
                    return Err(err(format!("`{kw}` before `{count_kw}`")));
                }
                out.pairs.push((number(words[1])?, number(words[2])?));
            }
            other => return Err(err(format!("unknown keyword `{other}`"))),
        }
    }
    Ok(out)
}

pub fn parse_poset(text: &str) -> Result<PosetFile, FormatError> {
    let parsed = parse_lines(text, "poset", "elements", &["cover", "leq"])?;
    let n = parsed.count.ok_or(FormatError::MissingCount("elements"))?;
    let poset = Poset::close_and_validate(n, parsed.pairs)?;
    Ok(PosetFile {
        name: parsed.name,
        poset,
    })
}

/// Writes the cover relation, which determines the poset after closure.
pub fn write_poset(name: &str, p: &Poset) -> String {
    let mut s = String::new();
    writeln!(s, "poset {name}").unwrap();
    writeln!(s, "elements {}", p.len()).unwrap();
    for (u, v) in p.cover_pairs() {
        writeln!(s, "cover {u} {v}").unwrap();
    }
    s
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph, FormatError> {
    let parsed = parse_lines(text, "graph", "vertices", &["edge"])?;
    let n = parsed.count.ok_or(FormatError::MissingCount("vertices"))?;
    Ok(SimpleGraph::new(n, parsed.pairs)?)
}

pub fn write_graph(g: &SimpleGraph) -> String {
    let mut s = String::from("graph\n");
    writeln!(s, "vertices {}", g.vertex_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "edge {u} {v}").unwrap();
    }
    s
}
