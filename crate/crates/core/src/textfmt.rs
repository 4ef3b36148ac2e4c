//! Plain-text simplex lists.
//!
//! ```text
//! # n=3 r=2
//! 0
//! 1
//! 0 1
//! 0 1 2
//! ```
//!
//! One simplex per line with ascending vertices separated by single spaces; lines starting
//! with `#` are comments. The first comment may be the `# n=<n> r=<r>` header. Writers emit
//! the header followed by the simplices in canonical order, so writing a parsed canonical
//! file reproduces it byte for byte.

use std::path::Path;

use crate::complex::{closure, Ambient, Hypergraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::simplex::Simplex;

pub fn write_simplices<'a>(ambient: Ambient, simplices: impl IntoIterator<Item = &'a Simplex>) -> String {
    let mut out = format!("# n={} r={}\n", ambient.n, ambient.r);
    for s in simplices {
        let mut first = true;
        for v in s.vertices() {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_hypergraph(x: &Hypergraph) -> String {
    write_simplices(x.ambient(), x.iter())
}

pub fn write_complex(y: &SimplicialComplex) -> String {
    write_simplices(y.ambient(), y.iter())
}

fn parse_header(line: &str) -> Option<(u32, usize)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut n = None;
    let mut r = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("r=") {
            r = v.parse().ok();
        } else {
            return None;
        }
    }
    Some((n?, r?))
}

/// Parses a simplex list. Without a header, `n` is the largest vertex and `r` the largest
/// dimension seen.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header = None;
    let mut simplices = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if header.is_none() && simplices.is_empty() {
                header = parse_header(trimmed);
            }
            continue;
        }
        let verts = trimmed
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        if verts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { line: line_no, msg: "vertices must be strictly ascending".into() });
        }
        let s = Simplex::new(verts).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        simplices.push(s);
    }
    let ambient = match header {
        Some((n, r)) => Ambient::new(n, r)?,
        None => Ambient::new(
            simplices.iter().map(Simplex::max_vertex).max().unwrap_or(0),
            simplices.iter().map(Simplex::dim).max().unwrap_or(0),
        )?,
    };
    Hypergraph::new(ambient, simplices)
}

/// Parses a simplex list and closes it under faces, so a file may list only facets.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    Ok(closure(&parse_hypergraph(text)?))
}

pub fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_hypergraph(&text)
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    Ok(closure(&read_hypergraph(path)?))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let text = "# n=3 r=2\n0\n1\n2\n3\n0 1\n0 2\n1 2\n2 3\n0 1 2\n";
        let x = parse_hypergraph(text).unwrap();
        assert_eq!(write_hypergraph(&x), text);
        let y = parse_complex(text).unwrap();
        assert_eq!(write_complex(&y), text);
    }

    #[test]
    fn comments_and_missing_header() {
        let x = parse_hypergraph("# facets only\n0 1 2\n\n# trailing\n2 3\n").unwrap();
        assert_eq!(x.ambient(), Ambient::new(3, 2).unwrap());
        assert_eq!(x.len(), 2);
        let y = parse_complex("0 1 2\n").unwrap();
        assert_eq!(y.len(), 7);
    }

    #[test]
    fn empty_complex_is_header_only() {
        let y = SimplicialComplex::empty(Ambient::new(4, 1).unwrap());
        let text = write_complex(&y);
        assert_eq!(text, "# n=4 r=1\n");
        assert!(parse_complex(&text).unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_hypergraph("1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hypergraph("0\nx y\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_hypergraph("# n=1 r=1\n0 2\n").is_err());
    }
}
