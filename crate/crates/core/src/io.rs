//! Text formats for complexes.
//!
//! Two headers are recognized. `complex <n>` introduces a facet list, one
//! facet per line as space-separated vertex ids. `graph <n>` introduces an
//! edge list, one `u v` pair per line, and denotes the clique complex of
//! that graph. Lines starting with `#` and blank lines are ignored;
//! duplicate facets and edges are deduplicated.

use std::path::Path;

use crate::complex::{CliqueComplex, Complex, Face, GeneralComplex, VertexId};
use crate::error::{Error, Result};

fn parse_ids(line: &str, lineno: usize) -> Result<Vec<VertexId>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<VertexId>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("expected a vertex id, found {tok:?}"),
            })
        })
        .collect()
}

/// Parses a complex from its textual form.
pub fn parse_complex_str(text: &str) -> Result<Complex> {
    parse_complex_str_with_warnings(text).map(|(c, _)| c)
}

/// Like [`parse_complex_str`], also reporting recoverable oddities: an
/// explicit face list that is not downward closed parses fine (closure is
/// applied) but is flagged.
pub fn parse_complex_str_with_warnings(text: &str) -> Result<(Complex, Vec<String>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let n: u32 = parts
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or(Error::Parse {
            line: lineno,
            msg: format!("header must be 'complex <n>' or 'graph <n>', found {header:?}"),
        })?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing tokens after header".into(),
        });
    }

    let range_err = |lineno: usize, e: Error| match e {
        Error::VertexOutOfRange { id, n } => Error::Parse {
            line: lineno,
            msg: format!("vertex {id} out of range 1..={n}"),
        },
        other => other,
    };

    match kind {
        "complex" => {
            let mut facets = Vec::new();
            for (lineno, line) in lines {
                let ids = parse_ids(line, lineno)?;
                let facet = Face::new(ids).map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "facet must be a nonempty set of distinct vertices".into(),
                })?;
                if facet.max_vertex() > n || facet.vertices()[0] < 1 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("vertex {} out of range 1..={n}", facet.max_vertex()),
                    });
                }
                facets.push(facet);
            }
            let mut warnings = Vec::new();
            if let Some(msg) = explicit_list_closure_warning(&facets) {
                warnings.push(msg);
            }
            let complex = GeneralComplex::from_facets(n, facets).map_err(|e| range_err(0, e))?;
            Ok((Complex::General(complex), warnings))
        }
        "graph" => {
            let mut edges = Vec::new();
            for (lineno, line) in lines {
                let ids = parse_ids(line, lineno)?;
                if ids.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("edge line must have exactly two vertex ids, found {}", ids.len()),
                    });
                }
                if ids[0] == ids[1] {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("self-loop at vertex {}", ids[0]),
                    });
                }
                for &id in &ids {
                    if id < 1 || id > n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("vertex {id} out of range 1..={n}"),
                        });
                    }
                }
                edges.push((ids[0], ids[1]));
            }
            Ok((Complex::Clique(CliqueComplex::from_edges(n, &edges)?), Vec::new()))
        }
        other => Err(Error::Parse {
            line: lineno,
            msg: format!("unknown header kind {other:?}"),
        }),
    }
}

/// A facet list never needs a warning, and neither does a complete
/// explicit face list. Redundant faces without full closure mean the user
/// supplied a partial face list; the closure fills the gaps.
fn explicit_list_closure_warning(faces: &[Face]) -> Option<String> {
    let has_redundant = faces.iter().any(|f| {
        faces.iter().any(|g| {
            g.vertex_count() > f.vertex_count() && f.vertices().iter().all(|v| g.contains_vertex(*v))
        })
    });
    if !has_redundant {
        return None;
    }
    let set: std::collections::BTreeSet<&Face> = faces.iter().collect();
    let closed = faces
        .iter()
        .flat_map(|f| f.boundary())
        .all(|sub| set.contains(&sub));
    if closed {
        None
    } else {
        Some("explicit face list is not downward closed; closure applied".to_string())
    }
}

/// Reads and parses a complex file.
pub fn read_complex_file(path: impl AsRef<Path>) -> Result<Complex> {
    let text = std::fs::read_to_string(path)?;
    parse_complex_str(&text)
}

/// Reads and parses a complex file, returning parse warnings as well.
pub fn read_complex_file_with_warnings(path: impl AsRef<Path>) -> Result<(Complex, Vec<String>)> {
    let text = std::fs::read_to_string(path)?;
    parse_complex_str_with_warnings(&text)
}

/// Renders a complex back to its textual form.
pub fn format_complex(c: &Complex) -> String {
    let mut out = String::new();
    match c {
        Complex::General(g) => {
            out.push_str(&format!("complex {}\n", c.vertex_count()));
            for f in g.facets() {
                let ids: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
                out.push_str(&ids.join(" "));
                out.push('\n');
            }
        }
        Complex::Clique(g) => {
            out.push_str(&format!("graph {}\n", c.vertex_count()));
            for (u, v) in g.edges() {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    out
}
