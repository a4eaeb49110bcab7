//! Reading and writing hypergraph files.
//!
//! Plain format (`.hyg`): one hyperedge per line, decimal node IDs separated by
//! single spaces. Lines starting with `#` are comments. Written output is
//! canonical: members ascending, lines in lexicographic order of their member
//! sequences.
//!
//! Benson format: `<name>-nverts.txt` holds one hyperedge size per line and
//! `<name>-simplices.txt` the concatenated member stream, one ID per line.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{BuildReport, Hypergraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Benson,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" | "hyg" => Ok(Format::Plain),
            "benson" => Ok(Format::Benson),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub graph: Hypergraph,
    pub report: BuildReport,
}

pub fn load(path: impl AsRef<Path>, format: Format) -> Result<Loaded> {
    let path = path.as_ref();
    let edges = match format {
        Format::Plain => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_plain(path, &text)?
        }
        Format::Benson => {
            let (nverts, simplices) = benson_paths(path);
            let sizes = fs::read_to_string(&nverts).map_err(|e| Error::io(&nverts, e))?;
            let members = fs::read_to_string(&simplices).map_err(|e| Error::io(&simplices, e))?;
            parse_benson(&nverts, &sizes, &simplices, &members)?
        }
    };
    if edges.is_empty() {
        return Err(Error::EmptyInput(path.to_path_buf()));
    }
    let (graph, report) = Hypergraph::from_labeled_edges(edges)?;
    if report.duplicates_removed > 0 {
        log::info!(
            "{}: removed {} duplicate hyperedges",
            path.display(),
            report.duplicates_removed
        );
    }
    Ok(Loaded { graph, report })
}

/// Accepts either the dataset prefix (`dir/name`) or the path of either file.
fn benson_paths(path: &Path) -> (PathBuf, PathBuf) {
    let s = path.to_string_lossy();
    let prefix = s
        .strip_suffix("-nverts.txt")
        .or_else(|| s.strip_suffix("-simplices.txt"))
        .unwrap_or(&s)
        .to_string();
    (
        PathBuf::from(format!("{prefix}-nverts.txt")),
        PathBuf::from(format!("{prefix}-simplices.txt")),
    )
}

fn parse_id(path: &Path, line: usize, tok: &str) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid node id {tok:?}"),
    })
}

pub(crate) fn parse_plain(path: &Path, text: &str) -> Result<Vec<Vec<u64>>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.starts_with('#') {
            continue;
        }
        if body.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "empty hyperedge".into(),
            });
        }
        let e = body
            .split_ascii_whitespace()
            .map(|tok| parse_id(path, line, tok))
            .collect::<Result<Vec<_>>>()?;
        edges.push(e);
    }
    Ok(edges)
}

fn parse_benson(
    nverts_path: &Path,
    sizes: &str,
    simplices_path: &Path,
    members: &str,
) -> Result<Vec<Vec<u64>>> {
    let mut stream = members
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_id(simplices_path, i + 1, l.trim()));
    let mut edges = Vec::new();
    for (i, raw) in sizes.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        let k: usize = body.parse().map_err(|_| Error::Parse {
            path: nverts_path.to_path_buf(),
            line,
            message: format!("invalid hyperedge size {body:?}"),
        })?;
        if k == 0 {
            return Err(Error::Parse {
                path: nverts_path.to_path_buf(),
                line,
                message: "empty hyperedge".into(),
            });
        }
        let mut e = Vec::with_capacity(k);
        for _ in 0..k {
            match stream.next() {
                Some(id) => e.push(id?),
                None => {
                    return Err(Error::Parse {
                        path: nverts_path.to_path_buf(),
                        line,
                        message: "simplex stream ended early".into(),
                    })
                }
            }
        }
        edges.push(e);
    }
    if stream.next().is_some() {
        return Err(Error::Parse {
            path: simplices_path.to_path_buf(),
            line: members.lines().count(),
            message: "trailing members not covered by the size list".into(),
        });
    }
    Ok(edges)
}

/// Hyperedges in label space, members ascending, sorted lexicographically.
pub fn canonical_edges(g: &Hypergraph) -> Vec<Vec<u64>> {
    let mut edges: Vec<Vec<u64>> = (0..g.num_edges() as u32).map(|e| g.labeled_edge(e)).collect();
    edges.sort_unstable();
    edges
}

pub fn write_plain<W: Write>(g: &Hypergraph, mut out: W) -> std::io::Result<()> {
    for e in canonical_edges(g) {
        let mut first = true;
        for v in e {
            if !first {
                out.write_all(b" ")?;
            }
            first = false;
            write!(out, "{v}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn save_plain(g: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_plain(g, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `<prefix>-nverts.txt` and `<prefix>-simplices.txt`.
pub fn save_benson(g: &Hypergraph, prefix: impl AsRef<Path>) -> Result<()> {
    let (nverts, simplices) = benson_paths(prefix.as_ref());
    let mut sizes = String::new();
    let mut members = String::new();
    for e in canonical_edges(g) {
        sizes.push_str(&format!("{}\n", e.len()));
        for v in e {
            members.push_str(&format!("{v}\n"));
        }
    }
    fs::write(&nverts, sizes).map_err(|e| Error::io(&nverts, e))?;
    fs::write(&simplices, members).map_err(|e| Error::io(&simplices, e))
}
