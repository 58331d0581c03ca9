//! Text formats. Coordinates, points and nodes are written 1-based.
//!
//! * `.lrc`: `n=<n> k=<k> r=<r> t=<t>` then `k` rows of `n` binary digits.
//!   `r=0 t=0` marks an unannotated code. Reading is strict so that writing
//!   a parsed file reproduces it byte for byte.
//! * `.mesh`: `k=<k> r=<r> m=<m> l=<l>`, then `RL <i>: p ...` for each red
//!   line and `BL <j>: p ...` for each blue line.
//! * `.cover`: `k=<k> r=<r> eta=<eta>`, then `A <i>: p ...` per subset.
//! * `.rg`: `n=<n>`, then `IN <i>: j ...` for each inner node.
//!
//! `.mesh`, `.cover` and `.rg` readers skip blank lines and lines starting
//! with `#`.

use crate::combinatorics::{Mesh, SubsetFamily};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec, CodeParams, LinearCode};
use crate::graphs::RepairGraph;

/// Parses `key=value` pairs with exactly the given keys, in order.
fn header(line: &str, lineno: usize, keys: &[&str]) -> Result<Vec<usize>> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(Error::parse(
            lineno,
            format!("expected header fields {}", keys.join(" ")),
        ));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(part, key)| {
            let value = part
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::parse(lineno, format!("expected {key}=<int>, found {part:?}")))?;
            number(value, lineno)
        })
        .collect()
}

/// Decimal without sign or leading zeros, so values print back identically.
fn number(s: &str, lineno: usize) -> Result<usize> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(Error::parse(lineno, format!("expected a number, found {s:?}")));
    }
    s.parse()
        .map_err(|_| Error::parse(lineno, format!("number {s:?} out of range")))
}

pub fn write_lrc(code: &LinearCode) -> String {
    let (r, t) = code.params().map_or((0, 0), |p| (p.r, p.t));
    let mut out = format!("n={} k={} r={r} t={t}\n", code.n(), code.k());
    for row in code.generator().row_vecs() {
        out.push_str(&row.to_str01());
        out.push('\n');
    }
    out
}

pub fn read_lrc(text: &str) -> Result<LinearCode> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::parse(1, "file must end with a newline"))?;
    let lines: Vec<&str> = body.split('\n').collect();
    let h = header(lines[0], 1, &["n", "k", "r", "t"])?;
    let (n, k, r, t) = (h[0], h[1], h[2], h[3]);
    let params = match (r, t) {
        (0, 0) => None,
        (0, _) | (_, 0) => {
            return Err(Error::parse(1, "r and t must both be zero or both be positive"));
        }
        _ => Some(CodeParams { r, t }),
    };
    if lines.len() != k + 1 {
        return Err(Error::parse(
            lines.len().min(k + 1),
            format!("expected {k} generator rows, found {}", lines.len() - 1),
        ));
    }
    let rows = lines[1..]
        .iter()
        .enumerate()
        .map(|(i, line)| {
            if line.len() != n {
                return Err(Error::parse(
                    i + 2,
                    format!("row has {} symbols, expected {n}", line.len()),
                ));
            }
            BitVec::from_str01(line).map_err(|e| Error::parse(i + 2, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    LinearCode::new(BinaryMatrix::from_rows(n, &rows)?, params)
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `<tag> <index>: p p ...` and returns the 0-based points.
fn labelled_list(line: &str, lineno: usize, tag: &str, index: usize, limit: usize) -> Result<Vec<usize>> {
    let prefix = format!("{tag} {index}:");
    let rest = line
        .strip_prefix(&prefix)
        .ok_or_else(|| Error::parse(lineno, format!("expected line starting with {prefix:?}")))?;
    let items = rest
        .split_whitespace()
        .map(|tok| {
            let p = number(tok, lineno)?;
            if p == 0 || p > limit {
                return Err(Error::parse(lineno, format!("{p} is outside 1..={limit}")));
            }
            Ok(p - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    if items.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parse(lineno, "entries must be strictly ascending"));
    }
    Ok(items)
}

fn list_line(tag: &str, index: usize, items: &[usize]) -> String {
    let mut line = format!("{tag} {index}:");
    for p in items {
        line.push_str(&format!(" {}", p + 1));
    }
    line.push('\n');
    line
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = format!("k={} r={} m={} l={}\n", mesh.k, mesh.r, mesh.m, mesh.ell);
    for (i, line) in mesh.red.iter().enumerate() {
        out.push_str(&list_line("RL", i + 1, line));
    }
    for (j, line) in mesh.blue.iter().enumerate() {
        out.push_str(&list_line("BL", j + 1, line));
    }
    out
}

/// Reads a mesh without checking the mesh conditions; use
/// [`crate::combinatorics::validate_mesh`] for that.
pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = content_lines(text);
    let (lineno, first) = lines.next().ok_or_else(|| Error::parse(1, "empty mesh file"))?;
    let h = header(first, lineno, &["k", "r", "m", "l"])?;
    let (k, r, m, ell) = (h[0], h[1], h[2], h[3]);
    let n = k + m + ell;
    let mut red = Vec::with_capacity(m);
    let mut blue = Vec::with_capacity(ell);
    for (lineno, line) in lines {
        if red.len() < m {
            red.push(labelled_list(line, lineno, "RL", red.len() + 1, n)?);
        } else if blue.len() < ell {
            blue.push(labelled_list(line, lineno, "BL", blue.len() + 1, n)?);
        } else {
            return Err(Error::parse(lineno, "more lines than the header announces"));
        }
    }
    if red.len() != m || blue.len() != ell {
        return Err(Error::parse(
            text.lines().count(),
            format!(
                "expected {m} red and {ell} blue lines, found {} and {}",
                red.len(),
                blue.len()
            ),
        ));
    }
    Ok(Mesh {
        k,
        r,
        m,
        ell,
        red,
        blue,
    })
}

pub fn write_cover(cover: &SubsetFamily, r: usize) -> String {
    let mut out = format!("k={} r={r} eta={}\n", cover.ground(), cover.len());
    for (i, a) in cover.members().iter().enumerate() {
        out.push_str(&list_line("A", i + 1, a));
    }
    out
}

/// Returns the family and the declared `r`.
pub fn read_cover(text: &str) -> Result<(SubsetFamily, usize)> {
    let mut lines = content_lines(text);
    let (lineno, first) = lines.next().ok_or_else(|| Error::parse(1, "empty cover file"))?;
    let h = header(first, lineno, &["k", "r", "eta"])?;
    let (k, r, eta) = (h[0], h[1], h[2]);
    let mut members = Vec::with_capacity(eta);
    for (lineno, line) in lines {
        if members.len() == eta {
            return Err(Error::parse(lineno, "more subsets than the header announces"));
        }
        members.push(labelled_list(line, lineno, "A", members.len() + 1, k)?);
    }
    if members.len() != eta {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {eta} subsets, found {}", members.len()),
        ));
    }
    Ok((SubsetFamily::new(k, members)?, r))
}

pub fn write_rg(g: &RepairGraph) -> String {
    let mut out = format!("n={}\n", g.n());
    for v in 0..g.n() {
        if !g.is_source(v) {
            out.push_str(&list_line("IN", v + 1, g.in_set(v)));
        }
    }
    out
}

/// Inner nodes must appear in increasing order.
pub fn read_rg(text: &str) -> Result<RepairGraph> {
    let mut lines = content_lines(text);
    let (lineno, first) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let n = header(first, lineno, &["n"])?[0];
    let mut in_sets = vec![Vec::new(); n];
    let mut last = 0;
    for (lineno, line) in lines {
        let node = line
            .strip_prefix("IN ")
            .and_then(|rest| rest.split(':').next())
            .ok_or_else(|| Error::parse(lineno, "expected `IN <node>: ...`"))
            .and_then(|s| number(s, lineno))?;
        if node == 0 || node > n || node <= last {
            return Err(Error::parse(
                lineno,
                format!("node {node} out of range or out of order"),
            ));
        }
        last = node;
        let set = labelled_list(line, lineno, "IN", node, n)?;
        if set.is_empty() {
            return Err(Error::parse(lineno, "inner node with an empty in-set"));
        }
        in_sets[node - 1] = set;
    }
    RepairGraph::new(in_sets)
}
