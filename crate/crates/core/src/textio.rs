//! Line-oriented text format for quivers, representations and matrices.
//!
//! ```text
//! quiver kron
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! arrow b: 1 -> 2
//! dim 1 = 1
//! dim 2 = 1
//! mat a = [[1]]
//! mat b = [[0.5-2j]]
//! ```
//!
//! A `~` in front of an arrow id marks an arrow reversed by a reflection.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};
use crate::quiver::Quiver;
use crate::rep::{Hom, Rep};

/// Parsed file: a quiver and, when any `dim`/`mat` line is present, a representation.
#[derive(Debug, Clone)]
pub struct Document {
    pub quiver: Quiver,
    pub rep: Option<Rep>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn bracket_depth(s: &str) -> i64 {
    s.chars().fold(0, |d, ch| match ch {
        '[' => d + 1,
        ']' => d - 1,
        _ => d,
    })
}

/// Join continuation lines of multi-line matrix literals; keeps the starting line number.
fn logical_lines(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if let Some((start, mut acc)) = pending.take() {
            acc.push(' ');
            acc.push_str(line);
            if bracket_depth(&acc) > 0 {
                pending = Some((start, acc));
            } else {
                out.push((start, acc));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if bracket_depth(line) > 0 {
            pending = Some((i + 1, line.to_string()));
        } else {
            out.push((i + 1, line.to_string()));
        }
    }
    if let Some((start, _)) = pending {
        return Err(Error::parse(start, "unterminated matrix literal"));
    }
    Ok(out)
}

fn valid_id(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|ch| {
            ch.is_whitespace() || matches!(ch, ':' | '=' | '[' | ']' | ';' | ',' | '#')
        })
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut name = String::from("Q");
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String, bool)> = Vec::new();
    let mut dims: BTreeMap<String, usize> = BTreeMap::new();
    let mut mats: Vec<(usize, String, String)> = Vec::new();
    let mut saw_rep = false;
    for (ln, line) in logical_lines(text)? {
        let (kw, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line.as_str(), ""),
        };
        match kw {
            "quiver" => {
                if rest.is_empty() {
                    return Err(Error::parse(ln, "quiver needs a name"));
                }
                name = rest.to_string();
            }
            "vertex" => {
                if !valid_id(rest) {
                    return Err(Error::parse(ln, format!("invalid vertex id `{rest}`")));
                }
                vertices.push(rest.to_string());
            }
            "arrow" => {
                let (id, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(ln, "expected `arrow <id>: <src> -> <dst>`"))?;
                let (s, r) = ends
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ln, "expected `<src> -> <dst>`"))?;
                let id = id.trim();
                let (id, reversed) = match id.strip_prefix('~') {
                    Some(base) => (base, true),
                    None => (id, false),
                };
                let (s, r) = (s.trim(), r.trim());
                if !valid_id(id) || !valid_id(s) || !valid_id(r) {
                    return Err(Error::parse(ln, "invalid identifier in arrow declaration"));
                }
                arrows.push((id.to_string(), s.to_string(), r.to_string(), reversed));
            }
            "dim" => {
                saw_rep = true;
                let (v, d) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(ln, "expected `dim <vertex> = <int>`"))?;
                let d: usize = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("invalid dimension `{}`", d.trim())))?;
                if dims.insert(v.trim().to_string(), d).is_some() {
                    return Err(Error::parse(ln, format!("dimension of `{}` given twice", v.trim())));
                }
            }
            "mat" => {
                saw_rep = true;
                let (a, m) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(ln, "expected `mat <arrow> = [[...]]`"))?;
                mats.push((ln, a.trim().to_string(), m.trim().to_string()));
            }
            other => return Err(Error::parse(ln, format!("unknown keyword `{other}`"))),
        }
    }
    let quiver = Quiver::with_marks(&name, vertices, arrows)?;
    if !saw_rep {
        return Ok(Document { quiver, rep: None });
    }
    for v in dims.keys() {
        quiver.vertex_index(v)?;
    }
    let mut mat_map = BTreeMap::new();
    for (ln, a, lit) in mats {
        let ai = quiver.arrow_index(&a)?;
        let arrow = &quiver.arrows()[ai];
        let rows = *dims.get(quiver.dst_name(arrow)).unwrap_or(&0);
        let cols = *dims.get(quiver.src_name(arrow)).unwrap_or(&0);
        let m = parse_matrix_shaped(&lit, Some(cols)).map_err(|e| relocate(e, ln))?;
        if m.shape() != (rows, cols) {
            return Err(Error::ShapeMismatch {
                arrow: arrow.label(),
                expected: (rows, cols),
                found: m.shape(),
            });
        }
        if mat_map.insert(arrow.id.clone(), m).is_some() {
            return Err(Error::parse(ln, format!("matrix for `{a}` given twice")));
        }
    }
    let rep = Rep::from_maps(quiver.clone(), &dims, &mat_map)?;
    Ok(Document {
        quiver,
        rep: Some(rep),
    })
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver> {
    Ok(parse_document(text)?.quiver)
}

pub fn parse_rep(text: &str) -> Result<Rep> {
    let doc = parse_document(text)?;
    match doc.rep {
        Some(r) => Ok(r),
        None => Err(Error::parse(0, "no `dim`/`mat` lines: not a representation")),
    }
}

/// Parse a complex literal: `1.5`, `-2j`, `j`, `1+2j`, `0.5-0.25j`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let real_part = |t: &str| -> Option<f64> {
        let t = t.trim();
        if t.is_empty() || t.contains(|ch: char| ch.is_ascii_alphabetic() && ch != 'e' && ch != 'E') {
            return None;
        }
        t.parse::<f64>().ok().filter(|x| x.is_finite())
    };
    let imag_part = |t: &str| -> Option<f64> {
        let body = t.trim().strip_suffix('j')?;
        match body {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            b => real_part(b),
        }
    };
    if !s.ends_with('j') {
        return real_part(s).map(|r| c(r, 0.0));
    }
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => Some(c(real_part(&s[..i])?, imag_part(&s[i..])?)),
        None => imag_part(s).map(|im| c(0.0, im)),
    }
}

/// Parse `[[a, b]; [c, d]]`; `[]` is the matrix with no rows.
pub fn parse_matrix(s: &str) -> Result<CMat> {
    parse_matrix_shaped(s, None)
}

fn parse_matrix_shaped(s: &str, empty_cols: Option<usize>) -> Result<CMat> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::parse(0, "matrix literal must be enclosed in [ ]"))?
        .trim();
    if inner.is_empty() {
        return Ok(CMat::zeros(0, empty_cols.unwrap_or(0)));
    }
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut rest = inner;
    loop {
        rest = rest.trim_start();
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| Error::parse(0, "each row must be enclosed in [ ]"))?;
        let end = body
            .find(']')
            .ok_or_else(|| Error::parse(0, "unterminated row"))?;
        let row_text = body[..end].trim();
        let mut row = Vec::new();
        if !row_text.is_empty() {
            for tok in row_text.split(',') {
                row.push(
                    parse_complex(tok)
                        .ok_or_else(|| Error::parse(0, format!("invalid number `{}`", tok.trim())))?,
                );
            }
        }
        rows.push(row);
        rest = body[end + 1..].trim_start();
        if rest.is_empty() {
            break;
        }
        rest = rest
            .strip_prefix(';')
            .or_else(|| rest.strip_prefix(','))
            .ok_or_else(|| Error::parse(0, "rows must be separated by `;`"))?;
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::parse(0, "ragged matrix rows"));
    }
    Ok(CMat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Shortest round-trip decimal rendering.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}j", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}j", z.re, -z.im)
    } else {
        format!("{}+{}j", z.re, z.im)
    }
}

pub fn format_matrix(m: &CMat) -> String {
    if m.nrows() == 0 {
        return "[]".into();
    }
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let entries: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn quiver_to_text(q: &Quiver) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "quiver {}", q.name());
    for v in q.vertices() {
        let _ = writeln!(s, "vertex {v}");
    }
    for a in q.arrows() {
        let _ = writeln!(s, "arrow {}: {} -> {}", a.label(), q.src_name(a), q.dst_name(a));
    }
    s
}

pub fn rep_to_text(r: &Rep) -> String {
    let q = r.quiver();
    let mut s = quiver_to_text(q);
    for (v, d) in q.vertices().iter().zip(r.dims()) {
        let _ = writeln!(s, "dim {v} = {d}");
    }
    for (a, m) in q.arrows().iter().zip(r.mats()) {
        let _ = writeln!(s, "mat {} = {}", a.label(), format_matrix(m));
    }
    s
}

/// Witness rendering: one `tmat <vertex> = [[...]]` line per vertex.
pub fn hom_to_text(q: &Quiver, h: &Hom) -> String {
    let mut s = String::new();
    for (v, m) in q.vertices().iter().zip(&h.mats) {
        let _ = writeln!(s, "tmat {v} = {}", format_matrix(m));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    const KRON: &str = "# Kronecker with a Jordan block\nquiver kron\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\ndim 1 = 2\ndim 2 = 2\nmat a = [[1, 0]; [0, 1]]\nmat b = [[0, 0];\n  [1, 0]]  # J2\n";

    #[test]
    fn parses_rep() {
        let r = parse_rep(KRON).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert_eq!(r.mats()[1][(1, 0)], real(1.0));
        assert_eq!(r.quiver().name(), "kron");
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1+2j"), Some(c(1.0, 2.0)));
        assert_eq!(parse_complex("0.5-0.25j"), Some(c(0.5, -0.25)));
        assert_eq!(parse_complex("-3j"), Some(c(0.0, -3.0)));
        assert_eq!(parse_complex("j"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("-2"), Some(c(-2.0, 0.0)));
        assert_eq!(parse_complex("1e-3+2e-4j"), Some(c(1e-3, 2e-4)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("nan"), None);
    }

    #[test]
    fn round_trip_exact() {
        let r = parse_rep(KRON).unwrap();
        let text = rep_to_text(&r);
        let back = parse_rep(&text).unwrap();
        assert_eq!(back, r);
        let m = CMat::from_fn(2, 3, |i, j| c(0.1 * i as f64 - 1.0 / 3.0, 1e-20 * j as f64));
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn zero_dimensional_vertices() {
        let text = "quiver z\nvertex 1\nvertex 2\narrow a: 1 -> 2\ndim 1 = 2\ndim 2 = 0\n";
        let r = parse_rep(text).unwrap();
        assert_eq!(r.mats()[0].shape(), (0, 2));
        let back = parse_rep(&rep_to_text(&r)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn errors() {
        assert!(parse_rep("quiver q\nvertex 1\nfoo bar\n").unwrap_err().is_parse());
        assert!(parse_rep("quiver q\nvertex 1\narrow a 1 -> 1\n").unwrap_err().is_parse());
        let bad_shape = "quiver q\nvertex 1\nvertex 2\narrow a: 1 -> 2\ndim 1 = 1\ndim 2 = 1\nmat a = [[1, 2]]\n";
        assert!(matches!(parse_rep(bad_shape), Err(Error::ShapeMismatch { .. })));
        let dangling = "quiver q\nvertex 1\narrow a: 1 -> 3\n";
        assert!(matches!(parse_quiver(dangling), Err(Error::DanglingEndpoint { .. })));
        assert!(parse_matrix("[[1, 2]; [3]]").unwrap_err().is_parse());
    }

    #[test]
    fn reversed_marks_survive() {
        let text = "quiver q\nvertex 1\nvertex 2\narrow ~a: 2 -> 1\n";
        let q = parse_quiver(text).unwrap();
        assert!(q.arrows()[0].reversed);
        assert_eq!(quiver_to_text(&q), text);
    }
}
