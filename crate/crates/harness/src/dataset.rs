//! File loaders. Every malformed line is reported as `path:line: message`.
//!
//! * edge list: two whitespace-separated vertex ids per line;
//! * points: CSV `id,x,y[,part]`;
//! * features: CSV `id,v1,...,vD`;
//! * user vector: a single CSV row of reals;
//! * parts: one line per element holding one or more part indices;
//! * weights: one real per line.
//!
//! Blank lines and lines starting with `#` are skipped. A first CSV row whose
//! first field is `id` is treated as a header.

use std::fs;
use std::path::Path;

use crate::error::{HarnessError, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// `(line number, content)` for every non-blank, non-comment line.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn csv_rows(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            HarnessError::data(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        if rows.is_empty() && fields[0].eq_ignore_ascii_case("id") {
            continue;
        }
        rows.push((line, fields));
    }
    Ok(rows)
}

fn real(path: &Path, line: usize, what: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| HarnessError::data(path, line, format!("{what} {s:?} is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HarnessError::data(path, line, format!("{what} {s:?} is not finite")))
    }
}

fn index(path: &Path, line: usize, what: &str, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| HarnessError::data(path, line, format!("{what} {s:?} is not a non-negative integer")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn load_edges(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    let mut edges = Vec::new();
    let mut n = 0;
    for (line, l) in lines(&text) {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(HarnessError::data(
                path,
                line,
                format!("expected two vertex ids, found {} fields", fields.len()),
            ));
        }
        let a = index(path, line, "vertex", fields[0])?;
        let b = index(path, line, "vertex", fields[1])?;
        n = n.max(a + 1).max(b + 1);
        edges.push((a, b));
    }
    Ok(Graph { n, edges })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Points {
    pub labels: Vec<String>,
    pub coords: Vec<Vec<f64>>,
    pub parts: Option<Vec<usize>>,
}

pub fn load_points(path: &Path) -> Result<Points> {
    let mut out = Points {
        labels: Vec::new(),
        coords: Vec::new(),
        parts: None,
    };
    let mut parts = Vec::new();
    for (i, (line, f)) in csv_rows(path)?.into_iter().enumerate() {
        if f.len() != 3 && f.len() != 4 {
            return Err(HarnessError::data(
                path,
                line,
                format!("expected id,x,y[,part], found {} fields", f.len()),
            ));
        }
        let has_part = f.len() == 4;
        if i > 0 && has_part != out.parts.is_some() {
            return Err(HarnessError::data(path, line, "part column present on some rows only"));
        }
        out.labels.push(f[0].clone());
        out.coords.push(vec![real(path, line, "x", &f[1])?, real(path, line, "y", &f[2])?]);
        if has_part {
            parts.push(index(path, line, "part", &f[3])?);
            out.parts = Some(Vec::new());
        }
    }
    if out.parts.is_some() {
        out.parts = Some(parts);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Features {
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<f64>>,
}

pub fn load_features(path: &Path) -> Result<Features> {
    let mut out = Features {
        labels: Vec::new(),
        vectors: Vec::new(),
    };
    for (line, f) in csv_rows(path)? {
        if f.len() < 2 {
            return Err(HarnessError::data(path, line, "expected id followed by at least one value"));
        }
        let v = f[1..]
            .iter()
            .map(|s| real(path, line, "feature", s))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = out.vectors.first() {
            if first.len() != v.len() {
                return Err(HarnessError::data(
                    path,
                    line,
                    format!("dimension {} differs from {}", v.len(), first.len()),
                ));
            }
        }
        out.labels.push(f[0].clone());
        out.vectors.push(v);
    }
    Ok(out)
}

pub fn load_user(path: &Path) -> Result<Vec<f64>> {
    let rows = csv_rows(path)?;
    match rows.as_slice() {
        [(line, f)] => f.iter().map(|s| real(path, *line, "user value", s)).collect(),
        [] => Err(HarnessError::data(path, 1, "empty user vector file")),
        [_, (line, _), ..] => Err(HarnessError::data(path, *line, "user vector must be a single row")),
    }
}

/// Candidate parts per element; a line with several indices lists every
/// part the element may be assigned to.
pub fn load_parts(path: &Path, n: usize) -> Result<Vec<Vec<usize>>> {
    let text = read(path)?;
    let mut out = Vec::with_capacity(n);
    let mut last = 0;
    for (line, l) in lines(&text) {
        let choices = l
            .split_whitespace()
            .map(|s| index(path, line, "part", s))
            .collect::<Result<Vec<usize>>>()?;
        out.push(choices);
        last = line;
    }
    if out.len() != n {
        return Err(HarnessError::data(
            path,
            last,
            format!("{} part lines for {} elements", out.len(), n),
        ));
    }
    Ok(out)
}

pub fn load_weights(path: &Path) -> Result<Vec<f64>> {
    let text = read(path)?;
    lines(&text)
        .map(|(line, l)| {
            let w = real(path, line, "weight", l)?;
            if w < 0.0 {
                return Err(HarnessError::data(path, line, format!("negative weight {w}")));
            }
            Ok(w)
        })
        .collect()
}
