//! Line-oriented tensor text format.
//!
//! ```text
//! # comment
//! n 3            # optionally `n 3 strict`
//! name VFeSb     # optional
//! 1 2 3 3.6818   # i j k value, 1-based
//! ```
//!
//! Omitted entries are zero. An entry given only as `(i, j, k)` also fills
//! `(i, k, j)`. When both orders are given they are averaged, unless the
//! header says `strict`, in which case they must agree exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::tensor::{PiezoTensor, SymmetryMode};

/// A named tensor read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub tensor: PiezoTensor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTensor {
    pub name: Option<String>,
    pub tensor: PiezoTensor,
}

pub fn parse_tensor(text: &str, path: &Path) -> Result<ParsedTensor> {
    let err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut header: Option<(usize, SymmetryMode)> = None;
    let mut name = None;
    let mut raw: Vec<Option<f64>> = Vec::new();

    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields[0] {
            "n" => {
                if header.is_some() {
                    return Err(err(lineno, "duplicate `n` header".into()));
                }
                let mode = match fields.len() {
                    2 => SymmetryMode::AutoSymmetrize,
                    3 if fields[2] == "strict" => SymmetryMode::Strict,
                    _ => return Err(err(lineno, "expected `n <dim> [strict]`".into())),
                };
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid dimension `{}`", fields[1])))?;
                if n == 0 {
                    return Err(err(lineno, "dimension must be at least 1".into()));
                }
                header = Some((n, mode));
                raw = vec![None; n * n * n];
            }
            "name" => {
                let rest = body["name".len()..].trim();
                if rest.is_empty() {
                    return Err(err(lineno, "empty name".into()));
                }
                name = Some(rest.to_string());
            }
            _ => {
                let Some((n, _)) = header else {
                    return Err(err(lineno, "first line must be `n <dim>`".into()));
                };
                if fields.len() != 4 {
                    return Err(err(lineno, "expected `i j k value`".into()));
                }
                let mut idx = [0usize; 3];
                for (slot, f) in idx.iter_mut().zip(&fields[..3]) {
                    let v: usize = f
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid index `{f}`")))?;
                    if v == 0 || v > n {
                        return Err(err(lineno, format!("index {v} outside 1..={n}")));
                    }
                    *slot = v - 1;
                }
                let value: f64 = fields[3]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid value `{}`", fields[3])))?;
                if !value.is_finite() {
                    return Err(err(lineno, format!("non-finite value `{}`", fields[3])));
                }
                let flat = (idx[0] * n + idx[1]) * n + idx[2];
                if raw[flat].is_some() {
                    return Err(err(lineno, "duplicate entry".into()));
                }
                raw[flat] = Some(value);
            }
        }
    }

    let Some((n, mode)) = header else {
        return Err(err(0, "missing `n <dim>` header".into()));
    };
    let mut values = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = (i * n + j) * n + k;
                let q = (i * n + k) * n + j;
                values[p] = raw[p].or(raw[q]).unwrap_or(0.0);
            }
        }
    }
    let tensor = PiezoTensor::new(n, &values, mode)?;
    Ok(ParsedTensor { name, tensor })
}

/// Reads a tensor file; the name comes from a `name` line or the file stem.
pub fn load_material(path: impl AsRef<Path>) -> Result<MaterialRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let parsed = parse_tensor(&text, path)?;
    let name = match parsed.name {
        Some(name) => name,
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::InvalidInput(format!("cannot name {}", path.display())))?,
    };
    Ok(MaterialRecord {
        name,
        tensor: parsed.tensor,
    })
}

/// Every `*.tensor` file in `dir`, sorted by file name.
pub fn load_material_dir(dir: impl AsRef<Path>) -> Result<Vec<MaterialRecord>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir.as_ref())?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "tensor"))
        .collect();
    paths.sort();
    paths.iter().map(load_material).collect()
}

/// Writes the tensor back in the text format, listing each nonzero entry
/// once with `j ≤ k`.
pub fn write_tensor(tensor: &PiezoTensor, name: Option<&str>) -> String {
    let n = tensor.n();
    let mut out = format!("n {n}\n");
    if let Some(name) = name {
        let _ = writeln!(out, "name {name}");
    }
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let v = tensor.get(i, j, k);
                if v != 0.0 {
                    let _ = writeln!(out, "{} {} {} {v:e}", i + 1, j + 1, k + 1);
                }
            }
        }
    }
    out
}
