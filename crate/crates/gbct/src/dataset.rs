//! Dataset container, CSV ingestion/emission, and standardization.
//!
//! Points live in a flat row-major buffer so the hot loops elsewhere in the
//! crate can slice them without indirection. Labels are optional integer
//! class ids; the value [`NOISE_LABEL`] (-1) is reserved for noise points and
//! is the only negative label allowed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Reserved ground-truth label for injected noise points.
pub const NOISE_LABEL: i32 = -1;

/// An immutable collection of `n` points in `d`-dimensional feature space,
/// with optional per-point integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    data: Vec<f64>,
    dim: usize,
    labels: Option<Vec<i32>>,
}

impl Dataset {
    /// Builds a dataset from a flat row-major buffer of `n * dim` values.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if data.is_empty() {
            return Err(Error::EmptyInput("dataset has no points"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "buffer of {} values is not a multiple of dim {}",
                data.len(),
                dim
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coordinate at point {}, dimension {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { data, dim, labels: None })
    }

    /// Builds a dataset from one `Vec` per point.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("rows have unequal lengths".into()));
        }
        Self::from_flat(rows.concat(), dim)
    }

    /// Attaches ground-truth labels (one per point, each ≥ -1).
    pub fn with_labels(mut self, labels: Vec<i32>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch { left: labels.len(), right: self.len() });
        }
        if let Some(bad) = labels.iter().find(|&&l| l < NOISE_LABEL) {
            return Err(Error::InvalidParameter(format!("label {bad} below {NOISE_LABEL}")));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> Option<&[i32]> {
        self.labels.as_deref()
    }

    /// Per-dimension `(min, max)` over all points.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.points().skip(1) {
            for (d, &v) in p.iter().enumerate() {
                lo[d] = lo[d].min(v);
                hi[d] = hi[d].max(v);
            }
        }
        (lo, hi)
    }

    /// Returns a copy rescaled to zero mean and unit standard deviation per
    /// dimension (population convention). Dimensions with zero variance pass
    /// through unchanged. Labels are preserved.
    pub fn standardize(&self) -> Dataset {
        let n = self.len();
        let d = self.dim;
        if n < 2 {
            return self.clone();
        }
        let mut mean = vec![0.0; d];
        for p in self.points() {
            for (j, &v) in p.iter().enumerate() {
                mean[j] += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut var = vec![0.0; d];
        for p in self.points() {
            for (j, &v) in p.iter().enumerate() {
                var[j] += (v - mean[j]) * (v - mean[j]);
            }
        }
        for v in &mut var {
            *v /= n as f64;
        }
        let mut data = self.data.clone();
        for j in 0..d {
            if var[j] == 0.0 {
                continue;
            }
            let std = var[j].sqrt();
            for i in 0..n {
                data[i * d + j] = (data[i * d + j] - mean[j]) / std;
            }
        }
        Dataset { data, dim: d, labels: self.labels.clone() }
    }
}

/// Loads a dataset from a comma-separated file with dot decimal separators.
///
/// `has_header` skips the first line. `label_col` names a 0-based column to
/// strip from the features and store as integer labels.
pub fn load_csv(path: &Path, has_header: bool, label_col: Option<usize>) -> Result<Dataset> {
    let text = fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<i32> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, line) in text.lines().enumerate() {
        if idx == 0 && has_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let expected = *width.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(Error::RaggedRow {
                path: path.to_path_buf(),
                line: idx + 1,
                expected,
                found: cells.len(),
            });
        }
        if let Some(lc) = label_col {
            if lc >= expected {
                return Err(Error::LabelColumnOutOfRange { col: lc, width: expected });
            }
        }
        let mut row = Vec::with_capacity(expected);
        for (col, cell) in cells.iter().enumerate() {
            let bad = || Error::BadCell {
                path: path.to_path_buf(),
                line: idx + 1,
                col: col + 1,
                value: cell.trim().to_string(),
            };
            if label_col == Some(col) {
                // Labels may be written as integers or as floats like "1.0".
                let v: f64 = cell.trim().parse().map_err(|_| bad())?;
                if !v.is_finite() || v.fract() != 0.0 {
                    return Err(bad());
                }
                labels.push(v as i32);
            } else {
                let v: f64 = cell.trim().parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                row.push(v);
            }
        }
        rows.push(row);
    }

    let ds = Dataset::from_rows(&rows)?;
    if label_col.is_some() {
        ds.with_labels(labels)
    } else {
        Ok(ds)
    }
}

/// Writes one label per line.
pub fn save_labels_csv(path: &Path, labels: &[i32]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("no labels to write"));
    }
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels {
        writeln!(out, "{l}").expect("string write");
    }
    fs::write(path, out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Reads a single-column label file written by [`save_labels_csv`].
pub fn load_labels_csv(path: &Path) -> Result<Vec<i32>> {
    let text = fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        let v: i32 = cell.parse().map_err(|_| Error::BadCell {
            path: path.to_path_buf(),
            line: idx + 1,
            col: 1,
            value: cell.to_string(),
        })?;
        labels.push(v);
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput("label file has no rows"));
    }
    Ok(labels)
}

/// Writes the dataset as CSV. With labels present, they go in a final
/// `label` column; a header row is always emitted.
pub fn save_csv(path: &Path, ds: &Dataset) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = (0..ds.dim()).map(|j| format!("x{j}")).collect();
    out.push_str(&header.join(","));
    if ds.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, p) in ds.points().enumerate() {
        let coords: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
        out.push_str(&coords.join(","));
        if let Some(labels) = ds.labels() {
            write!(out, ",{}", labels[i]).expect("string write");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
