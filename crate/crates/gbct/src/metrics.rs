//! External clustering metrics: accuracy under optimal label assignment and
//! normalized mutual information.
//!
//! Ground-truth entries labeled -1 denote noise and are excluded from
//! scoring together with their predicted counterparts. Predicted labels are
//! taken as opaque ids; any integer works.

use std::collections::BTreeMap;

use pathfinding::matrix::Matrix;
use pathfinding::prelude::kuhn_munkres;

use crate::dataset::NOISE_LABEL;
use crate::error::{Error, Result};

/// Co-occurrence counts between predicted and true clusters. Dense ids
/// follow first appearance in the scored sequence, so any bijective
/// relabeling yields a bit-identical table and bit-identical metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<u64>,
    k_pred: usize,
    k_true: usize,
    n: u64,
}

impl ContingencyTable {
    /// Builds the table, dropping pairs whose truth entry is the noise label.
    pub fn from_labels(pred: &[i32], truth: &[i32]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::LengthMismatch { left: pred.len(), right: truth.len() });
        }
        let pairs: Vec<(i32, i32)> = pred
            .iter()
            .zip(truth)
            .filter(|(_, &t)| t != NOISE_LABEL)
            .map(|(&p, &t)| (p, t))
            .collect();
        if pairs.is_empty() {
            return Err(Error::EmptyInput("no scorable label pairs"));
        }
        let pred_ids: BTreeMap<i32, usize> = dense_ids(pairs.iter().map(|&(p, _)| p));
        let true_ids: BTreeMap<i32, usize> = dense_ids(pairs.iter().map(|&(_, t)| t));
        let (k_pred, k_true) = (pred_ids.len(), true_ids.len());
        let mut counts = vec![0u64; k_pred * k_true];
        for (p, t) in &pairs {
            counts[pred_ids[p] * k_true + true_ids[t]] += 1;
        }
        Ok(Self { counts, k_pred, k_true, n: pairs.len() as u64 })
    }

    pub fn count(&self, pred: usize, truth: usize) -> u64 {
        self.counts[pred * self.k_true + truth]
    }

    pub fn k_pred(&self) -> usize {
        self.k_pred
    }

    pub fn k_true(&self) -> usize {
        self.k_true
    }

    /// Scored pair count (noise-truth pairs excluded).
    pub fn n(&self) -> u64 {
        self.n
    }

    fn row_sums(&self) -> Vec<u64> {
        (0..self.k_pred).map(|p| (0..self.k_true).map(|t| self.count(p, t)).sum()).collect()
    }

    fn col_sums(&self) -> Vec<u64> {
        (0..self.k_true).map(|t| (0..self.k_pred).map(|p| self.count(p, t)).sum()).collect()
    }
}

fn dense_ids(labels: impl Iterator<Item = i32>) -> BTreeMap<i32, usize> {
    let mut ids = BTreeMap::new();
    for label in labels {
        let next = ids.len();
        ids.entry(label).or_insert(next);
    }
    ids
}

/// Injective map from predicted to true clusters maximizing the matched
/// count, solved exactly with the Hungarian algorithm. When there are more
/// predicted clusters than true ones, the surplus maps to `None`.
pub fn optimal_label_map(table: &ContingencyTable) -> Vec<Option<usize>> {
    let (kp, kt) = (table.k_pred, table.k_true);
    // kuhn_munkres wants rows <= columns; transpose the tall case.
    if kp <= kt {
        let rows = (0..kp).map(|p| (0..kt).map(|t| table.count(p, t) as i64).collect::<Vec<_>>());
        let weights = Matrix::from_rows(rows).expect("rectangular by construction");
        let (_, assignment) = kuhn_munkres(&weights);
        assignment.into_iter().map(Some).collect()
    } else {
        let rows = (0..kt).map(|t| (0..kp).map(|p| table.count(p, t) as i64).collect::<Vec<_>>());
        let weights = Matrix::from_rows(rows).expect("rectangular by construction");
        let (_, assignment) = kuhn_munkres(&weights);
        let mut map = vec![None; kp];
        for (t, p) in assignment.into_iter().enumerate() {
            map[p] = Some(t);
        }
        map
    }
}

/// Fraction of points whose predicted cluster maps onto their true cluster
/// under the optimal assignment. In [0, 1].
pub fn accuracy(pred: &[i32], truth: &[i32]) -> Result<f64> {
    let table = ContingencyTable::from_labels(pred, truth)?;
    let map = optimal_label_map(&table);
    let matched: u64 =
        map.iter().enumerate().filter_map(|(p, t)| t.map(|t| table.count(p, t))).sum();
    Ok(matched as f64 / table.n as f64)
}

/// Normalization for [`nmi_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmiNorm {
    /// I / sqrt(H_pred * H_true), the common convention and the default.
    Geometric,
    /// 2 I / (H_pred + H_true).
    Arithmetic,
}

/// Normalized mutual information with geometric-mean normalization.
pub fn nmi(pred: &[i32], truth: &[i32]) -> Result<f64> {
    nmi_with(pred, truth, NmiNorm::Geometric)
}

/// Normalized mutual information, natural logs. Two single-cluster
/// partitions agree perfectly (1.0); a single-cluster partition against a
/// multi-cluster one carries no information (0.0).
pub fn nmi_with(pred: &[i32], truth: &[i32], norm: NmiNorm) -> Result<f64> {
    let table = ContingencyTable::from_labels(pred, truth)?;
    let n = table.n as f64;
    let rows = table.row_sums();
    let cols = table.col_sums();
    let entropy = |sums: &[u64]| -> f64 {
        -sums
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let h_pred = entropy(&rows);
    let h_true = entropy(&cols);
    if h_pred == 0.0 && h_true == 0.0 {
        return Ok(1.0);
    }
    if h_pred == 0.0 || h_true == 0.0 {
        return Ok(0.0);
    }

    let mut mi = 0.0;
    for (p, &row) in rows.iter().enumerate() {
        for (t, &col) in cols.iter().enumerate() {
            let c = table.count(p, t);
            if c == 0 {
                continue;
            }
            let joint = c as f64 / n;
            mi += joint * (joint * n * n / (row as f64 * col as f64)).ln();
        }
    }
    let denom = match norm {
        NmiNorm::Geometric => (h_pred * h_true).sqrt(),
        NmiNorm::Arithmetic => (h_pred + h_true) / 2.0,
    };
    // Rounding can push I a hair past the entropy bound; keep it in range.
    Ok((mi / denom).clamp(0.0, 1.0))
}
