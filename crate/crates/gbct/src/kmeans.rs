//! Seeded k-means over an index subset of a dataset.
//!
//! Initialization is k-means++ (squared-distance sampling), iteration is
//! Lloyd's algorithm. Runs are deterministic for a fixed seed: ties in the
//! assignment step go to the lower center index, and the parallel assignment
//! path collects per-point results in index order before any reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Flat `k * dim` center coordinates, empty clusters removed.
    pub centers: Vec<f64>,
    pub dim: usize,
    /// Cluster id per entry of the input `members` slice, in `0..k`.
    pub assignments: Vec<usize>,
    /// Number of nonempty clusters, at most the requested count.
    pub k: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl KMeansResult {
    pub fn center(&self, c: usize) -> &[f64] {
        &self.centers[c * self.dim..(c + 1) * self.dim]
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Clusters `members` (indices into `ds`) into at most `k` groups.
///
/// Requested clusters that end up empty are dropped and the remaining ids
/// compacted, so `result.k` can be below `k` (duplicated points, or `k`
/// exceeding the number of distinct points).
pub fn run(
    ds: &Dataset,
    members: &[usize],
    k: usize,
    max_iters: usize,
    seed: u64,
) -> Result<KMeansResult> {
    if members.is_empty() {
        return Err(Error::EmptyInput("k-means needs at least one point"));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k-means needs k >= 1".into()));
    }
    if max_iters == 0 {
        return Err(Error::InvalidParameter("k-means needs at least one iteration".into()));
    }
    let m = members.len();
    let dim = ds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut centers = init_plus_plus(ds, members, k, &mut rng);
    let k_req = centers.len() / dim;
    let mut assignments = vec![usize::MAX; m];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        iterations += 1;
        let next = assign(ds, members, &centers, dim);
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;

        let mut sums = vec![0.0; centers.len()];
        let mut counts = vec![0usize; k_req];
        for (slot, &p) in members.iter().enumerate() {
            let c = assignments[slot];
            counts[c] += 1;
            for (j, &v) in ds.point(p).iter().enumerate() {
                sums[c * dim + j] += v;
            }
        }
        for c in 0..k_req {
            // An empty cluster keeps its previous center and may reacquire
            // points on a later iteration.
            if counts[c] == 0 {
                continue;
            }
            for j in 0..dim {
                centers[c * dim + j] = sums[c * dim + j] / counts[c] as f64;
            }
        }
    }

    Ok(compact(centers, dim, assignments, k_req, iterations, converged))
}

fn init_plus_plus(ds: &Dataset, members: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dim = ds.dim();
    let m = members.len();
    let mut centers = Vec::with_capacity(k * dim);
    let first = members[rng.gen_range(0..m)];
    centers.extend_from_slice(ds.point(first));

    let mut d2: Vec<f64> =
        members.iter().map(|&p| squared_distance(ds.point(p), ds.point(first))).collect();

    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let chosen = if total > 0.0 {
            let r = rng.gen_range(0.0..total);
            let mut cum = 0.0;
            let mut pick = m - 1;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if r < cum {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // Every remaining point coincides with a chosen center; the
            // duplicate centers this produces become empty clusters later.
            rng.gen_range(0..m)
        };
        let c = ds.point(members[chosen]);
        centers.extend_from_slice(c);
        for (i, &p) in members.iter().enumerate() {
            d2[i] = d2[i].min(squared_distance(ds.point(p), c));
        }
    }
    centers
}

fn assign(ds: &Dataset, members: &[usize], centers: &[f64], dim: usize) -> Vec<usize> {
    let k = centers.len() / dim;
    par::map_indexed(members.len(), |slot| {
        let p = ds.point(members[slot]);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for c in 0..k {
            let d = squared_distance(p, &centers[c * dim..(c + 1) * dim]);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    })
}

fn compact(
    centers: Vec<f64>,
    dim: usize,
    assignments: Vec<usize>,
    k_req: usize,
    iterations: usize,
    converged: bool,
) -> KMeansResult {
    let mut counts = vec![0usize; k_req];
    for &c in &assignments {
        counts[c] += 1;
    }
    let mut remap = vec![usize::MAX; k_req];
    let mut kept = Vec::new();
    let mut k = 0;
    for c in 0..k_req {
        if counts[c] > 0 {
            remap[c] = k;
            kept.extend_from_slice(&centers[c * dim..(c + 1) * dim]);
            k += 1;
        }
    }
    let assignments = assignments.into_iter().map(|c| remap[c]).collect();
    KMeansResult { centers: kept, dim, assignments, k, iterations, converged }
}
