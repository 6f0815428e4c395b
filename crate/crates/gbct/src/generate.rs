//! Synthetic dataset generators and uniform noise injection.
//!
//! All generators are deterministic for a fixed seed and attach ground-truth
//! labels. Points are emitted cluster by cluster; when `n` does not divide
//! evenly, earlier clusters receive the remainder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{Dataset, NOISE_LABEL};
use crate::error::{Error, Result};

/// Shape-specific generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    /// Two interleaved unit half-circles with Gaussian jitter.
    Moons { jitter: f64 },
    /// Concentric rings of radius `(i+1)/rings` with Gaussian jitter.
    Circles { rings: usize, jitter: f64 },
    /// Isotropic Gaussians at the given centers.
    Blobs { centers: Vec<Vec<f64>>, std: f64 },
    /// Two interleaved Archimedean spiral arms, one the point reflection of
    /// the other, with Gaussian jitter. `turns` is the angular extent of each
    /// arm in full revolutions.
    Spiral { turns: f64, jitter: f64 },
}

impl GenSpec {
    /// Number of ground-truth clusters this shape produces.
    pub fn cluster_count(&self) -> usize {
        match self {
            GenSpec::Moons { .. } | GenSpec::Spiral { .. } => 2,
            GenSpec::Circles { rings, .. } => *rings,
            GenSpec::Blobs { centers, .. } => centers.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let check_jitter = |j: f64| {
            if !j.is_finite() || j < 0.0 {
                bad(format!("jitter must be finite and nonnegative, got {j}"))
            } else {
                Ok(())
            }
        };
        match self {
            GenSpec::Moons { jitter } => check_jitter(*jitter),
            GenSpec::Circles { rings, jitter } => {
                if *rings == 0 {
                    return bad("circles need at least 1 ring".into());
                }
                check_jitter(*jitter)
            }
            GenSpec::Blobs { centers, std } => {
                if centers.is_empty() {
                    return bad("blobs need at least 1 center".into());
                }
                let d = centers[0].len();
                if d == 0 || centers.iter().any(|c| c.len() != d) {
                    return bad("blob centers must share a dimension of at least 1".into());
                }
                if centers.iter().flatten().any(|v| !v.is_finite()) {
                    return bad("blob centers must be finite".into());
                }
                check_jitter(*std)
            }
            GenSpec::Spiral { turns, jitter } => {
                if !turns.is_finite() || *turns <= 0.0 {
                    return bad(format!("spiral turns must be positive, got {turns}"));
                }
                check_jitter(*jitter)
            }
        }
    }
}

/// Generates `n` labeled points of the requested shape.
pub fn generate(spec: &GenSpec, n: usize, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let k = spec.cluster_count();
    if n < 2 * k {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is below 2 points per cluster for {k} clusters"
        )));
    }
    let sizes = split_counts(n, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (data, dim) = match spec {
        GenSpec::Moons { jitter } => (moons(&sizes, *jitter, &mut rng), 2),
        GenSpec::Circles { rings, jitter } => (circles(&sizes, *rings, *jitter, &mut rng), 2),
        GenSpec::Blobs { centers, std } => {
            (blobs(&sizes, centers, *std, &mut rng), centers[0].len())
        }
        GenSpec::Spiral { turns, jitter } => (spiral(&sizes, *turns, *jitter, &mut rng), 2),
    };

    let labels =
        sizes.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c as i32, m)).collect();
    Dataset::from_flat(data, dim)?.with_labels(labels)
}

/// Appends `ceil(fraction * n)` uniform points over the bounding box of `ds`,
/// labeled [`NOISE_LABEL`] when `ds` carries labels. Original points are
/// unchanged; an unlabeled input stays unlabeled.
pub fn inject_noise(ds: &Dataset, fraction: f64, seed: u64) -> Result<Dataset> {
    if !fraction.is_finite() || !(0.0..1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "noise fraction must lie in [0, 1), got {fraction}"
        )));
    }
    let extra = (fraction * ds.len() as f64).ceil() as usize;
    if extra == 0 {
        return Ok(ds.clone());
    }
    let (lo, hi) = ds.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data: Vec<f64> = ds.points().flatten().copied().collect();
    data.reserve(extra * ds.dim());
    for _ in 0..extra {
        for d in 0..ds.dim() {
            let v = if hi[d] > lo[d] { rng.gen_range(lo[d]..hi[d]) } else { lo[d] };
            data.push(v);
        }
    }
    let out = Dataset::from_flat(data, ds.dim())?;
    match ds.labels() {
        Some(labels) => {
            let mut all = labels.to_vec();
            all.extend(std::iter::repeat_n(NOISE_LABEL, extra));
            out.with_labels(all)
        }
        None => Ok(out),
    }
}

fn split_counts(n: usize, k: usize) -> Vec<usize> {
    let base = n / k;
    let rem = n % k;
    (0..k).map(|i| base + usize::from(i < rem)).collect()
}

fn jitter_dist(jitter: f64) -> Normal<f64> {
    Normal::new(0.0, jitter).expect("jitter validated nonnegative")
}

fn moons(sizes: &[usize], jitter: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = jitter_dist(jitter);
    let mut data = Vec::with_capacity(2 * sizes.iter().sum::<usize>());
    for (moon, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            let t = std::f64::consts::PI * i as f64 / (m - 1) as f64;
            let (x, y) =
                if moon == 0 { (t.cos(), t.sin()) } else { (1.0 - t.cos(), 0.5 - t.sin()) };
            data.push(x + noise.sample(rng));
            data.push(y + noise.sample(rng));
        }
    }
    data
}

fn circles(sizes: &[usize], rings: usize, jitter: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = jitter_dist(jitter);
    let mut data = Vec::with_capacity(2 * sizes.iter().sum::<usize>());
    for (ring, &m) in sizes.iter().enumerate() {
        let r = (ring + 1) as f64 / rings as f64;
        for i in 0..m {
            let t = std::f64::consts::TAU * i as f64 / m as f64;
            data.push(r * t.cos() + noise.sample(rng));
            data.push(r * t.sin() + noise.sample(rng));
        }
    }
    data
}

fn blobs(sizes: &[usize], centers: &[Vec<f64>], std: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = jitter_dist(std);
    let dim = centers[0].len();
    let mut data = Vec::with_capacity(dim * sizes.iter().sum::<usize>());
    for (center, &m) in centers.iter().zip(sizes) {
        for _ in 0..m {
            for &c in center {
                data.push(c + noise.sample(rng));
            }
        }
    }
    data
}

fn spiral(sizes: &[usize], turns: f64, jitter: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = jitter_dist(jitter);
    let t_max = turns * std::f64::consts::TAU;
    let t_min = 0.5;
    let mut data = Vec::with_capacity(2 * sizes.iter().sum::<usize>());
    for (arm, &m) in sizes.iter().enumerate() {
        for i in 0..m {
            let t = t_min + (t_max - t_min) * i as f64 / (m - 1) as f64;
            let r = t / t_max;
            // The second arm is the exact point reflection of the first.
            let sign = if arm == 0 { 1.0 } else { -1.0 };
            data.push(sign * r * t.cos() + noise.sample(rng));
            data.push(sign * r * t.sin() + noise.sample(rng));
        }
    }
    data
}
