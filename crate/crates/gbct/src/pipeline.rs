//! End-to-end fit: coarse division, adaptive splitting, graph construction,
//! noise detection, and merging, with per-phase wall times.

use std::time::Instant;

use crate::ball::{self, BallSet, SplitConfig};
use crate::cluster::{self, Clustering, Knee};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph;

/// Target cluster count: fixed K or detected from the merge-distance jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Fixed(usize),
    Adaptive,
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub split: SplitConfig,
    pub k: KChoice,
    /// Balls below this multiple of the average density are noise.
    pub noise_factor: f64,
    /// Minimum merge-distance ratio that counts as the adaptive knee.
    pub jump_factor: f64,
    /// Rescale features to zero mean and unit variance before fitting.
    pub standardize: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            split: SplitConfig::default(),
            k: KChoice::Adaptive,
            noise_factor: 0.2,
            jump_factor: 2.0,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub clustering: Clustering,
    /// Adaptive mode only: where the merge-distance jump was found, if any.
    pub knee: Option<Knee>,
    pub n: usize,
    pub dim: usize,
    /// Ball count after splitting.
    pub m: usize,
    pub k: usize,
    pub noise_balls: usize,
    pub split_ms: f64,
    pub merge_ms: f64,
    pub total_ms: f64,
}

/// Runs the full pipeline on a dataset.
pub fn fit(ds: &Dataset, cfg: &FitConfig) -> Result<FitReport> {
    let start = Instant::now();
    let standardized;
    let ds = if cfg.standardize {
        standardized = ds.standardize();
        &standardized
    } else {
        ds
    };

    let split_start = Instant::now();
    let coarse = ball::coarse_divide(ds, &cfg.split)?;
    let balls = ball::split_all(ds, coarse, &cfg.split)?;
    let split_ms = elapsed_ms(split_start);

    let merge_start = Instant::now();
    let (clustering, knee, noise_balls) = form_clusters(ds, &balls, cfg)?;
    let merge_ms = elapsed_ms(merge_start);

    Ok(FitReport {
        n: ds.len(),
        dim: ds.dim(),
        m: balls.len(),
        k: clustering.k,
        noise_balls,
        knee,
        split_ms,
        merge_ms,
        total_ms: elapsed_ms(start),
        clustering,
    })
}

fn form_clusters(
    ds: &Dataset,
    balls: &BallSet,
    cfg: &FitConfig,
) -> Result<(Clustering, Option<Knee>, usize)> {
    if balls.len() == 1 {
        // A single ball leaves nothing to merge; only K = 1 is satisfiable.
        let noise = cluster::detect_noise_balls(balls, cfg.noise_factor)?;
        debug_assert!(noise.is_empty());
        return match cfg.k {
            KChoice::Fixed(1) => {
                let clustering = Clustering {
                    ball_labels: vec![0],
                    point_labels: vec![0; ds.len()],
                    k: 1,
                    trace: Vec::new(),
                };
                Ok((clustering, None, 0))
            }
            KChoice::Fixed(k) => Err(Error::KUnreachable {
                requested: k,
                available: 1,
                context: "splitting produced a single ball",
            }),
            KChoice::Adaptive => Err(Error::Degenerate(
                "adaptive merging needs at least 2 balls after splitting".into(),
            )),
        };
    }

    let graph = graph::build_graph(balls)?;
    let noise = cluster::detect_noise_balls(balls, cfg.noise_factor)?;
    match cfg.k {
        KChoice::Fixed(k) => {
            let clustering = cluster::merge_to_k(balls, &graph, k, &noise)?;
            Ok((clustering, None, noise.len()))
        }
        KChoice::Adaptive => {
            let r = cluster::adaptive_merge(balls, &graph, &noise, cfg.jump_factor)?;
            Ok((r.clustering, r.knee, noise.len()))
        }
    }
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}
