//! Pairwise boundary distances and similarities between granular balls.
//!
//! The raw boundary distance between two balls is the distance of their
//! centers minus the sum of their radii; it is negative when the balls
//! overlap. A global shift delta (twice the magnitude of the most negative
//! raw entry, zero if none is negative) makes all off-diagonal distances
//! positive, and similarity is the reciprocal of the shifted distance.

use crate::ball::BallSet;
use crate::error::{Error, Result};
use crate::kmeans;
use crate::par;

/// Symmetric boundary-distance graph over a ball set. Only the upper
/// triangle of the raw matrix is stored; shifted distances and similarities
/// are derived on access.
#[derive(Debug, Clone)]
pub struct BallGraph {
    m: usize,
    raw: Vec<f64>,
    delta: f64,
}

impl BallGraph {
    /// Number of balls the graph spans.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Shift applied to raw distances; zero when no balls overlap.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Raw boundary distance; zero on the diagonal.
    pub fn raw(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.raw[self.idx(i.min(j), i.max(j))]
    }

    /// Shifted boundary distance (raw + delta); zero on the diagonal.
    pub fn shifted(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.raw(i, j) + self.delta
    }

    /// Similarity 1/shifted; zero on the diagonal. Balls at shifted distance
    /// exactly zero (touching, with no overlap anywhere in the set) get +inf
    /// and merge before everything else.
    pub fn sim(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        1.0 / self.shifted(i, j)
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.m);
        i * (2 * self.m - i - 1) / 2 + (j - i - 1)
    }
}

/// Computes all pairwise raw distances and the shift delta.
pub fn build_graph(balls: &BallSet) -> Result<BallGraph> {
    let m = balls.len();
    if m < 2 {
        return Err(Error::TooFewBalls(m));
    }
    let rows = par::map_indexed(m, |i| {
        let bi = &balls.balls()[i];
        ((i + 1)..m)
            .map(|j| {
                let bj = &balls.balls()[j];
                let centers = kmeans::squared_distance(bi.center(), bj.center()).sqrt();
                centers - (bi.max_radius() + bj.max_radius())
            })
            .collect::<Vec<f64>>()
    });
    let raw: Vec<f64> = rows.into_iter().flatten().collect();
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let delta = if min < 0.0 { 2.0 * min.abs() } else { 0.0 };
    Ok(BallGraph { m, raw, delta })
}
