//! Granular balls: per-ball statistics, coarse division, and adaptive
//! splitting.
//!
//! A ball is a set of point indices summarized by its center, two radii, and
//! two densities: the density at the maximum radius (count / r^d) and the
//! density at the average radius (count inside r_ave / r_ave^d). Their ratio
//! is the ball's consistency, a measure of how evenly it is filled. A ball
//! whose consistency falls below the configured threshold is tentatively
//! split in two; the split is kept when it satisfies the configured
//! acceptance policy.
//!
//! Densities are carried as logarithms internally since r^d leaves f64 range
//! once d reaches a few hundred.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kmeans;
use crate::par;

/// A nonempty set of points summarized by center, radii, and densities.
#[derive(Debug, Clone, PartialEq)]
pub struct GranularBall {
    members: Vec<usize>,
    center: Vec<f64>,
    max_radius: f64,
    avg_radius: f64,
    log_max_density: f64,
    log_avg_density: f64,
    consistency: f64,
}

impl GranularBall {
    /// Member point indices, sorted ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest member index; stable identity for seeding and ordering.
    pub fn min_member(&self) -> usize {
        self.members[0]
    }

    /// Arithmetic mean of the member points.
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Largest member distance to the center.
    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    /// Mean member distance to the center.
    pub fn avg_radius(&self) -> f64 {
        self.avg_radius
    }

    /// ln(count / max_radius^d); +inf for zero-radius balls.
    pub fn log_max_density(&self) -> f64 {
        self.log_max_density
    }

    /// ln(count inside avg_radius / avg_radius^d); +inf for zero-radius balls.
    pub fn log_avg_density(&self) -> f64 {
        self.log_avg_density
    }

    /// Density at the maximum radius. May overflow to +inf at high dimension;
    /// comparisons should use [`Self::log_max_density`].
    pub fn max_density(&self) -> f64 {
        self.log_max_density.exp()
    }

    /// Density at the average radius, with the same overflow caveat.
    pub fn avg_density(&self) -> f64 {
        self.log_avg_density.exp()
    }

    /// min/max ratio of the two densities, in (0, 1]. Zero-radius balls
    /// (singletons, coincident points) count as perfectly consistent.
    pub fn consistency(&self) -> f64 {
        self.consistency
    }
}

/// Ball splitting policy: how a tentative binary split must relate to its
/// parent to be kept. Every policy also requires both children to keep at
/// least two members; a split that strands a singleton is always rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Both children strictly denser (at max radius) than the parent.
    BothChildrenDenser,
    /// At least one child strictly denser than the parent.
    EitherChildDenser,
    /// Both children meet the consistency threshold themselves.
    ChildrenConsistent,
}

#[derive(Debug, Clone)]
pub struct SplitConfig {
    /// Balls below this consistency are split candidates; in (0, 1).
    pub consistency_threshold: f64,
    /// Initial ball count for coarse division; `None` means floor(sqrt(n)).
    pub coarse_count: Option<usize>,
    pub split_acceptance: SplitPolicy,
    pub kmeans_max_iters: usize,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            consistency_threshold: 0.70,
            coarse_count: None,
            split_acceptance: SplitPolicy::BothChildrenDenser,
            kmeans_max_iters: 100,
            seed: 0,
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<()> {
        let t = self.consistency_threshold;
        if !t.is_finite() || t <= 0.0 || t >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "consistency threshold must lie in (0, 1), got {t}"
            )));
        }
        if self.coarse_count == Some(0) {
            return Err(Error::InvalidParameter("coarse ball count must be at least 1".into()));
        }
        if self.kmeans_max_iters == 0 {
            return Err(Error::InvalidParameter("k-means iteration cap must be at least 1".into()));
        }
        Ok(())
    }

    /// Coarse ball count for an `n`-point dataset.
    pub fn coarse_count_for(&self, n: usize) -> usize {
        self.coarse_count.unwrap_or((n as f64).sqrt() as usize).clamp(1, n.max(1))
    }
}

/// A set of balls partitioning a dataset: member sets are pairwise disjoint
/// and cover every point index. Balls are ordered by smallest member index.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    balls: Vec<GranularBall>,
    n: usize,
}

impl BallSet {
    /// Fits stats for each group and validates the partition property.
    pub fn from_partition(ds: &Dataset, groups: &[Vec<usize>]) -> Result<Self> {
        let balls = groups.iter().map(|g| fit_stats(ds, g)).collect::<Result<Vec<_>>>()?;
        Self::new_checked(ds.len(), balls)
    }

    fn new_checked(n: usize, mut balls: Vec<GranularBall>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for b in &balls {
            for &i in b.members() {
                if i >= n || seen[i] {
                    return Err(Error::InvalidParameter(
                        "balls do not partition the dataset".into(),
                    ));
                }
                seen[i] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::InvalidParameter(format!("balls cover {covered} of {n} points")));
        }
        balls.sort_by_key(GranularBall::min_member);
        Ok(Self { balls, n })
    }

    pub fn balls(&self) -> &[GranularBall] {
        &self.balls
    }

    /// Ball count (m).
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Point count of the covered dataset (n).
    pub fn point_count(&self) -> usize {
        self.n
    }
}

/// Computes center, radii, densities, and consistency for one member set.
pub fn fit_stats(ds: &Dataset, members: &[usize]) -> Result<GranularBall> {
    if members.is_empty() {
        return Err(Error::EmptyInput("ball has no members"));
    }
    let mut members = members.to_vec();
    members.sort_unstable();
    if members.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("duplicate member index in ball".into()));
    }
    if *members.last().expect("nonempty") >= ds.len() {
        return Err(Error::InvalidParameter(format!(
            "member index {} out of range for {} points",
            members.last().expect("nonempty"),
            ds.len()
        )));
    }

    let d = ds.dim();
    let count = members.len();
    let mut center = vec![0.0; d];
    for &i in &members {
        for (j, &v) in ds.point(i).iter().enumerate() {
            center[j] += v;
        }
    }
    for c in &mut center {
        *c /= count as f64;
    }

    let dists: Vec<f64> =
        members.iter().map(|&i| kmeans::squared_distance(ds.point(i), &center).sqrt()).collect();
    let max_radius = dists.iter().copied().fold(0.0, f64::max);
    let avg_radius = dists.iter().sum::<f64>() / count as f64;

    let (log_max_density, log_avg_density, consistency) = if max_radius == 0.0 {
        (f64::INFINITY, f64::INFINITY, 1.0)
    } else {
        let log_max = (count as f64).ln() - d as f64 * max_radius.ln();
        // The min-distance member is always within the mean distance, so the
        // inner count is at least 1 and the log stays finite.
        let inner = dists.iter().filter(|&&dist| dist <= avg_radius).count();
        let log_avg = (inner as f64).ln() - d as f64 * avg_radius.ln();
        (log_max, log_avg, (-(log_avg - log_max).abs()).exp())
    };

    Ok(GranularBall {
        members,
        center,
        max_radius,
        avg_radius,
        log_max_density,
        log_avg_density,
        consistency,
    })
}

/// Initial division: seeded k-means with k = floor(sqrt(n)) (or the
/// configured override), empty clusters dropped.
pub fn coarse_divide(ds: &Dataset, cfg: &SplitConfig) -> Result<BallSet> {
    cfg.validate()?;
    let n = ds.len();
    let k = cfg.coarse_count_for(n);
    let members: Vec<usize> = (0..n).collect();
    let km = kmeans::run(ds, &members, k, cfg.kmeans_max_iters, cfg.seed)?;
    let mut groups = vec![Vec::new(); km.k];
    for (i, &c) in km.assignments.iter().enumerate() {
        groups[c].push(i);
    }
    let balls = groups.iter().map(|g| fit_stats(ds, g)).collect::<Result<Vec<_>>>()?;
    BallSet::new_checked(n, balls)
}

/// Splits one ball in two with seeded 2-means. Children are nonempty,
/// partition the parent, and arrive with the child containing the parent's
/// smallest member first.
pub fn binary_split(
    ds: &Dataset,
    ball: &GranularBall,
    cfg: &SplitConfig,
) -> Result<(GranularBall, GranularBall)> {
    if ball.len() < 2 {
        return Err(Error::TooFewMembers { needed: 2, got: ball.len() });
    }
    let seed = mix_seed(cfg.seed, ball.min_member() as u64);
    let km = kmeans::run(ds, ball.members(), 2, cfg.kmeans_max_iters, seed)?;
    let (first, second) = if km.k == 2 {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (slot, &p) in ball.members().iter().enumerate() {
            if km.assignments[slot] == km.assignments[0] {
                a.push(p);
            } else {
                b.push(p);
            }
        }
        (a, b)
    } else {
        // Coincident members collapse 2-means to one cluster; force the
        // smallest member out so both children are nonempty.
        let (head, tail) = ball.members().split_first().expect("validated above");
        (vec![*head], tail.to_vec())
    };
    Ok((fit_stats(ds, &first)?, fit_stats(ds, &second)?))
}

/// Repeatedly sweeps the ball set, splitting inconsistent balls while the
/// acceptance policy keeps improving them.
///
/// A ball at or above the consistency threshold is final. A candidate whose
/// tentative split is rejected is also final and never retried. Each kept
/// split strictly increases the ball count, which is bounded by n, so the
/// sweep loop terminates.
pub fn split_all(ds: &Dataset, balls: BallSet, cfg: &SplitConfig) -> Result<BallSet> {
    cfg.validate()?;
    let n = balls.point_count();
    let mut finals: Vec<GranularBall> = Vec::new();
    let mut active = balls.balls;

    while !active.is_empty() {
        let (candidates, keep): (Vec<_>, Vec<_>) = active
            .into_iter()
            .partition(|b| b.len() >= 2 && b.consistency() < cfg.consistency_threshold);
        finals.extend(keep);
        active = Vec::new();

        let outcomes = par::map_indexed(candidates.len(), |i| try_split(ds, &candidates[i], cfg))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        for (parent, outcome) in candidates.into_iter().zip(outcomes) {
            match outcome {
                Some((a, b)) => {
                    active.push(a);
                    active.push(b);
                }
                None => finals.push(parent),
            }
        }
    }

    BallSet::new_checked(n, finals)
}

fn try_split(
    ds: &Dataset,
    parent: &GranularBall,
    cfg: &SplitConfig,
) -> Result<Option<(GranularBall, GranularBall)>> {
    let (a, b) = binary_split(ds, parent, cfg)?;
    if a.len() < 2 || b.len() < 2 {
        return Ok(None);
    }
    let denser = |child: &GranularBall| child.log_max_density() > parent.log_max_density();
    let keep = match cfg.split_acceptance {
        SplitPolicy::BothChildrenDenser => denser(&a) && denser(&b),
        SplitPolicy::EitherChildDenser => denser(&a) || denser(&b),
        SplitPolicy::ChildrenConsistent => {
            a.consistency() >= cfg.consistency_threshold
                && b.consistency() >= cfg.consistency_threshold
        }
    };
    Ok(keep.then_some((a, b)))
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
