//! Noise-ball detection and the round-structured merge of balls into
//! clusters, with fixed-K and adaptive variants.
//!
//! Merging proceeds in rounds over a union-find of ball indices. In the
//! first two rounds every cluster is joined with its most similar neighbor
//! unconditionally; from round three on only the strongest M−K links are
//! applied, one at a time, so the schedule lands on exactly K clusters.
//! Noise balls sit out the merge and are attached to the cluster of their
//! nearest surviving ball at the end.
//!
//! The adaptive variant runs the schedule down to one cluster, then cuts
//! where the per-round minimum merge distance jumps the hardest.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::ball::BallSet;
use crate::error::{Error, Result};
use crate::graph::BallGraph;

/// One merge round: which cluster pairs were unified and the smallest
/// shifted boundary distance realized by any of those merges.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeRound {
    /// 1-based round number.
    pub round_index: usize,
    /// Component-representative pairs actually unified this round.
    pub merges: Vec<(usize, usize)>,
    pub min_merge_distance: f64,
}

/// Final clustering: one label per ball and per point, plus the merge trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster id per ball, in 0..k.
    pub ball_labels: Vec<usize>,
    /// Cluster id per point; ids appear in order of first point appearance.
    pub point_labels: Vec<i32>,
    pub k: usize,
    pub trace: Vec<MergeRound>,
}

/// Where the adaptive schedule found its distance jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knee {
    /// Round whose minimum merge distance jumped; the cut precedes it.
    pub round_index: usize,
    /// Jump ratio against the previous round.
    pub ratio: f64,
}

/// Adaptive clustering result. `knee` is `None` when no round-to-round
/// ratio reached the jump factor; the clustering then has k = 1. The trace
/// always covers the full schedule down to one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveResult {
    pub clustering: Clustering,
    pub knee: Option<Knee>,
}

/// Flags balls whose density falls below `factor` times the average density
/// over multi-member balls, plus every single-point ball.
///
/// Zero-radius balls carry an infinite density sentinel: they are never
/// noise themselves and are left out of the average, which would otherwise
/// absorb everything else. The average is computed in log space.
pub fn detect_noise_balls(balls: &BallSet, factor: f64) -> Result<BTreeSet<usize>> {
    if !factor.is_finite() || factor <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise factor must be positive and finite, got {factor}"
        )));
    }
    if balls.is_empty() {
        return Err(Error::EmptyInput("no balls to scan for noise"));
    }
    let finite_logs: Vec<f64> = balls
        .balls()
        .iter()
        .filter(|b| b.len() >= 2 && b.log_max_density().is_finite())
        .map(|b| b.log_max_density())
        .collect();

    let log_threshold = if finite_logs.is_empty() {
        f64::NEG_INFINITY
    } else {
        let max = finite_logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum_exp: f64 = finite_logs.iter().map(|&l| (l - max).exp()).sum();
        let log_mean = max + sum_exp.ln() - (finite_logs.len() as f64).ln();
        factor.ln() + log_mean
    };

    let noise: BTreeSet<usize> = balls
        .balls()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.len() < 2 || b.log_max_density() < log_threshold)
        .map(|(i, _)| i)
        .collect();
    if noise.len() == balls.len() {
        return Err(Error::Degenerate("every ball fell below the noise threshold".into()));
    }
    Ok(noise)
}

/// Similarity between two ball groups: the maximum similarity over cross
/// pairs, i.e. the similarity of the two groups' nearest balls.
///
/// Panics if either group is empty; the groups are expected to be disjoint.
pub fn cluster_similarity(a: &[usize], b: &[usize], graph: &BallGraph) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "cluster similarity of an empty group");
    let mut best = f64::NEG_INFINITY;
    for &i in a {
        for &j in b {
            best = best.max(graph.sim(i, j));
        }
    }
    best
}

/// Merges non-noise balls down to exactly `k` clusters, then attaches each
/// noise ball to the cluster of its nearest non-noise ball.
///
/// The first two merge rounds are unconditional; a `k` that those rounds
/// jump past is unreachable and reported as an error.
pub fn merge_to_k(
    balls: &BallSet,
    graph: &BallGraph,
    k: usize,
    noise: &BTreeSet<usize>,
) -> Result<Clustering> {
    let schedule = run_schedule(balls, graph, noise, k)?;
    let state = schedule.states.last().unwrap_or(&schedule.initial).clone();
    finalize(balls, graph, noise, state, schedule.trace)
}

/// Runs the merge schedule down to a single cluster and cuts it before the
/// round whose minimum merge distance grew by the largest ratio, provided
/// that ratio reaches `jump_factor` and the cut leaves at least 2 clusters.
/// Without such a round the full one-cluster result is returned and `knee`
/// is `None`.
pub fn adaptive_merge(
    balls: &BallSet,
    graph: &BallGraph,
    noise: &BTreeSet<usize>,
    jump_factor: f64,
) -> Result<AdaptiveResult> {
    if !jump_factor.is_finite() || jump_factor <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "jump factor must be positive and finite, got {jump_factor}"
        )));
    }
    let active = balls.len() - noise.len();
    if active < 2 {
        return Err(Error::Degenerate(format!(
            "adaptive merging needs at least 2 non-noise balls, got {active}"
        )));
    }
    let schedule = run_schedule(balls, graph, noise, 1)?;

    let mut knee: Option<Knee> = None;
    for t in 1..schedule.trace.len() {
        let prev = schedule.trace[t - 1].min_merge_distance;
        let here = schedule.trace[t].min_merge_distance;
        if prev <= 0.0 {
            continue;
        }
        let ratio = here / prev;
        let clusters_before = schedule.counts[t - 1];
        if ratio >= jump_factor && clusters_before >= 2 && knee.is_none_or(|k| ratio > k.ratio) {
            knee = Some(Knee { round_index: schedule.trace[t].round_index, ratio });
        }
    }

    let state = match knee {
        // The cut precedes the jump round: restore the state left by the
        // round before it (round indices are 1-based, states 0-based).
        Some(k) => schedule.states[k.round_index - 2].clone(),
        None => schedule.states.last().unwrap_or(&schedule.initial).clone(),
    };
    let clustering = finalize(balls, graph, noise, state, schedule.trace)?;
    Ok(AdaptiveResult { clustering, knee })
}

/// Derives per-point labels from per-ball cluster ids, renumbering the ids
/// to 0..K−1 in order of first appearance along the point sequence.
pub fn point_labels(ball_ids: &[usize], balls: &BallSet) -> Result<Vec<i32>> {
    if ball_ids.len() != balls.len() {
        return Err(Error::LengthMismatch { left: ball_ids.len(), right: balls.len() });
    }
    let (_, points, _) = renumber(ball_ids, balls);
    Ok(points)
}

/// Renders a merge trace as CSV for knee inspection.
pub fn trace_csv(trace: &[MergeRound]) -> String {
    let mut out = String::from("round_index,merges_applied,min_merge_distance\n");
    for r in trace {
        writeln!(out, "{},{},{}", r.round_index, r.merges.len(), r.min_merge_distance)
            .expect("string write");
    }
    out
}

struct Schedule {
    trace: Vec<MergeRound>,
    /// Representative per ball after each round; usize::MAX marks noise.
    states: Vec<Vec<usize>>,
    /// Cluster count after each round.
    counts: Vec<usize>,
    initial: Vec<usize>,
}

/// A cluster's best outgoing link, realized by one ball pair.
#[derive(Debug, Clone, Copy)]
struct Link {
    from: usize,
    to: usize,
    pair: (usize, usize),
    sim: f64,
    dist: f64,
}

fn run_schedule(
    balls: &BallSet,
    graph: &BallGraph,
    noise: &BTreeSet<usize>,
    k: usize,
) -> Result<Schedule> {
    let m = balls.len();
    if graph.m() != m {
        return Err(Error::LengthMismatch { left: graph.m(), right: m });
    }
    if let Some(&bad) = noise.iter().find(|&&b| b >= m) {
        return Err(Error::InvalidParameter(format!(
            "noise ball index {bad} out of range for {m} balls"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("cluster count must be at least 1".into()));
    }
    let mut count = m - noise.len();
    if count < k {
        return Err(Error::KUnreachable {
            requested: k,
            available: count,
            context: "non-noise balls",
        });
    }

    let mut uf = UnionFind::new(m);
    let snapshot = |uf: &mut UnionFind| -> Vec<usize> {
        (0..m).map(|b| if noise.contains(&b) { usize::MAX } else { uf.find(b) }).collect()
    };
    let initial = snapshot(&mut uf);
    let mut schedule =
        Schedule { trace: Vec::new(), states: Vec::new(), counts: Vec::new(), initial };

    // The first round runs whenever there is anything to merge, even if the
    // target count is already met: the opening rounds are unconditional, and
    // a K they jump past is unreachable by construction.
    let mut round_index = 0;
    while count >= 2 && (count > k || round_index == 0) {
        round_index += 1;
        let links = best_links(balls.len(), graph, noise, &mut uf);
        debug_assert!(!links.is_empty(), "merge round with no candidate links");

        let mut merges = Vec::new();
        let mut min_dist = f64::INFINITY;
        let mut apply = |uf: &mut UnionFind, link: &Link, count: &mut usize| {
            let (ra, rb) = (uf.find(link.from), uf.find(link.to));
            if ra == rb {
                return false;
            }
            uf.union(ra, rb);
            merges.push((ra.min(rb), ra.max(rb)));
            min_dist = min_dist.min(link.dist);
            *count -= 1;
            true
        };

        if round_index <= 2 {
            // Mandatory rounds: every cluster joins its nearest neighbor.
            for link in links.values() {
                apply(&mut uf, link, &mut count);
            }
            if count < k {
                return Err(Error::KUnreachable {
                    requested: k,
                    available: count,
                    context: "after mandatory merge rounds",
                });
            }
        } else {
            let budget = count - k;
            for link in strongest(&links, budget) {
                apply(&mut uf, &link, &mut count);
                if count == k {
                    break;
                }
            }
        }

        debug_assert!(!merges.is_empty(), "round applied no merges");
        schedule.trace.push(MergeRound { round_index, merges, min_merge_distance: min_dist });
        schedule.states.push(snapshot(&mut uf));
        schedule.counts.push(count);
    }
    Ok(schedule)
}

/// Best outgoing link per cluster, keyed by cluster representative.
/// Ties in similarity resolve to the lexicographically smallest ball pair,
/// which the ascending pair scan yields for free.
fn best_links(
    m: usize,
    graph: &BallGraph,
    noise: &BTreeSet<usize>,
    uf: &mut UnionFind,
) -> BTreeMap<usize, Link> {
    let mut best: BTreeMap<usize, Link> = BTreeMap::new();
    for i in 0..m {
        if noise.contains(&i) {
            continue;
        }
        for j in (i + 1)..m {
            if noise.contains(&j) {
                continue;
            }
            let (ra, rb) = (uf.find(i), uf.find(j));
            if ra == rb {
                continue;
            }
            let link = Link {
                from: ra,
                to: rb,
                pair: (i, j),
                sim: graph.sim(i, j),
                dist: graph.shifted(i, j),
            };
            for (cluster, target) in [(ra, rb), (rb, ra)] {
                let candidate = Link { from: cluster, to: target, ..link };
                match best.get(&cluster) {
                    Some(cur) if cur.sim >= candidate.sim => {}
                    _ => {
                        best.insert(cluster, candidate);
                    }
                }
            }
        }
    }
    best
}

/// Deduplicates directed links into undirected ones and returns the top
/// `budget` by similarity (ties to the smaller realizing pair).
fn strongest(links: &BTreeMap<usize, Link>, budget: usize) -> Vec<Link> {
    let mut undirected: BTreeMap<(usize, usize), Link> = BTreeMap::new();
    for link in links.values() {
        let key = (link.from.min(link.to), link.from.max(link.to));
        match undirected.get(&key) {
            Some(cur) if (cur.sim, (cur.pair.0, cur.pair.1)) >= (link.sim, link.pair) => {}
            _ => {
                undirected.insert(key, *link);
            }
        }
    }
    let mut all: Vec<Link> = undirected.into_values().collect();
    all.sort_by(|a, b| b.sim.total_cmp(&a.sim).then(a.pair.cmp(&b.pair)));
    all.truncate(budget);
    all
}

/// Attaches noise balls to their nearest non-noise ball's cluster, then
/// renumbers cluster ids by first appearance in point order.
fn finalize(
    balls: &BallSet,
    graph: &BallGraph,
    noise: &BTreeSet<usize>,
    mut reprs: Vec<usize>,
    trace: Vec<MergeRound>,
) -> Result<Clustering> {
    let m = balls.len();
    for &b in noise {
        let mut nearest: Option<(f64, usize)> = None;
        for q in 0..m {
            if q == b || noise.contains(&q) {
                continue;
            }
            let d = graph.shifted(b, q);
            if nearest.is_none_or(|(nd, _)| d < nd) {
                nearest = Some((d, q));
            }
        }
        let (_, q) =
            nearest.ok_or(Error::Degenerate("no non-noise ball to absorb a noise ball".into()))?;
        reprs[b] = reprs[q];
    }

    let (ball_labels, point_labels, k) = renumber(&reprs, balls);
    Ok(Clustering { ball_labels, point_labels, k, trace })
}

fn renumber(ball_ids: &[usize], balls: &BallSet) -> (Vec<usize>, Vec<i32>, usize) {
    let n = balls.point_count();
    let mut ball_of_point = vec![0usize; n];
    for (b, ball) in balls.balls().iter().enumerate() {
        for &p in ball.members() {
            ball_of_point[p] = b;
        }
    }
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut point_labels = Vec::with_capacity(n);
    for p in 0..n {
        let id = ball_ids[ball_of_point[p]];
        let next = remap.len();
        let label = *remap.entry(id).or_insert(next);
        point_labels.push(label as i32);
    }
    let k = remap.len();
    let ball_labels = ball_ids.iter().map(|id| remap[id]).collect();
    (ball_labels, point_labels, k)
}

/// Union-find whose representative is always the smallest ball index in the
/// component, giving merges a stable identity.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::BallSet;
    use crate::dataset::Dataset;
    use crate::graph::build_graph;
    use approx::assert_abs_diff_eq;

    /// One 1D two-point ball per (center, radius) pair.
    fn ball_set(specs: &[(f64, f64)]) -> BallSet {
        let mut values = Vec::new();
        let mut groups = Vec::new();
        for (i, &(c, r)) in specs.iter().enumerate() {
            values.push(c - r);
            values.push(c + r);
            groups.push(vec![2 * i, 2 * i + 1]);
        }
        let ds = Dataset::from_flat(values, 1).unwrap();
        BallSet::from_partition(&ds, &groups).unwrap()
    }

    fn no_noise() -> BTreeSet<usize> {
        BTreeSet::new()
    }

    #[test]
    fn noise_detection_arithmetic() {
        // Densities 10, 10, 10, 1: average 7.75, threshold at 0.2x is 1.55.
        let balls = ball_set(&[(0.0, 0.2), (10.0, 0.2), (20.0, 0.2), (30.0, 2.0)]);
        let noise = detect_noise_balls(&balls, 0.2).unwrap();
        assert_eq!(noise, BTreeSet::from([3]));
    }

    #[test]
    fn equal_densities_give_no_noise() {
        let balls = ball_set(&[(0.0, 0.5), (10.0, 0.5), (20.0, 0.5)]);
        assert!(detect_noise_balls(&balls, 0.2).unwrap().is_empty());
    }

    #[test]
    fn singletons_are_always_noise() {
        let ds = Dataset::from_flat(vec![-0.2, 0.2, 9.8, 10.2, 5.0], 1).unwrap();
        let balls = BallSet::from_partition(&ds, &[vec![0, 1], vec![2, 3], vec![4]]).unwrap();
        let noise = detect_noise_balls(&balls, 0.2).unwrap();
        assert_eq!(noise, BTreeSet::from([2]));
    }

    #[test]
    fn all_noise_is_degenerate() {
        let ds = Dataset::from_flat(vec![0.0, 1.0, 2.0], 1).unwrap();
        let balls = BallSet::from_partition(&ds, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(matches!(detect_noise_balls(&balls, 0.2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn zero_radius_balls_are_dense_not_noise() {
        let ds = Dataset::from_flat(vec![5.0, 5.0, 0.0, 1.0, 10.0, 11.0], 1).unwrap();
        let balls = BallSet::from_partition(&ds, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let noise = detect_noise_balls(&balls, 0.2).unwrap();
        assert!(!noise.contains(&0));
    }

    #[test]
    fn cluster_similarity_takes_the_nearest_pair() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (3.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        assert_eq!(cluster_similarity(&[0], &[1], &g), g.sim(0, 1));
        let one_vs_two = cluster_similarity(&[0], &[1, 2], &g);
        assert_eq!(one_vs_two, g.sim(0, 1).max(g.sim(0, 2)));
        assert_eq!(one_vs_two, cluster_similarity(&[1, 2], &[0], &g));
    }

    #[test]
    fn two_pairs_merge_in_one_round() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (10.0, 0.2), (11.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let c = merge_to_k(&balls, &g, 2, &no_noise()).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.ball_labels, vec![0, 0, 1, 1]);
        assert_eq!(c.point_labels, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(c.trace.len(), 1);
        let round = &c.trace[0];
        assert_eq!(round.round_index, 1);
        assert_eq!(round.merges, vec![(0, 1), (2, 3)]);
        assert_abs_diff_eq!(round.min_merge_distance, 0.6, epsilon = 1e-12);
    }

    #[test]
    fn unreachable_k_is_an_error() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (10.0, 0.2), (11.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        // The first mandatory round drops the count from 4 to 2.
        assert!(matches!(
            merge_to_k(&balls, &g, 4, &no_noise()),
            Err(Error::KUnreachable { requested: 4, .. })
        ));
        assert!(matches!(
            merge_to_k(&balls, &g, 3, &no_noise()),
            Err(Error::KUnreachable { requested: 3, .. })
        ));
        // More clusters than balls is rejected before any merging.
        assert!(matches!(
            merge_to_k(&balls, &g, 5, &no_noise()),
            Err(Error::KUnreachable { requested: 5, available: 4, .. })
        ));
    }

    #[test]
    fn adaptive_finds_the_distance_jump() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (10.0, 0.2), (11.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let r = adaptive_merge(&balls, &g, &no_noise(), 2.0).unwrap();
        let knee = r.knee.expect("jump from 0.6 to 8.6 must be detected");
        assert_eq!(knee.round_index, 2);
        assert_abs_diff_eq!(knee.ratio, 8.6 / 0.6, epsilon = 1e-9);
        assert_eq!(r.clustering.k, 2);
        assert_eq!(r.clustering.ball_labels, vec![0, 0, 1, 1]);
        // The trace still covers the full schedule down to one cluster.
        assert_eq!(r.clustering.trace.len(), 2);
        assert_abs_diff_eq!(r.clustering.trace[1].min_merge_distance, 8.6, epsilon = 1e-12);
    }

    #[test]
    fn adaptive_detects_three_groups() {
        let balls =
            ball_set(&[(0.0, 0.2), (1.0, 0.2), (10.0, 0.2), (11.0, 0.2), (20.0, 0.2), (21.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let r = adaptive_merge(&balls, &g, &no_noise(), 2.0).unwrap();
        assert_eq!(r.clustering.k, 3);
        assert_eq!(r.clustering.ball_labels, vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn adaptive_without_jump_returns_one_cluster() {
        // Merge distances 0.6 then 0.8: ratio 1.33 stays below 2.
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (2.2, 0.2), (3.2, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let r = adaptive_merge(&balls, &g, &no_noise(), 2.0).unwrap();
        assert_eq!(r.knee, None);
        assert_eq!(r.clustering.k, 1);
        assert!(r.clustering.point_labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn chain_that_collapses_in_one_round_has_no_knee() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (2.0, 0.2), (3.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let r = adaptive_merge(&balls, &g, &no_noise(), 2.0).unwrap();
        assert_eq!(r.knee, None);
        assert_eq!(r.clustering.k, 1);
        assert_eq!(r.clustering.trace.len(), 1);
    }

    #[test]
    fn noise_ball_joins_its_nearest_cluster() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (5.0, 0.2), (10.0, 0.2), (11.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let noise = BTreeSet::from([2]);
        let c = merge_to_k(&balls, &g, 2, &noise).unwrap();
        assert_eq!(c.k, 2);
        // Ball 2 sits 3.6 from ball 1 and 4.6 from ball 3; it follows ball 1.
        assert_eq!(c.ball_labels, vec![0, 0, 0, 1, 1]);
        assert_eq!(c.point_labels, vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn noise_balls_do_not_drive_merges() {
        let balls = ball_set(&[(0.0, 0.2), (1.0, 0.2), (5.0, 0.2), (10.0, 0.2), (11.0, 0.2)]);
        let g = build_graph(&balls).unwrap();
        let noise = BTreeSet::from([2]);
        let c = merge_to_k(&balls, &g, 2, &noise).unwrap();
        for round in &c.trace {
            for &(a, b) in &round.merges {
                assert_ne!(a, 2);
                assert_ne!(b, 2);
            }
        }
    }

    #[test]
    fn point_label_ids_follow_first_appearance() {
        let ds = Dataset::from_flat(vec![0.0, 1.0, 2.0, 3.0, 4.0], 1).unwrap();
        let balls = BallSet::from_partition(&ds, &[vec![0, 1], vec![2, 3], vec![4]]).unwrap();
        let labels = point_labels(&[7, 7, 3], &balls).unwrap();
        assert_eq!(labels, vec![0, 0, 0, 0, 1]);
        assert!(matches!(point_labels(&[1, 2], &balls), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn trace_csv_layout() {
        let trace = vec![
            MergeRound { round_index: 1, merges: vec![(0, 1), (2, 3)], min_merge_distance: 0.6 },
            MergeRound { round_index: 2, merges: vec![(0, 2)], min_merge_distance: 8.6 },
        ];
        let csv = trace_csv(&trace);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("round_index,merges_applied,min_merge_distance"));
        assert_eq!(lines.next(), Some("1,2,0.6"));
        assert_eq!(lines.next(), Some("2,1,8.6"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn cluster_count_never_increases_across_rounds() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let m = rng.gen_range(4..20);
            let specs: Vec<(f64, f64)> =
                (0..m).map(|_| (rng.gen_range(-50.0..50.0), rng.gen_range(0.1..1.0))).collect();
            let balls = ball_set(&specs);
            let g = build_graph(&balls).unwrap();
            let r = adaptive_merge(&balls, &g, &no_noise(), 2.0).unwrap();
            let counts: Vec<usize> = r.clustering.trace.iter().map(|t| t.merges.len()).collect();
            assert!(!counts.contains(&0));
            for round in &r.clustering.trace {
                assert!(round.min_merge_distance > 0.0);
            }
            let k_trace: Vec<usize> = std::iter::once(m)
                .chain(r.clustering.trace.iter().scan(m, |acc, t| {
                    *acc -= t.merges.len();
                    Some(*acc)
                }))
                .collect();
            assert!(k_trace.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(*k_trace.last().unwrap(), 1);
        }
    }
}
