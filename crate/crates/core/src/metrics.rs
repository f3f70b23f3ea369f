//! Hausdorff distance between point clouds and bottleneck distance between
//! persistence diagrams.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cloud::{euclidean, PointCloud};
use crate::persistence::{Interval, PersistenceDiagram};

/// Clouds at least this large on both sides use the sorted sweep.
const SWEEP_THRESHOLD: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("point clouds have dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("point cloud is empty")]
    EmptyCloud,
}

impl MetricError {
    pub fn kind(&self) -> &'static str {
        match self {
            MetricError::DimensionMismatch(..) => "DimensionMismatch",
            MetricError::EmptyCloud => "EmptyCloud",
        }
    }
}

fn check(a: &PointCloud, b: &PointCloud) -> Result<(), MetricError> {
    if a.dim() != b.dim() {
        return Err(MetricError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptyCloud);
    }
    Ok(())
}

/// Symmetric Hausdorff distance under the Euclidean metric.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    check(a, b)?;
    if a.len() >= SWEEP_THRESHOLD && b.len() >= SWEEP_THRESHOLD {
        Ok(directed_sweep(a, b).max(directed_sweep(b, a)))
    } else {
        Ok(directed_scan(a, b).max(directed_scan(b, a)))
    }
}

/// Same value as [`hausdorff`], always by the plain `O(|A|·|B|)` scan.
pub fn hausdorff_direct(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    check(a, b)?;
    Ok(directed_scan(a, b).max(directed_scan(b, a)))
}

/// Same value as [`hausdorff`], always by the sorted sweep.
pub fn hausdorff_sweep(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    check(a, b)?;
    Ok(directed_sweep(a, b).max(directed_sweep(b, a)))
}

/// `max_{p∈a} min_{q∈b} |p - q|`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    check(a, b)?;
    Ok(directed_scan(a, b))
}

fn directed_scan(a: &PointCloud, b: &PointCloud) -> f64 {
    a.points()
        .map(|p| b.points().map(|q| euclidean(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Nearest neighbours found by walking outward from `p`'s position in `b`
/// sorted by the first coordinate; the walk stops once the first-coordinate
/// gap alone exceeds the best distance, or once `p` can no longer raise the
/// running maximum.
fn directed_sweep(a: &PointCloud, b: &PointCloud) -> f64 {
    let mut order: Vec<usize> = (0..b.len()).collect();
    order.sort_by(|&i, &j| b.point(i)[0].total_cmp(&b.point(j)[0]));
    let keys: Vec<f64> = order.iter().map(|&i| b.point(i)[0]).collect();
    let mut worst = 0.0_f64;
    for p in a.points() {
        let x = p[0];
        let start = keys.partition_point(|&k| k < x);
        let mut best = f64::INFINITY;
        let (mut lo, mut hi) = (start, start);
        loop {
            let left = (lo > 0).then(|| x - keys[lo - 1]);
            let right = (hi < keys.len()).then(|| keys[hi] - x);
            let take_left = match (left, right) {
                (Some(l), Some(r)) => l <= r,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let gap = if take_left { left.unwrap() } else { right.unwrap() };
            if gap > best {
                break;
            }
            let idx = if take_left {
                lo -= 1;
                order[lo]
            } else {
                hi += 1;
                order[hi - 1]
            };
            best = best.min(euclidean(p, b.point(idx)));
            if best <= worst {
                break;
            }
        }
        worst = worst.max(best);
    }
    worst
}

fn linf(a: &Interval, b: &Interval) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn diagonal_cost(i: &Interval) -> f64 {
    (i.death - i.birth) / 2.0
}

/// Bottleneck (`W∞`) distance between the `dim` parts of two diagrams.
///
/// Finite intervals are matched to each other or to the diagonal at
/// L∞ cost `(death - birth) / 2`; essential intervals only to essential
/// intervals. Different essential counts give infinity. The value is
/// exact: a binary search over candidate costs, each tested for a perfect
/// matching with Hopcroft–Karp.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> f64 {
    let split = |d: &PersistenceDiagram| {
        let (fin, ess): (Vec<Interval>, Vec<Interval>) = d.in_dim(dim).partition(|i| i.is_finite());
        (fin, ess)
    };
    let (fa, ea) = split(a);
    let (fb, eb) = split(b);
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    let mut births_a: Vec<f64> = ea.iter().map(|i| i.birth).collect();
    let mut births_b: Vec<f64> = eb.iter().map(|i| i.birth).collect();
    births_a.sort_by(f64::total_cmp);
    births_b.sort_by(f64::total_cmp);
    let essential = births_a
        .iter()
        .zip(&births_b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fa, &fb))
}

fn finite_bottleneck(a: &[Interval], b: &[Interval]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().map(diagonal_cost));
    candidates.extend(b.iter().map(diagonal_cost));
    for x in a {
        for y in b {
            candidates.push(linf(x, y));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the largest diagonal cost is always feasible
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_exists(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Left vertices: `a` then diagonal copies of `b`. Right vertices: `b` then
/// diagonal copies of `a`.
fn perfect_matching_exists(a: &[Interval], b: &[Interval], delta: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if linf(x, y) <= delta {
                adj[i].push(j);
            }
        }
        if diagonal_cost(x) <= delta {
            adj[i].push(m + i);
        }
    }
    for (j, y) in b.iter().enumerate() {
        let left = n + j;
        if diagonal_cost(y) <= delta {
            adj[left].push(j);
        }
        adj[left].extend((0..n).map(|i| m + i));
    }
    hopcroft_karp(&adj, size) == size
}

fn hopcroft_karp(adj: &[Vec<usize>], right_size: usize) -> usize {
    const FREE: usize = usize::MAX;
    let left_size = adj.len();
    let mut match_left = vec![FREE; left_size];
    let mut match_right = vec![FREE; right_size];
    let mut layer = vec![0usize; left_size];
    let mut matched = 0;
    loop {
        // BFS from free left vertices builds the layered graph.
        let mut queue = VecDeque::new();
        for u in 0..left_size {
            if match_left[u] == FREE {
                layer[u] = 0;
                queue.push_back(u);
            } else {
                layer[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if layer[w] == usize::MAX {
                    layer[w] = layer[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        let mut next_edge = vec![0usize; left_size];
        for u in 0..left_size {
            if match_left[u] == FREE && augment(u, adj, &mut match_left, &mut match_right, &mut layer, &mut next_edge) {
                matched += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    layer: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[u] < adj[u].len() {
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let w = match_right[v];
        let ok =
            w == usize::MAX || (layer[w] == layer[u] + 1 && augment(w, adj, match_left, match_right, layer, next_edge));
        if ok {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    layer[u] = usize::MAX;
    false
}
