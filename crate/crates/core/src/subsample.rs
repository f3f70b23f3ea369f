//! Point cloud subsampling: greedy farthest-point (maxmin) and seeded
//! uniform selection without replacement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cloud::{euclidean, PointCloud};
use crate::rng::SplitMix64;

pub const DEFAULT_SUBSAMPLE_SIZE: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubsampleError {
    #[error("cannot select {n} points from a cloud of {len}")]
    NTooLarge { n: usize, len: usize },
    #[error("subsample size must be at least 1")]
    ZeroCount,
    #[error("start index {start} out of range for {len} points")]
    BadStart { start: usize, len: usize },
}

impl SubsampleError {
    pub fn kind(&self) -> &'static str {
        match self {
            SubsampleError::NTooLarge { .. } => "NTooLarge",
            SubsampleError::ZeroCount => "ZeroCount",
            SubsampleError::BadStart { .. } => "BadStart",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsampleMethod {
    #[default]
    Random,
    Maxmin,
}

impl fmt::Display for SubsampleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubsampleMethod::Random => "random",
            SubsampleMethod::Maxmin => "maxmin",
        })
    }
}

impl FromStr for SubsampleMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(SubsampleMethod::Random),
            "maxmin" => Ok(SubsampleMethod::Maxmin),
            other => Err(format!(
                "unknown subsample method {other:?} (expected random or maxmin)"
            )),
        }
    }
}

fn check_count(cloud: &PointCloud, n: usize) -> Result<(), SubsampleError> {
    if n == 0 {
        return Err(SubsampleError::ZeroCount);
    }
    if n > cloud.len() {
        return Err(SubsampleError::NTooLarge { n, len: cloud.len() });
    }
    Ok(())
}

pub fn subsample(
    cloud: &PointCloud,
    n: usize,
    seed: u64,
    method: SubsampleMethod,
) -> Result<PointCloud, SubsampleError> {
    match method {
        SubsampleMethod::Random => random_subsample(cloud, n, seed),
        SubsampleMethod::Maxmin => maxmin(cloud, n, seed),
    }
}

/// Farthest-point subsample with the starting point drawn from `seed`.
pub fn maxmin(cloud: &PointCloud, n: usize, seed: u64) -> Result<PointCloud, SubsampleError> {
    check_count(cloud, n)?;
    let start = SplitMix64::new(seed).below(cloud.len());
    Ok(cloud.select(&maxmin_indices(cloud, n, start)?))
}

/// Greedy farthest-point selection from a given start. Each new point
/// maximizes its distance to the nearest already chosen point; ties go to
/// the lowest index. Indices are returned in selection order.
pub fn maxmin_indices(cloud: &PointCloud, n: usize, start: usize) -> Result<Vec<usize>, SubsampleError> {
    check_count(cloud, n)?;
    let len = cloud.len();
    if start >= len {
        return Err(SubsampleError::BadStart { start, len });
    }
    let mut chosen = Vec::with_capacity(n);
    let mut taken = vec![false; len];
    let mut nearest = vec![f64::INFINITY; len];
    let mut current = start;
    loop {
        chosen.push(current);
        taken[current] = true;
        if chosen.len() == n {
            break;
        }
        let p = cloud.point(current);
        let mut best: Option<(usize, f64)> = None;
        for (i, d) in nearest.iter_mut().enumerate() {
            if taken[i] {
                continue;
            }
            let dist = euclidean(p, cloud.point(i));
            if dist < *d {
                *d = dist;
            }
            if best.is_none_or(|(_, b)| *d > b) {
                best = Some((i, *d));
            }
        }
        current = best.expect("n <= len leaves an untaken point").0;
    }
    Ok(chosen)
}

/// `n` distinct points drawn uniformly without replacement by a partial
/// Fisher–Yates shuffle driven by [`SplitMix64`].
pub fn random_subsample(cloud: &PointCloud, n: usize, seed: u64) -> Result<PointCloud, SubsampleError> {
    Ok(cloud.select(&random_indices(cloud.len(), n, seed)?))
}

pub fn random_indices(len: usize, n: usize, seed: u64) -> Result<Vec<usize>, SubsampleError> {
    if n == 0 {
        return Err(SubsampleError::ZeroCount);
    }
    if n > len {
        return Err(SubsampleError::NTooLarge { n, len });
    }
    let mut rng = SplitMix64::new(seed);
    let mut idx: Vec<usize> = (0..len).collect();
    for i in 0..n {
        let j = i + rng.below(len - i);
        idx.swap(i, j);
    }
    idx.truncate(n);
    Ok(idx)
}

/// Largest distance from a cloud point to its nearest subsample point.
pub fn covering_radius(cloud: &PointCloud, sample: &PointCloud) -> f64 {
    cloud
        .points()
        .map(|p| sample.points().map(|q| euclidean(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}
