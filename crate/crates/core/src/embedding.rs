//! Lag-correlation (ACL) curves, delay selection and delay-coordinate
//! embeddings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cloud::PointCloud;
use crate::signal::Signal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("ACL curve has no zero crossing")]
    NoZeroCrossing,
    #[error("ACL curve has {found} critical point(s), need {needed}")]
    NoCriticalPoints { found: usize, needed: usize },
    #[error("signal of {len} samples is too short for delay {delay} in dimension {dim}")]
    SignalTooShort { len: usize, delay: usize, dim: usize },
    #[error("index delay must be at least 1")]
    InvalidDelay,
    #[error("embedding dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
}

impl EmbeddingError {
    pub fn kind(&self) -> &'static str {
        match self {
            EmbeddingError::NoZeroCrossing => "NoZeroCrossing",
            EmbeddingError::NoCriticalPoints { .. } => "NoCriticalPoints",
            EmbeddingError::SignalTooShort { .. } => "SignalTooShort",
            EmbeddingError::InvalidDelay => "InvalidDelay",
            EmbeddingError::InvalidDimension(_) => "InvalidDimension",
        }
    }
}

/// ACL values indexed by integer lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AclCurve {
    pub values: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl AclCurve {
    pub fn lag_seconds(&self, lag: usize) -> f64 {
        lag as f64 / self.sample_rate_hz
    }

    /// Fractional lags where the curve changes sign, ascending. A run of
    /// exact zeros between opposite signs counts once, at its midpoint.
    pub fn zero_crossings(&self) -> Vec<f64> {
        let v = &self.values;
        let mut out = Vec::new();
        let mut prev: Option<usize> = None;
        for (j, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            if let Some(p) = prev {
                if (v[p] > 0.0) != (x > 0.0) {
                    if j - p > 1 {
                        out.push((p + j) as f64 / 2.0);
                    } else {
                        out.push(p as f64 + v[p] / (v[p] - x));
                    }
                }
            }
            prev = Some(j);
        }
        out
    }
}

/// Lag correlation `R[j] = Σ_l x_l · x_{l+j}`, summed directly and in index
/// order so the result is bitwise reproducible.
pub fn acl(s: &Signal) -> AclCurve {
    AclCurve {
        values: lag_correlation(s.samples()),
        sample_rate_hz: s.sample_rate_hz(),
    }
}

pub fn lag_correlation(x: &[f64]) -> Vec<f64> {
    let k = x.len();
    (0..k)
        .map(|j| x[..k - j].iter().zip(&x[j..]).map(|(a, b)| a * b).sum())
        .collect()
}

/// The ACL formula read literally, `R(t_i) = x_i · Σ_l x_l`. Kept for
/// auditing; it is a rescaled copy of the signal, not a lag function.
pub fn acl_literal(s: &Signal) -> AclCurve {
    let total: f64 = s.samples().iter().sum();
    AclCurve {
        values: s.samples().iter().map(|x| x * total).collect(),
        sample_rate_hz: s.sample_rate_hz(),
    }
}

/// Lags where the discrete derivative changes sign, ascending. Plateaus
/// report the midpoint (rounded down) of the flat run.
pub fn critical_points(c: &AclCurve) -> Result<Vec<usize>, EmbeddingError> {
    let v = &c.values;
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for j in 0..v.len().saturating_sub(1) {
        let d = v[j + 1] - v[j];
        if d == 0.0 {
            continue;
        }
        let rising = d > 0.0;
        if let Some((p, was_rising)) = last {
            if was_rising != rising {
                out.push((p + 1 + j) / 2);
            }
        }
        last = Some((j, rising));
    }
    if out.is_empty() {
        return Err(EmbeddingError::NoCriticalPoints { found: 0, needed: 1 });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayStrategy {
    /// First zero of the ACL curve.
    #[default]
    FirstZero,
    /// Second zero of the ACL curve.
    SecondZero,
    /// Midpoint of the first two critical points.
    MidCritical,
}

impl DelayStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            DelayStrategy::FirstZero => "first-zero",
            DelayStrategy::SecondZero => "second-zero",
            DelayStrategy::MidCritical => "mid-critical",
        }
    }
}

impl fmt::Display for DelayStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DelayStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-zero" => Ok(DelayStrategy::FirstZero),
            "second-zero" => Ok(DelayStrategy::SecondZero),
            "mid-critical" => Ok(DelayStrategy::MidCritical),
            other => Err(format!(
                "unknown delay strategy {other:?} (expected first-zero, second-zero or mid-critical)"
            )),
        }
    }
}

/// Picks an index delay `j` with `1 <= j < len` from the ACL curve.
pub fn select_delay(c: &AclCurve, strategy: DelayStrategy) -> Result<usize, EmbeddingError> {
    let k = c.values.len();
    let lag = match strategy {
        DelayStrategy::FirstZero | DelayStrategy::SecondZero => {
            let nth = if strategy == DelayStrategy::FirstZero { 0 } else { 1 };
            let zero = c
                .zero_crossings()
                .into_iter()
                .nth(nth)
                .ok_or(EmbeddingError::NoZeroCrossing)?;
            zero.round() as usize
        }
        DelayStrategy::MidCritical => {
            let crit = critical_points(c)?;
            if crit.len() < 2 {
                return Err(EmbeddingError::NoCriticalPoints {
                    found: crit.len(),
                    needed: 2,
                });
            }
            ((crit[0] + crit[1]) as f64 / 2.0).round() as usize
        }
    };
    Ok(lag.clamp(1, k.saturating_sub(1).max(1)))
}

/// Delay-coordinate embedding `X_i = (x_i, x_{i+j}, …, x_{i+(m-1)j})`.
pub fn delay_embed(s: &Signal, delay: usize, dim: usize) -> Result<PointCloud, EmbeddingError> {
    delay_embed_samples(s.samples(), delay, dim)
}

pub fn delay_embed_samples(x: &[f64], delay: usize, dim: usize) -> Result<PointCloud, EmbeddingError> {
    if delay == 0 {
        return Err(EmbeddingError::InvalidDelay);
    }
    if dim < 2 {
        return Err(EmbeddingError::InvalidDimension(dim));
    }
    let span = (dim - 1) * delay;
    if x.len() <= span {
        return Err(EmbeddingError::SignalTooShort {
            len: x.len(),
            delay,
            dim,
        });
    }
    let count = x.len() - span;
    let mut coords = Vec::with_capacity(count * dim);
    for i in 0..count {
        coords.extend((0..dim).map(|c| x[i + c * delay]));
    }
    Ok(PointCloud::new(dim, coords).expect("embedding of finite samples is a valid cloud"))
}

/// Semi-axes `A·sqrt(1 ± cos(2πτ/T))` of the planar embedding of
/// `A·sin(2πt/T + φ)` with delay `τ`, larger first. The axes lie along the
/// diagonals `y = ±x`.
pub fn ellipse_radii(amplitude: f64, period: f64, delay: f64) -> (f64, f64) {
    let c = (2.0 * std::f64::consts::PI * delay / period).cos();
    let a = amplitude * (1.0 + c).sqrt();
    let b = amplitude * (1.0 - c).sqrt();
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}
