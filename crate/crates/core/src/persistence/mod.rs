//! Vietoris–Rips persistent homology over the two-element field.
//!
//! Two routes produce the same diagram:
//!
//! * [`rips_filtration`] + [`persistent_homology`] materialize every simplex
//!   and reduce the boundary matrix column by column (with clearing). This
//!   works in any dimension and is the reference path.
//! * [`rips_persistence`] computes dimensions 0 and 1 only, from a union-find
//!   pass and a reduction of the implicit coboundary matrix. Triangles are
//!   never stored, which keeps clouds of a few hundred points cheap.

mod cohomology;
mod filtration;
mod reduction;

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cohomology::rips_persistence;
pub use filtration::{rips_filtration, Filtration, MaxEps, Simplex};
pub use reduction::persistent_homology;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PersistenceError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("max_dim must be at least 1")]
    InvalidMaxDim,
    #[error("max_eps must be positive, got {0}")]
    InvalidMaxEps(f64),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

impl PersistenceError {
    pub fn kind(&self) -> &'static str {
        match self {
            PersistenceError::EmptyCloud => "EmptyCloud",
            PersistenceError::InvalidMaxDim => "InvalidMaxDim",
            PersistenceError::InvalidMaxEps(_) => "InvalidMaxEps",
            PersistenceError::Malformed(_) => "MalformedDiagram",
        }
    }
}

/// A homology class of dimension `dim` alive on `[birth, death)`. Essential
/// classes have `death == f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "IntervalRepr", into = "IntervalRepr")]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl Interval {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        Interval { dim, birth, death }
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.total_cmp(&other.death))
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    dim: usize,
    birth: f64,
    death: Option<f64>,
}

impl From<IntervalRepr> for Interval {
    fn from(r: IntervalRepr) -> Self {
        Interval::new(r.dim, r.birth, r.death.unwrap_or(f64::INFINITY))
    }
}

impl From<Interval> for IntervalRepr {
    fn from(i: Interval) -> Self {
        IntervalRepr {
            dim: i.dim,
            birth: i.birth,
            death: i.is_finite().then_some(i.death),
        }
    }
}

/// Multiset of persistence intervals, kept sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PersistenceDiagram {
    intervals: Vec<Interval>,
}

impl PersistenceDiagram {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(Interval::total_cmp);
        PersistenceDiagram { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> + '_ {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    pub fn finite_in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> + '_ {
        self.in_dim(dim).filter(|i| i.is_finite())
    }

    /// The longest finite interval of `dim`, if any.
    pub fn longest_finite(&self, dim: usize) -> Option<Interval> {
        self.finite_in_dim(dim)
            .copied()
            .max_by(|a, b| a.length().total_cmp(&b.length()))
    }

    /// Keeps only intervals of the given dimension.
    pub fn restrict(&self, dim: usize) -> PersistenceDiagram {
        PersistenceDiagram {
            intervals: self.in_dim(dim).copied().collect(),
        }
    }

    /// Multiplies every birth and death by `factor`.
    pub fn scaled(&self, factor: f64) -> PersistenceDiagram {
        PersistenceDiagram::new(
            self.intervals
                .iter()
                .map(|i| Interval::new(i.dim, i.birth * factor, i.death * factor))
                .collect(),
        )
    }

    /// `β_dim(ε)`: number of intervals with `birth <= ε < death`.
    pub fn betti(&self, dim: usize, eps: f64) -> usize {
        self.in_dim(dim).filter(|i| i.birth <= eps && eps < i.death).count()
    }

    pub fn betti_curve(&self, dim: usize) -> BettiCurve {
        betti_curve(self, dim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PersistenceError> {
        let d: PersistenceDiagram =
            serde_json::from_str(text).map_err(|e| PersistenceError::Malformed(e.to_string()))?;
        for i in &d.intervals {
            if i.birth.is_nan() || i.death.is_nan() || i.birth > i.death {
                return Err(PersistenceError::Malformed(format!(
                    "interval [{}, {}) in dim {} has birth after death",
                    i.birth, i.death, i.dim
                )));
            }
        }
        Ok(PersistenceDiagram::new(d.intervals))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self, PersistenceError> {
        let path = path.as_ref();
        let text =
            fs::read_to_string(path).map_err(|e| PersistenceError::Malformed(format!("{}: {e}", path.display())))?;
        PersistenceDiagram::from_json(&text)
    }
}

/// Right-continuous step function `ε ↦ β_dim(ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiCurve {
    pub dim: usize,
    /// `(ε, β)` pairs: the value is `β` on `[ε_k, ε_{k+1})`, and zero left of
    /// the first breakpoint.
    pub steps: Vec<(f64, usize)>,
}

impl BettiCurve {
    pub fn value_at(&self, eps: f64) -> usize {
        match self.steps.partition_point(|&(e, _)| e <= eps) {
            0 => 0,
            k => self.steps[k - 1].1,
        }
    }
}

pub fn betti_curve(d: &PersistenceDiagram, dim: usize) -> BettiCurve {
    let mut events: Vec<(f64, i64)> = Vec::new();
    for i in d.in_dim(dim) {
        events.push((i.birth, 1));
        if i.is_finite() {
            events.push((i.death, -1));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut steps: Vec<(f64, usize)> = Vec::new();
    let mut level = 0_i64;
    for (eps, delta) in events {
        level += delta;
        match steps.last_mut() {
            Some(last) if last.0 == eps => last.1 = level as usize,
            _ => steps.push((eps, level as usize)),
        }
    }
    BettiCurve { dim, steps }
}
