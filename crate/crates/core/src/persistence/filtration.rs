use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::PersistenceError;
use crate::cloud::PointCloud;

/// Rips scale cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxEps {
    /// The cloud diameter, so the full simplex up to `max_dim` is built.
    #[default]
    Auto,
    Value(f64),
}

impl MaxEps {
    pub(crate) fn resolve(self, cloud: &PointCloud) -> Result<f64, PersistenceError> {
        match self {
            MaxEps::Auto => Ok(cloud.diameter()),
            MaxEps::Value(v) if v > 0.0 && !v.is_nan() => Ok(v),
            MaxEps::Value(v) => Err(PersistenceError::InvalidMaxEps(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Ascending vertex indices.
    pub vertices: Vec<usize>,
    /// Largest pairwise distance among the vertices; zero for a vertex.
    pub value: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn filtration_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

/// Rips simplices ordered by `(value, dimension, vertices)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub simplices: Vec<Simplex>,
    pub max_dim: usize,
    pub max_eps: f64,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_in_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }
}

/// Every simplex of dimension `<= max_dim` whose diameter is at most the
/// cutoff.
pub fn rips_filtration(cloud: &PointCloud, max_dim: usize, max_eps: MaxEps) -> Result<Filtration, PersistenceError> {
    if cloud.is_empty() {
        return Err(PersistenceError::EmptyCloud);
    }
    if max_dim == 0 {
        return Err(PersistenceError::InvalidMaxDim);
    }
    let eps = max_eps.resolve(cloud)?;
    let n = cloud.len();
    let dist = cloud.distance_matrix();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| dist[i * n + j] <= eps).collect())
        .collect();

    let mut simplices = Vec::new();
    let mut stack = Vec::with_capacity(max_dim + 1);
    for v in 0..n {
        stack.push(v);
        expand(
            &dist,
            n,
            &neighbors,
            max_dim,
            &mut stack,
            0.0,
            &neighbors[v],
            &mut simplices,
        );
        stack.pop();
    }
    simplices.sort_by(Simplex::filtration_cmp);
    Ok(Filtration {
        simplices,
        max_dim,
        max_eps: eps,
    })
}

/// Emits the clique on `stack` and recurses into common higher neighbours.
#[allow(clippy::too_many_arguments)]
fn expand(
    dist: &[f64],
    n: usize,
    neighbors: &[Vec<usize>],
    max_dim: usize,
    stack: &mut Vec<usize>,
    value: f64,
    candidates: &[usize],
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex {
        vertices: stack.clone(),
        value,
    });
    if stack.len() > max_dim {
        return;
    }
    for (k, &w) in candidates.iter().enumerate() {
        let next_value = stack.iter().map(|&u| dist[u * n + w]).fold(value, f64::max);
        let next: Vec<usize> = candidates[k + 1..]
            .iter()
            .copied()
            .filter(|c| neighbors[w].binary_search(c).is_ok())
            .collect();
        stack.push(w);
        expand(dist, n, neighbors, max_dim, stack, next_value, &next, out);
        stack.pop();
    }
}
