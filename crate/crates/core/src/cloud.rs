//! Finite point clouds in `R^m`, stored row-major.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CloudError {
    #[error("point cloud dimension must be positive")]
    ZeroDimension,
    #[error("coordinate buffer of length {len} is not a multiple of dimension {dim}")]
    Ragged { len: usize, dim: usize },
    #[error("non-finite coordinate at point {point}")]
    NonFinite { point: usize },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CloudError {
    pub fn kind(&self) -> &'static str {
        match self {
            CloudError::ZeroDimension => "ZeroDimension",
            CloudError::Ragged { .. } => "RaggedCloud",
            CloudError::NonFinite { .. } => "NonFinite",
            CloudError::Csv { .. } => "MalformedCsv",
            CloudError::FileNotFound(_) => "FileNotFound",
            CloudError::Io(_) => "Io",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, CloudError> {
        if dim == 0 {
            return Err(CloudError::ZeroDimension);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(CloudError::Ragged { len: coords.len(), dim });
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(CloudError::NonFinite { point: i / dim });
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn empty(dim: usize) -> Result<Self, CloudError> {
        PointCloud::new(dim, Vec::new())
    }

    pub fn from_points<P: AsRef<[f64]>>(dim: usize, points: &[P]) -> Result<Self, CloudError> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(CloudError::Ragged { len: p.len(), dim });
            }
            coords.extend_from_slice(p);
        }
        PointCloud::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }

    /// The points at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud { dim: self.dim, coords }
    }

    /// Largest pairwise Euclidean distance; zero for fewer than two points.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.distance(i, j));
            }
        }
        best
    }

    /// Full symmetric distance matrix, row-major `n × n`.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.distance(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        d
    }

    /// One point per line, comma-separated coordinates.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for p in self.points() {
            for (k, c) in p.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<PointCloud, CloudError> {
        let mut dim = None;
        let mut coords = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CloudError::Csv {
                    line: n + 1,
                    message: e.to_string(),
                })?;
            match dim {
                None => dim = Some(row.len()),
                Some(d) if d != row.len() => {
                    return Err(CloudError::Csv {
                        line: n + 1,
                        message: format!("expected {d} coordinates, found {}", row.len()),
                    })
                }
                _ => {}
            }
            coords.extend(row);
        }
        PointCloud::new(dim.unwrap_or(2), coords)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<PointCloud, CloudError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        PointCloud::from_csv_str(&text)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), CloudError> {
        let path = path.as_ref();
        fs::write(path, self.to_csv_string()).map_err(|e| io_error(path, e))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CloudError {
    if e.kind() == std::io::ErrorKind::NotFound {
        CloudError::FileNotFound(path.display().to_string())
    } else {
        CloudError::Io(format!("{}: {e}", path.display()))
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
