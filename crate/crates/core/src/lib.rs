//! Persistent homology of delay embeddings for detecting harmonic
//! (almost periodic) structure in sampled signals.

pub mod cloud;
pub mod detector;
pub mod embedding;
pub mod metrics;
pub mod persistence;
pub mod rng;
pub mod signal;
pub mod subsample;
pub mod synth;

use thiserror::Error;

pub use cloud::{CloudError, PointCloud};
pub use detector::{detect, evaluate, DetectError, DetectionReport, Evaluation, Label, PipelineConfig};
pub use embedding::{acl, delay_embed, select_delay, AclCurve, DelayStrategy, EmbeddingError};
pub use metrics::{bottleneck, hausdorff, MetricError};
pub use persistence::{
    persistent_homology, rips_filtration, rips_persistence, Filtration, Interval, MaxEps, PersistenceDiagram,
    PersistenceError,
};
pub use rng::SplitMix64;
pub use signal::{load_signal, load_wav, Signal, SignalError};
pub use subsample::{maxmin, random_subsample, subsample, SubsampleError, SubsampleMethod};
pub use synth::{
    estimate_segments, fit_envelope, fit_model, graph, synthesize, Envelope, EnvelopePoint, ModelError,
    PiecewiseSinusoidModel, Segment, SegmentEstimate,
};

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Subsample(#[from] SubsampleError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

impl Error {
    /// Stable machine-readable name of the error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Signal(e) => e.kind(),
            Error::Cloud(e) => e.kind(),
            Error::Embedding(e) => e.kind(),
            Error::Subsample(e) => e.kind(),
            Error::Persistence(e) => e.kind(),
            Error::Metric(e) => e.kind(),
            Error::Model(e) => e.kind(),
            Error::Detect(e) => e.kind(),
        }
    }
}
