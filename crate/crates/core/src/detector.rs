//! Harmonic-structure detection: normalize, pick a delay from the ACL
//! curve, embed, subsample, and look for a long-lived one-dimensional
//! hole in the Rips barcode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{acl, delay_embed, select_delay, DelayStrategy, EmbeddingError};
use crate::persistence::{rips_persistence, MaxEps, PersistenceDiagram};
use crate::signal::Signal;
use crate::subsample::{subsample, SubsampleMethod, DEFAULT_SUBSAMPLE_SIZE};

pub const DEFAULT_THRESHOLD: f64 = 0.15;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectError {
    /// The pipeline cannot reach a decision on this signal.
    #[error("undecidable ({kind}): {reason}")]
    Undecidable { kind: &'static str, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dataset is empty")]
    EmptyDataset,
}

impl DetectError {
    pub fn kind(&self) -> &'static str {
        match self {
            DetectError::Undecidable { .. } => "Undecidable",
            DetectError::InvalidConfig(_) => "InvalidConfig",
            DetectError::EmptyDataset => "EmptyDataset",
        }
    }
}

impl From<EmbeddingError> for DetectError {
    fn from(e: EmbeddingError) -> Self {
        DetectError::Undecidable {
            kind: e.kind(),
            reason: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Harmonic,
    NonHarmonic,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Harmonic => "harmonic",
            Label::NonHarmonic => "non-harmonic",
        })
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "harmonic" | "wheeze" | "1" => Ok(Label::Harmonic),
            "non-harmonic" | "nonharmonic" | "non-wheeze" | "normal" | "0" => Ok(Label::NonHarmonic),
            other => Err(format!("unknown label {other:?} (expected harmonic or non-harmonic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub strategy: DelayStrategy,
    /// Embedding dimension.
    pub dim: usize,
    /// Subsample size; clouds with fewer points are used whole.
    pub n: usize,
    pub method: SubsampleMethod,
    pub seed: u64,
    /// Minimum significance for a harmonic label.
    pub threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            strategy: DelayStrategy::FirstZero,
            dim: 2,
            n: DEFAULT_SUBSAMPLE_SIZE,
            method: SubsampleMethod::Random,
            seed: DEFAULT_SEED,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<(), DetectError> {
        if self.dim < 2 {
            return Err(DetectError::InvalidConfig(format!(
                "embedding dimension {} < 2",
                self.dim
            )));
        }
        if self.n == 0 {
            return Err(DetectError::InvalidConfig("subsample size must be at least 1".into()));
        }
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(DetectError::InvalidConfig(format!(
                "threshold {} is not a finite non-negative number",
                self.threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub label: Label,
    pub delay_j: usize,
    pub embedding_dim: usize,
    pub strategy: DelayStrategy,
    pub subsample_method: SubsampleMethod,
    pub subsample_size: usize,
    pub seed: u64,
    /// Diameter of the subsampled cloud.
    pub diameter: f64,
    pub significance: f64,
    pub threshold: f64,
    pub diagram: PersistenceDiagram,
}

/// Longest finite one-dimensional bar as a fraction of `diameter`.
pub fn significance(d: &PersistenceDiagram, diameter: f64) -> f64 {
    if diameter <= 0.0 {
        return 0.0;
    }
    d.longest_finite(1).map_or(0.0, |i| i.length() / diameter)
}

pub fn detect(s: &Signal, cfg: &PipelineConfig) -> Result<DetectionReport, DetectError> {
    cfg.validate()?;
    let s = s.normalize();
    let curve = acl(&s);
    let delay = select_delay(&curve, cfg.strategy)?;
    let cloud = delay_embed(&s, delay, cfg.dim)?;
    let size = cfg.n.min(cloud.len());
    let sample = subsample(&cloud, size, cfg.seed, cfg.method).expect("size within cloud");
    let diagram = rips_persistence(&sample, MaxEps::Auto).expect("non-empty cloud");
    let diameter = sample.diameter();
    let significance = significance(&diagram, diameter);
    let label = if significance >= cfg.threshold {
        Label::Harmonic
    } else {
        Label::NonHarmonic
    };
    Ok(DetectionReport {
        label,
        delay_j: delay,
        embedding_dim: cfg.dim,
        strategy: cfg.strategy,
        subsample_method: cfg.method,
        subsample_size: size,
        seed: cfg.seed,
        diameter,
        significance,
        threshold: cfg.threshold,
        diagram,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    /// Harmonic signals labelled harmonic.
    pub true_positive: usize,
    /// Non-harmonic signals labelled harmonic.
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
    /// Signals where the pipeline could not decide; counted as errors.
    pub undecidable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub total: usize,
    pub correct: usize,
    pub confusion: Confusion,
    pub config: PipelineConfig,
}

pub fn evaluate(dataset: &[(Signal, Label)], cfg: &PipelineConfig) -> Result<Evaluation, DetectError> {
    evaluate_outcomes(
        dataset
            .iter()
            .map(|(s, truth)| (detect(s, cfg).map(|r| r.label), *truth)),
        cfg,
    )
}

/// Tallies `(predicted, truth)` pairs. Configuration errors abort;
/// undecidable signals are counted and scored as wrong.
pub fn evaluate_outcomes(
    outcomes: impl IntoIterator<Item = (Result<Label, DetectError>, Label)>,
    cfg: &PipelineConfig,
) -> Result<Evaluation, DetectError> {
    let mut c = Confusion::default();
    let mut total = 0;
    for (predicted, truth) in outcomes {
        total += 1;
        match (predicted, truth) {
            (Ok(Label::Harmonic), Label::Harmonic) => c.true_positive += 1,
            (Ok(Label::Harmonic), Label::NonHarmonic) => c.false_positive += 1,
            (Ok(Label::NonHarmonic), Label::NonHarmonic) => c.true_negative += 1,
            (Ok(Label::NonHarmonic), Label::Harmonic) => c.false_negative += 1,
            (Err(DetectError::Undecidable { .. }), _) => c.undecidable += 1,
            (Err(e), _) => return Err(e),
        }
    }
    if total == 0 {
        return Err(DetectError::EmptyDataset);
    }
    let correct = c.true_positive + c.true_negative;
    Ok(Evaluation {
        accuracy: correct as f64 / total as f64,
        total,
        correct,
        confusion: c,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::Interval;

    fn tone(period: usize, len: usize) -> Signal {
        Signal::new(
            (0..len)
                .map(|i| (std::f64::consts::TAU * i as f64 / period as f64).sin())
                .collect(),
            44100.0,
        )
        .unwrap()
    }

    #[test]
    fn significance_examples() {
        assert_eq!(significance(&PersistenceDiagram::new(vec![]), 1.0), 0.0);
        let sq = PersistenceDiagram::new(vec![
            Interval::new(0, 0.0, f64::INFINITY),
            Interval::new(1, 1.0, 2f64.sqrt()),
        ]);
        let v = significance(&sq, 2f64.sqrt());
        assert!((v - (2f64.sqrt() - 1.0) / 2f64.sqrt()).abs() < 1e-12);
        let two = PersistenceDiagram::new(vec![Interval::new(1, 0.0, 0.1), Interval::new(1, 0.25, 0.75)]);
        assert_eq!(significance(&two, 1.0), 0.5);
    }

    #[test]
    fn sinusoid_is_harmonic() {
        let r = detect(&tone(100, 4000), &PipelineConfig::default()).unwrap();
        assert_eq!(r.label, Label::Harmonic);
        assert_eq!(r.delay_j, 25);
        assert_eq!(r.subsample_size, 100);
        assert!(r.significance > 0.5);
    }

    #[test]
    fn constant_signal_is_undecidable() {
        let s = Signal::new(vec![0.3; 500], 1000.0).unwrap();
        let e = detect(&s, &PipelineConfig::default()).unwrap_err();
        assert_eq!(e.kind(), "Undecidable");
    }

    #[test]
    fn scale_does_not_change_decision() {
        let s = tone(80, 3000);
        let cfg = PipelineConfig::default();
        let a = detect(&s, &cfg).unwrap();
        let b = detect(&s.scaled(7.5).unwrap(), &cfg).unwrap();
        assert_eq!(a.label, b.label);
        assert!((a.significance - b.significance).abs() < 1e-9);
    }

    #[test]
    fn evaluation_counts() {
        let cfg = PipelineConfig::default();
        let e = evaluate(&[(tone(100, 2000), Label::Harmonic)], &cfg).unwrap();
        assert_eq!(e.accuracy, 1.0);
        let e = evaluate(&[(tone(100, 2000), Label::NonHarmonic)], &cfg).unwrap();
        assert_eq!(e.accuracy, 0.0);
        assert_eq!(e.confusion.false_positive, 1);
        assert_eq!(evaluate(&[], &cfg), Err(DetectError::EmptyDataset));
    }

    #[test]
    fn bad_threshold_rejected() {
        let cfg = PipelineConfig {
            threshold: f64::NAN,
            ..PipelineConfig::default()
        };
        assert_eq!(detect(&tone(100, 2000), &cfg).unwrap_err().kind(), "InvalidConfig");
    }

    #[test]
    fn labels_parse() {
        assert_eq!("wheeze".parse::<Label>(), Ok(Label::Harmonic));
        assert_eq!("non-harmonic".parse::<Label>(), Ok(Label::NonHarmonic));
        assert!("maybe".parse::<Label>().is_err());
    }
}
