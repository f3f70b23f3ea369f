//! Piecewise-sinusoid signal model: synthesis, and fitting from zero
//! crossings and positive peaks.
//!
//! The model is
//!
//! ```text
//! w(t) = A(t) · sin(2π t / T_i + φ_i)    for t_{i-1} <= t < t_i
//! ```
//!
//! with a positive envelope `A(t)` and phases chained so that `w` is
//! continuous: `φ_i = φ_{i-1} + 2π t_{i-1} (1/T_{i-1} - 1/T_i)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cloud::PointCloud;
use crate::metrics::hausdorff;
use crate::signal::{Signal, SignalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("model needs at least one segment")]
    NoSegments,
    #[error("segment {index}: period must be positive and finite")]
    InvalidPeriod { index: usize },
    #[error("segment {index}: bounds must be finite with t0 < t1")]
    InvalidBounds { index: usize },
    #[error("segment {index} does not start where segment {} ends", index - 1)]
    NonContiguous { index: usize },
    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),
    #[error("segment {index}: phase {found} breaks continuity (expected {expected} mod 2π)")]
    PhaseConditionViolated { index: usize, expected: f64, found: f64 },
    #[error("signal has fewer than two zero crossings")]
    NoZeroCrossings,
    #[error("signal has fewer than two positive local maxima")]
    InsufficientPeaks,
    #[error("synthesized signal is invalid: {0}")]
    Signal(String),
}

impl ModelError {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelError::NoSegments => "NoSegments",
            ModelError::InvalidPeriod { .. } => "InvalidPeriod",
            ModelError::InvalidBounds { .. } => "InvalidBounds",
            ModelError::NonContiguous { .. } => "NonContiguous",
            ModelError::InvalidEnvelope(_) => "InvalidEnvelope",
            ModelError::PhaseConditionViolated { .. } => "PhaseConditionViolated",
            ModelError::NoZeroCrossings => "NoZeroCrossings",
            ModelError::InsufficientPeaks => "InsufficientPeaks",
            ModelError::Signal(_) => "InvalidSignal",
        }
    }
}

impl From<SignalError> for ModelError {
    fn from(e: SignalError) -> Self {
        ModelError::Signal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub period: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub t: f64,
    pub a: f64,
}

/// Breakpoints joined by a monotone (Fritsch–Carlson) cubic, held constant
/// outside the breakpoint range.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    points: Vec<EnvelopePoint>,
    slopes: Vec<f64>,
}

impl Envelope {
    pub fn new(points: Vec<EnvelopePoint>) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::InvalidEnvelope("no breakpoints".into()));
        }
        for (k, p) in points.iter().enumerate() {
            if !(p.t.is_finite() && p.a.is_finite() && p.a > 0.0) {
                return Err(ModelError::InvalidEnvelope(format!(
                    "breakpoint {k} must have finite time and positive amplitude"
                )));
            }
            if k > 0 && p.t <= points[k - 1].t {
                return Err(ModelError::InvalidEnvelope(format!(
                    "breakpoint times must increase (at {k})"
                )));
            }
        }
        let slopes = pchip_slopes(&points);
        Ok(Envelope { points, slopes })
    }

    pub fn constant(a: f64) -> Result<Self, ModelError> {
        Envelope::new(vec![EnvelopePoint { t: 0.0, a }])
    }

    pub fn points(&self) -> &[EnvelopePoint] {
        &self.points
    }

    pub fn max(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.a))
    }

    pub fn at(&self, t: f64) -> f64 {
        let p = &self.points;
        let last = p.len() - 1;
        if t <= p[0].t {
            return p[0].a;
        }
        if t >= p[last].t {
            return p[last].a;
        }
        let k = p.partition_point(|q| q.t <= t) - 1;
        let h = p[k + 1].t - p[k].t;
        let s = (t - p[k].t) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * p[k].a + h10 * h * self.slopes[k] + h01 * p[k + 1].a + h11 * h * self.slopes[k + 1]
    }
}

fn pchip_slopes(p: &[EnvelopePoint]) -> Vec<f64> {
    let n = p.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = p.windows(2).map(|w| w[1].t - w[0].t).collect();
    let delta: Vec<f64> = p.windows(2).zip(&h).map(|(w, h)| (w[1].a - w[0].a) / h).collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 <= 0.0 {
            continue;
        }
        let w1 = 2.0 * h[k] + h[k - 1];
        let w2 = h[k] + 2.0 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
    }
    m
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    segments: Vec<Segment>,
    envelope: Vec<EnvelopePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct PiecewiseSinusoidModel {
    segments: Vec<Segment>,
    envelope: Envelope,
}

impl TryFrom<ModelRepr> for PiecewiseSinusoidModel {
    type Error = ModelError;

    fn try_from(r: ModelRepr) -> Result<Self, ModelError> {
        PiecewiseSinusoidModel::new(r.segments, Envelope::new(r.envelope)?)
    }
}

impl From<PiecewiseSinusoidModel> for ModelRepr {
    fn from(m: PiecewiseSinusoidModel) -> Self {
        ModelRepr {
            segments: m.segments,
            envelope: m.envelope.points,
        }
    }
}

/// Phase of segment `i` implied by continuity with segment `i - 1`.
pub fn continuous_phase(prev: &Segment, boundary: f64, period: f64) -> f64 {
    prev.phase + TAU * boundary * (1.0 / prev.period - 1.0 / period)
}

fn wrap_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

impl PiecewiseSinusoidModel {
    pub fn new(segments: Vec<Segment>, envelope: Envelope) -> Result<Self, ModelError> {
        if segments.is_empty() {
            return Err(ModelError::NoSegments);
        }
        for (index, s) in segments.iter().enumerate() {
            if !(s.t0.is_finite() && s.t1.is_finite() && s.t0 < s.t1 && s.phase.is_finite()) {
                return Err(ModelError::InvalidBounds { index });
            }
            if !(s.period.is_finite() && s.period > 0.0) {
                return Err(ModelError::InvalidPeriod { index });
            }
            if index == 0 {
                continue;
            }
            let prev = &segments[index - 1];
            if prev.t1 != s.t0 {
                return Err(ModelError::NonContiguous { index });
            }
            let expected = continuous_phase(prev, s.t0, s.period);
            let tol = 1e-9 * (1.0 + expected.abs());
            if wrap_pi(s.phase - expected).abs() > tol {
                return Err(ModelError::PhaseConditionViolated {
                    index,
                    expected,
                    found: s.phase,
                });
            }
        }
        Ok(PiecewiseSinusoidModel { segments, envelope })
    }

    /// Builds segments over `[boundaries[0], boundaries[n])` with the given
    /// periods, the first phase `phase0`, and later phases from continuity.
    pub fn with_continuous_phases(
        boundaries: &[f64],
        periods: &[f64],
        phase0: f64,
        envelope: Envelope,
    ) -> Result<Self, ModelError> {
        if periods.is_empty() || boundaries.len() != periods.len() + 1 {
            return Err(ModelError::NoSegments);
        }
        let mut segments: Vec<Segment> = Vec::with_capacity(periods.len());
        for (i, &period) in periods.iter().enumerate() {
            let t0 = boundaries[i];
            let phase = match segments.last() {
                None => phase0,
                Some(prev) => continuous_phase(prev, t0, period),
            };
            segments.push(Segment {
                t0,
                t1: boundaries[i + 1],
                period,
                phase,
            });
        }
        PiecewiseSinusoidModel::new(segments, envelope)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn start(&self) -> f64 {
        self.segments[0].t0
    }

    pub fn end(&self) -> f64 {
        self.segments[self.segments.len() - 1].t1
    }

    /// Index of the segment containing `t`; the last segment also owns its
    /// right end, and times outside the domain clamp to the nearest segment.
    pub fn segment_index(&self, t: f64) -> usize {
        self.segments
            .partition_point(|s| s.t1 <= t)
            .min(self.segments.len() - 1)
    }

    /// The unit-amplitude sinusoid of the segment containing `t`.
    pub fn carrier(&self, t: f64) -> f64 {
        let s = &self.segments[self.segment_index(t)];
        (TAU * t / s.period + s.phase).sin()
    }

    pub fn value(&self, t: f64) -> f64 {
        self.envelope.at(t) * self.carrier(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::InvalidEnvelope(e.to_string()))
    }
}

/// Samples `w(i·T_s)` for every `i` with `i·T_s` in the model's domain.
pub fn synthesize(model: &PiecewiseSinusoidModel, sample_rate_hz: f64) -> Result<Signal, ModelError> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(SignalError::InvalidSampleRate(sample_rate_hz).into());
    }
    // the checks in `new` are re-run for models assembled from parts
    let model = PiecewiseSinusoidModel::new(model.segments.clone(), model.envelope.clone())?;
    let first = (model.start() * sample_rate_hz).ceil().max(0.0) as usize;
    let mut samples = Vec::new();
    let mut i = first;
    loop {
        let t = i as f64 / sample_rate_hz;
        if t >= model.end() {
            break;
        }
        if t >= model.start() {
            samples.push(model.value(t));
        }
        i += 1;
    }
    Ok(Signal::new(samples, sample_rate_hz)?)
}

/// The points `(t_j, s(t_j))` with `t_j` in seconds.
pub fn graph(s: &Signal) -> PointCloud {
    graph_of(s.samples(), s.sample_rate_hz())
}

/// The points `(j, s_j)`, time measured in samples.
pub fn graph_samples(s: &Signal) -> PointCloud {
    graph_of(s.samples(), 1.0)
}

pub fn graph_of(samples: &[f64], sample_rate_hz: f64) -> PointCloud {
    let coords = samples
        .iter()
        .enumerate()
        .flat_map(|(j, &x)| [j as f64 / sample_rate_hz, x])
        .collect();
    PointCloud::new(2, coords).expect("graph of finite samples")
}

/// Hausdorff distance between the sample-indexed graphs of `s` and of the
/// model sampled at the same rate, as a fraction of the peak-to-peak
/// amplitude of `s`.
pub fn graph_distance(s: &Signal, model: &PiecewiseSinusoidModel) -> Result<f64, ModelError> {
    let synth = synthesize(model, s.sample_rate_hz())?;
    let n = s.len().min(synth.len());
    let a = graph_of(&s.samples()[..n], 1.0);
    let b = graph_of(&synth.samples()[..n], 1.0);
    let d = hausdorff(&a, &b).expect("graphs are non-empty and planar");
    let p2p = s.peak_to_peak();
    Ok(if p2p > 0.0 { d / p2p } else { d })
}

/// A zero crossing at `t` seconds; `rising` when the signal goes from
/// negative to positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCrossing {
    pub t: f64,
    pub rising: bool,
}

/// Sign changes between consecutive samples, located by linear
/// interpolation. A run of exact zeros between opposite signs yields one
/// crossing at the first zero.
pub fn zero_crossings(s: &Signal) -> Vec<ZeroCrossing> {
    let x = s.samples();
    let rate = s.sample_rate_hz();
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    for (j, &v) in x.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if let Some(p) = prev {
            if (x[p] > 0.0) != (v > 0.0) {
                let pos = if j == p + 1 {
                    p as f64 + x[p] / (x[p] - v)
                } else {
                    (p + 1) as f64
                };
                out.push(ZeroCrossing {
                    t: pos / rate,
                    rising: v > 0.0,
                });
            }
        }
        prev = Some(j);
    }
    out
}

/// Merges bursts of crossings closer than `fraction` of the median gap.
/// A burst with an odd count is one real crossing (kept at the mean time,
/// with the direction of its first member); an even burst is a
/// round-trip excursion and is dropped.
pub fn debounce_crossings(c: &[ZeroCrossing], fraction: f64) -> Vec<ZeroCrossing> {
    if c.len() < 3 {
        return c.to_vec();
    }
    let mut gaps: Vec<f64> = c.windows(2).map(|w| w[1].t - w[0].t).collect();
    gaps.sort_by(f64::total_cmp);
    let limit = fraction * gaps[gaps.len() / 2];
    let mut out = Vec::with_capacity(c.len());
    let mut start = 0;
    for end in 1..=c.len() {
        if end < c.len() && c[end].t - c[end - 1].t < limit {
            continue;
        }
        let burst = &c[start..end];
        if burst.len() % 2 == 1 {
            let mean = burst.iter().map(|z| z.t).sum::<f64>() / burst.len() as f64;
            out.push(ZeroCrossing {
                t: mean,
                rising: burst[0].rising,
            });
        }
        start = end;
    }
    out
}

/// Change-point detector settings for the zero-crossing gap sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    /// Gaps averaged on each side of a candidate split.
    pub window: usize,
    /// Split when `|mean_left - mean_right| > threshold · mean_left`.
    pub threshold: f64,
    /// Crossing bursts tighter than this fraction of the median gap are
    /// merged before anything else.
    pub debounce: f64,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        SegmentConfig {
            window: 8,
            threshold: 0.2,
            debounce: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// Mean gap between successive zero crossings, seconds.
    pub mean_half_period: f64,
    /// `1 / (2 · mean_half_period)`, Hz.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentEstimate {
    pub intervals: Vec<FrequencyInterval>,
}

struct CrossingAnalysis {
    crossings: Vec<ZeroCrossing>,
    /// Crossing index at which each interval starts, plus the final index.
    splits: Vec<usize>,
    estimate: SegmentEstimate,
}

/// Splits the signal into intervals of roughly constant frequency using the
/// gaps between successive zero crossings.
pub fn estimate_segments(s: &Signal) -> Result<SegmentEstimate, ModelError> {
    estimate_segments_with(s, &SegmentConfig::default())
}

pub fn estimate_segments_with(s: &Signal, cfg: &SegmentConfig) -> Result<SegmentEstimate, ModelError> {
    analyze_crossings(s, cfg).map(|a| a.estimate)
}

fn analyze_crossings(s: &Signal, cfg: &SegmentConfig) -> Result<CrossingAnalysis, ModelError> {
    let crossings = debounce_crossings(&zero_crossings(s), cfg.debounce);
    if crossings.len() < 2 {
        return Err(ModelError::NoZeroCrossings);
    }
    let gaps: Vec<f64> = crossings.windows(2).map(|w| w[1].t - w[0].t).collect();
    let g = gaps.len();
    let w = cfg.window.max(1);

    // score every admissible split and keep the peak of each run above the
    // threshold
    let mut splits = vec![0usize];
    if g >= 2 * w {
        let mean = |r: std::ops::Range<usize>| gaps[r.clone()].iter().sum::<f64>() / r.len() as f64;
        let mut run_best: Option<(usize, f64)> = None;
        for i in w..=g - w {
            let left = mean(i - w..i);
            let right = mean(i..i + w);
            let score = (left - right).abs() / left;
            if score > cfg.threshold {
                if run_best.is_none_or(|(_, b)| score > b) {
                    run_best = Some((i, score));
                }
            } else if let Some((at, _)) = run_best.take() {
                push_split(&mut splits, at, w);
            }
        }
        if let Some((at, _)) = run_best {
            push_split(&mut splits, at, w);
        }
    }
    splits.push(g);

    let n = splits.len() - 1;
    let mut intervals = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (splits[k], splits[k + 1]);
        // gaps touching an interior split may straddle the frequency change
        let lo = if k > 0 && b - a > 2 { a + 1 } else { a };
        let hi = if k + 1 < n && b - lo > 2 { b - 1 } else { b };
        let mean_half_period = gaps[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        intervals.push(FrequencyInterval {
            t_start: if k == 0 { 0.0 } else { crossings[a].t },
            t_end: if k + 1 == n { s.duration() } else { crossings[b].t },
            mean_half_period,
            frequency: 1.0 / (2.0 * mean_half_period),
        });
    }
    Ok(CrossingAnalysis {
        crossings,
        splits,
        estimate: SegmentEstimate { intervals },
    })
}

fn push_split(splits: &mut Vec<usize>, at: usize, window: usize) {
    if at >= splits[splits.len() - 1] + window {
        splits.push(at);
    }
}

/// Index of each local maximum with positive amplitude. A maximum needs
/// strictly smaller neighbours; a flat top reports its midpoint (which may
/// fall halfway between samples).
fn positive_peaks(x: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < x.len() {
        if x[i] > x[i - 1] {
            let mut j = i;
            while j + 1 < x.len() && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < x.len() && x[j + 1] < x[i] && x[i] > 0.0 {
                out.push(((i + j) as f64 / 2.0, x[i]));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Envelope breakpoints at the positive local maxima of the signal.
pub fn fit_envelope(s: &Signal) -> Result<Vec<EnvelopePoint>, ModelError> {
    let rate = s.sample_rate_hz();
    let peaks: Vec<EnvelopePoint> = positive_peaks(s.samples())
        .into_iter()
        .map(|(i, a)| EnvelopePoint { t: i / rate, a })
        .collect();
    if peaks.len() < 2 {
        return Err(ModelError::InsufficientPeaks);
    }
    Ok(peaks)
}

/// The tallest maximum in each positive half-cycle, that is after each
/// rising crossing (and before the first crossing when it is falling).
fn cycle_peaks(s: &Signal, crossings: &[ZeroCrossing]) -> Vec<EnvelopePoint> {
    let rate = s.sample_rate_hz();
    let mut lobes: Vec<(f64, f64)> = Vec::new();
    if crossings.first().is_some_and(|c| !c.rising) {
        lobes.push((f64::NEG_INFINITY, crossings[0].t * rate));
    }
    for (k, c) in crossings.iter().enumerate() {
        if c.rising {
            let end = crossings.get(k + 1).map_or(f64::INFINITY, |n| n.t * rate);
            lobes.push((c.t * rate, end));
        }
    }
    let peaks = positive_peaks(s.samples());
    let mut out = Vec::with_capacity(lobes.len());
    let mut k = 0;
    for (lo, hi) in lobes {
        while k < peaks.len() && peaks[k].0 < lo {
            k += 1;
        }
        let mut best: Option<(f64, f64)> = None;
        while k < peaks.len() && peaks[k].0 < hi {
            if best.is_none_or(|b| peaks[k].1 > b.1) {
                best = Some(peaks[k]);
            }
            k += 1;
        }
        if let Some((i, a)) = best {
            out.push(EnvelopePoint { t: i / rate, a });
        }
    }
    out
}

/// One breakpoint per complete positive lobe of the fitted carrier: the
/// least-squares amplitude of the samples against the carrier, placed at
/// the carrier-weighted mean time of the lobe.
fn lobe_amplitudes(s: &Signal, model: &PiecewiseSinusoidModel) -> Vec<EnvelopePoint> {
    let rate = s.sample_rate_hz();
    let x = s.samples();
    let mut out = Vec::new();
    let mut i = 0;
    while i < x.len() {
        if model.carrier(i as f64 / rate) <= 0.0 {
            i += 1;
            continue;
        }
        let start = i;
        let (mut xc, mut cc, mut tc) = (0.0, 0.0, 0.0);
        while i < x.len() {
            let t = i as f64 / rate;
            let c = model.carrier(t);
            if c <= 0.0 {
                break;
            }
            xc += x[i] * c;
            cc += c * c;
            tc += t * c * c;
            i += 1;
        }
        let complete = start > 0 && i < x.len();
        if complete && cc > 0.0 && xc > 0.0 {
            out.push(EnvelopePoint { t: tc / cc, a: xc / cc });
        }
    }
    out
}

/// Breakpoints at `0` and at the end of the signal, continuing from the
/// outermost peak with the slope that best explains the samples beyond it
/// (least squares against the fitted carrier). Values are floored at half
/// the outermost peak.
fn edge_breakpoints(s: &Signal, model: &PiecewiseSinusoidModel, peaks: &[EnvelopePoint]) -> Vec<EnvelopePoint> {
    let rate = s.sample_rate_hz();
    let x = s.samples();
    let slope_beyond = |anchor: EnvelopePoint, range: std::ops::Range<usize>| {
        let (mut num, mut den) = (0.0, 0.0);
        for i in range {
            let t = i as f64 / rate;
            let c = model.carrier(t);
            let dt = t - anchor.t;
            num += (x[i] - anchor.a * c) * dt * c;
            den += dt * dt * c * c;
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    };
    let mut out = peaks.to_vec();
    let (first, last) = (peaks[0], peaks[peaks.len() - 1]);
    let end = s.duration();
    if last.t < end {
        let from = (last.t * rate).floor() as usize + 1;
        let slope = slope_beyond(last, from..x.len());
        let a = (last.a + slope * (end - last.t)).max(0.5 * last.a);
        out.push(EnvelopePoint { t: end, a });
    }
    if first.t > 0.0 {
        let to = (first.t * rate).ceil() as usize;
        let slope = slope_beyond(first, 0..to);
        let a = (first.a - slope * first.t).max(0.5 * first.a);
        out.insert(0, EnvelopePoint { t: 0.0, a });
    }
    out
}

/// Number of grid steps for the initial phase search.
const PHASE_GRID: usize = 256;

/// Fits a piecewise-sinusoid model: interval frequencies from zero-crossing
/// gaps, an envelope through the per-cycle positive peaks, the first phase
/// by grid search, and later phases from the continuity condition.
///
/// Each interior boundary is placed where the phase line of the previous
/// segment meets the phase measured from the next segment's own crossings,
/// choosing the solution nearest the crossing that separates them.
pub fn fit_model(s: &Signal) -> Result<PiecewiseSinusoidModel, ModelError> {
    fit_model_with(s, &SegmentConfig::default())
}

pub fn fit_model_with(s: &Signal, cfg: &SegmentConfig) -> Result<PiecewiseSinusoidModel, ModelError> {
    let analysis = analyze_crossings(s, cfg)?;
    let all_peaks = fit_envelope(s)?;
    let mut peaks = cycle_peaks(s, &analysis.crossings);
    if peaks.len() < 2 {
        peaks = all_peaks;
    }
    let envelope = Envelope::new(peaks.clone())?;
    let intervals = &analysis.estimate.intervals;
    let periods: Vec<f64> = intervals.iter().map(|iv| 1.0 / iv.frequency).collect();

    let rate = s.sample_rate_hz();
    let x = s.samples();
    // stop the first-interval fit one crossing short of the split, where
    // the next frequency may already have started
    let first_end = if intervals.len() > 1 {
        analysis.crossings[analysis.splits[1] - 1].t
    } else {
        s.duration()
    };
    let first_samples: Vec<(f64, f64)> = (0..x.len())
        .map(|i| (i as f64 / rate, x[i]))
        .take_while(|&(t, _)| t < first_end)
        .collect();
    let env_first: Vec<f64> = first_samples.iter().map(|&(t, _)| envelope.at(t)).collect();
    let phase0 = (0..PHASE_GRID)
        .map(|k| TAU * k as f64 / PHASE_GRID as f64)
        .map(|phi| {
            let err: f64 = first_samples
                .iter()
                .zip(&env_first)
                .map(|(&(t, v), a)| {
                    let r = v - a * (TAU * t / periods[0] + phi).sin();
                    r * r
                })
                .sum();
            (phi, err)
        })
        .fold((0.0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
        .0;

    let mut boundaries = vec![0.0];
    let mut phase = phase0;
    for k in 1..intervals.len() {
        let (prev_period, period) = (periods[k - 1], periods[k]);
        let snapped = intervals[k].t_start;
        let rate_diff = 1.0 / prev_period - 1.0 / period;
        let (a, b) = (analysis.splits[k], analysis.splits[k + 1]);
        // crossings next to either split may belong to the neighbouring
        // segment
        let lo = (a + 2).min(b);
        let hi = (b - 1).max(lo);
        let next_phase = crossing_phase(&analysis.crossings[lo..hi], period);
        let lower = boundaries[k - 1];
        let upper = intervals[k].t_end;
        let boundary = match next_phase {
            Some(psi) if (rate_diff * (upper - lower)).abs() > 1e-9 => {
                let base = (psi - phase) / (TAU * rate_diff);
                let spacing = 1.0 / rate_diff.abs();
                let m = ((snapped - base) / spacing).round();
                let t = base + m * spacing;
                if t > lower && t < upper {
                    t
                } else {
                    snapped
                }
            }
            _ => snapped,
        };
        phase += TAU * boundary * rate_diff;
        boundaries.push(boundary);
    }
    boundaries.push(s.duration());
    let carrier = PiecewiseSinusoidModel::with_continuous_phases(&boundaries, &periods, phase0, envelope)?;
    let lobes = lobe_amplitudes(s, &carrier);
    let interior = if lobes.len() >= 2 { lobes } else { peaks };
    let envelope = Envelope::new(edge_breakpoints(s, &carrier, &interior))?;
    PiecewiseSinusoidModel::with_continuous_phases(&boundaries, &periods, phase0, envelope)
}

/// Circular mean of the phase offsets implied by each crossing:
/// `2π t / T + ψ` is `0` at rising and `π` at falling crossings.
fn crossing_phase(crossings: &[ZeroCrossing], period: f64) -> Option<f64> {
    if crossings.is_empty() {
        return None;
    }
    let (mut c, mut s) = (0.0, 0.0);
    for z in crossings {
        let offset = if z.rising { 0.0 } else { PI };
        let psi = offset - TAU * z.t / period;
        c += psi.cos();
        s += psi.sin();
    }
    (c.hypot(s) > 1e-9).then(|| s.atan2(c))
}
