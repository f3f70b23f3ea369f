//! Uniformly sampled signals: WAV and CSV loading, amplitude normalization
//! and time windows.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed WAV header: {0}")]
    MalformedHeader(String),
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("audio stream contains no samples")]
    EmptyAudio,
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),
    #[error("a signal needs at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("invalid window [{start}, {end}) for a signal of {duration} s")]
    InvalidRange { start: f64, end: f64, duration: f64 },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("no `# sample_rate=` header and no fallback rate given")]
    MissingSampleRate,
}

impl SignalError {
    pub fn kind(&self) -> &'static str {
        match self {
            SignalError::FileNotFound(_) => "FileNotFound",
            SignalError::Io { .. } => "Io",
            SignalError::MalformedHeader(_) => "MalformedHeader",
            SignalError::UnsupportedEncoding(_) => "UnsupportedEncoding",
            SignalError::EmptyAudio => "EmptyAudio",
            SignalError::NonFinite { .. } => "NonFinite",
            SignalError::InvalidSampleRate(_) => "InvalidSampleRate",
            SignalError::TooShort(_) => "TooShort",
            SignalError::InvalidRange { .. } => "InvalidRange",
            SignalError::Csv { .. } => "MalformedCsv",
            SignalError::MissingSampleRate => "MissingSampleRate",
        }
    }

    fn from_io(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            SignalError::FileNotFound(path.to_path_buf())
        } else {
            SignalError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

/// A real-valued series sampled at a fixed rate. Sample `i` sits at time
/// `i / sample_rate_hz` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self, SignalError> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(SignalError::InvalidSampleRate(sample_rate_hz));
        }
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        if samples.len() < 2 {
            return Err(SignalError::TooShort(samples.len()));
        }
        Ok(Signal {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn sample_period(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a valid signal has at least two samples.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Length in seconds, `len / sample_rate_hz`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn time_of(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate_hz
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn peak_to_peak(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        hi - lo
    }

    /// Multiplies every sample by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Signal, SignalError> {
        Signal::new(self.samples.iter().map(|x| x * factor).collect(), self.sample_rate_hz)
    }

    /// Divides by the peak absolute amplitude so the result spans at most
    /// [-1, 1] with a sample at ±1. An all-zero signal is returned unchanged.
    pub fn normalize(&self) -> Signal {
        let peak = self.peak();
        if peak == 0.0 {
            return self.clone();
        }
        Signal {
            samples: self.samples.iter().map(|x| x / peak).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Samples whose time `i·T_s` lies in `[start_s, end_s)`. The result
    /// restarts at time zero and keeps the sample rate.
    ///
    /// `end_s` may overshoot the duration by less than one sample period (the
    /// window is clamped to the last sample), so that windows of windows
    /// compose.
    pub fn window(&self, start_s: f64, end_s: f64) -> Result<Signal, SignalError> {
        let duration = self.duration();
        let invalid = || SignalError::InvalidRange {
            start: start_s,
            end: end_s,
            duration,
        };
        if !(start_s.is_finite() && end_s.is_finite())
            || start_s < 0.0
            || start_s >= end_s
            || start_s >= duration
            || end_s >= duration + self.sample_period()
        {
            return Err(invalid());
        }
        let first = self.first_index_at_or_after(start_s);
        let last = self.first_index_at_or_after(end_s).min(self.samples.len());
        if last <= first || last - first < 2 {
            return Err(invalid());
        }
        Ok(Signal {
            samples: self.samples[first..last].to_vec(),
            sample_rate_hz: self.sample_rate_hz,
        })
    }

    /// Smallest index `i` with `i / rate >= t`.
    fn first_index_at_or_after(&self, t: f64) -> usize {
        let rate = self.sample_rate_hz;
        let mut i = (t * rate).ceil().max(0.0) as usize;
        while (i as f64) / rate < t {
            i += 1;
        }
        while i > 0 && ((i - 1) as f64) / rate >= t {
            i -= 1;
        }
        i
    }

    /// Parses the CSV signal format: one sample per line, an optional
    /// `# sample_rate=<hz>` line, other `#` lines ignored.
    pub fn from_csv_str(text: &str, fallback_rate: Option<f64>) -> Result<Signal, SignalError> {
        let mut rate = None;
        let mut samples = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("sample_rate=") {
                    let parsed = value.trim().parse::<f64>().map_err(|e| SignalError::Csv {
                        line: n + 1,
                        message: format!("bad sample rate: {e}"),
                    })?;
                    rate = Some(parsed);
                }
                continue;
            }
            let value = line.parse::<f64>().map_err(|e| SignalError::Csv {
                line: n + 1,
                message: format!("bad sample {line:?}: {e}"),
            })?;
            samples.push(value);
        }
        let rate = rate.or(fallback_rate).ok_or(SignalError::MissingSampleRate)?;
        Signal::new(samples, rate)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 20);
        let _ = writeln!(out, "# sample_rate={}", self.sample_rate_hz);
        for x in &self.samples {
            let _ = writeln!(out, "{x}");
        }
        out
    }

    pub fn read_csv(path: impl AsRef<Path>, fallback_rate: Option<f64>) -> Result<Signal, SignalError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| SignalError::from_io(path, e))?;
        Signal::from_csv_str(&text, fallback_rate)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), SignalError> {
        let path = path.as_ref();
        fs::write(path, self.to_csv_string()).map_err(|e| SignalError::from_io(path, e))
    }

    /// Writes 32-bit float mono PCM.
    pub fn write_wav(&self, path: impl AsRef<Path>) -> Result<(), SignalError> {
        let path = path.as_ref();
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: self.sample_rate_hz.round() as u32,
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
        };
        let map = |e: hound::Error| wav_error(path, e);
        let mut writer = hound::WavWriter::create(path, spec).map_err(map)?;
        for &x in &self.samples {
            writer.write_sample(x as f32).map_err(map)?;
        }
        writer.finalize().map_err(map)
    }
}

/// Loads an uncompressed PCM WAV file (8/16/24/32-bit integer or 32-bit
/// float). Multi-channel audio is downmixed by averaging the channels;
/// integer samples are scaled by `2^(bits-1)` into `[-1, 1)`.
pub fn load_wav(path: impl AsRef<Path>) -> Result<Signal, SignalError> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| wav_error(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(SignalError::MalformedHeader("zero channels".into()));
    }
    let interleaved: Vec<f64> = match spec.sample_format {
        hound::SampleFormat::Float => {
            if spec.bits_per_sample != 32 {
                return Err(SignalError::UnsupportedEncoding(format!(
                    "{}-bit float",
                    spec.bits_per_sample
                )));
            }
            reader
                .into_samples::<f32>()
                .map(|s| s.map(f64::from))
                .collect::<Result<_, _>>()
                .map_err(|e| wav_error(path, e))?
        }
        hound::SampleFormat::Int => {
            let bits = spec.bits_per_sample;
            if !matches!(bits, 8 | 16 | 24 | 32) {
                return Err(SignalError::UnsupportedEncoding(format!("{bits}-bit integer")));
            }
            let scale = (1_u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| f64::from(v) / scale))
                .collect::<Result<_, _>>()
                .map_err(|e| wav_error(path, e))?
        }
    };
    if interleaved.is_empty() {
        return Err(SignalError::EmptyAudio);
    }
    let samples: Vec<f64> = interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    if samples.is_empty() {
        return Err(SignalError::EmptyAudio);
    }
    Signal::new(samples, f64::from(spec.sample_rate))
}

/// Loads `.wav` files with [`load_wav`] and anything else as CSV.
pub fn load_signal(path: impl AsRef<Path>, fallback_rate: Option<f64>) -> Result<Signal, SignalError> {
    let path = path.as_ref();
    let is_wav = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
    if is_wav {
        load_wav(path)
    } else {
        Signal::read_csv(path, fallback_rate)
    }
}

fn wav_error(path: &Path, err: hound::Error) -> SignalError {
    match err {
        hound::Error::IoError(e) => SignalError::from_io(path, e),
        hound::Error::FormatError(msg) => SignalError::MalformedHeader(msg.to_string()),
        hound::Error::Unsupported => SignalError::UnsupportedEncoding("compressed or non-PCM audio".into()),
        hound::Error::TooWide => SignalError::UnsupportedEncoding("sample too wide".into()),
        hound::Error::InvalidSampleFormat => SignalError::UnsupportedEncoding("invalid sample format".into()),
        other => SignalError::MalformedHeader(other.to_string()),
    }
}
