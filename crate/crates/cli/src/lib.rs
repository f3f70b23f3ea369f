//! Command line front end. [`run`] parses arguments, dispatches to a
//! subcommand and maps the outcome to an exit code:
//!
//! * `0` on success,
//! * `1` on a domain error, with `{"kind", "message"}` JSON on stderr,
//! * `2` on a usage error.

pub mod render;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use topoperiod::detector::{evaluate_outcomes, DetectionReport};
use topoperiod::embedding::critical_points;
use topoperiod::synth::graph_distance;
use topoperiod::{
    acl, bottleneck, delay_embed, detect, fit_model, hausdorff, persistent_homology, rips_filtration, rips_persistence,
    select_delay, subsample, synthesize, AclCurve, DelayStrategy, DetectError, Label, MaxEps, PersistenceDiagram,
    PiecewiseSinusoidModel, PipelineConfig, PointCloud, Signal, SubsampleMethod,
};

pub use render::{render_svg, Artifact, RenderError};

/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "TOPOPERIOD_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] topoperiod::Error),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("{}:{line}: {message}", path.display())]
    InvalidManifest {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.kind(),
            CliError::Render(e) => e.kind(),
            CliError::FileNotFound(_) => "FileNotFound",
            CliError::Io { .. } => "Io",
            CliError::InvalidConfig(_) => "InvalidConfig",
            CliError::InvalidManifest { .. } => "InvalidManifest",
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "kind": self.kind(), "message": self.to_string() }).to_string()
    }
}

fn domain<E: Into<topoperiod::Error>>(e: E) -> CliError {
    CliError::Domain(e.into())
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "topoperiod",
    version,
    about = "Harmonic structure detection via persistent homology of delay embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Autocorrelation curve of a normalized signal, with candidate delays.
    Acl(AclArgs),
    /// Delay embedding of a normalized signal, as CSV.
    Embed(EmbedArgs),
    /// Subsample a point cloud CSV.
    Subsample(SubsampleArgs),
    /// Rips persistence diagram of a point cloud CSV.
    Persist(PersistArgs),
    /// Hausdorff or bottleneck distance.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Sample a piecewise sinusoid model.
    Synth(SynthArgs),
    /// Fit a piecewise sinusoid model to a signal.
    Fit(FitArgs),
    /// Run the full pipeline on one signal.
    Detect(DetectArgs),
    /// Score the pipeline on a labelled manifest.
    Eval(EvalArgs),
    /// Render a cloud CSV or diagram JSON as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Window {
    start: f64,
    end: f64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected start:end in seconds")?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Window {
            start: parse(a)?,
            end: parse(b)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Delay {
    Auto,
    Fixed(usize),
}

impl FromStr for Delay {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Delay::Auto);
        }
        match s.parse::<usize>() {
            Ok(j) if j > 0 => Ok(Delay::Fixed(j)),
            _ => Err(format!("expected auto or a positive sample count, got {s:?}")),
        }
    }
}

#[derive(Debug, Args)]
struct SignalInput {
    /// WAV file, or CSV with one sample per line.
    input: PathBuf,
    /// Keep only `start:end` seconds.
    #[arg(long)]
    window: Option<Window>,
    /// Sample rate for CSV input without a `# sample_rate=` header.
    #[arg(long)]
    rate: Option<f64>,
}

impl SignalInput {
    fn load(&self) -> Result<Signal> {
        let s = topoperiod::load_signal(&self.input, self.rate).map_err(domain)?;
        match self.window {
            Some(w) => s.window(w.start, w.end).map_err(domain),
            None => Ok(s),
        }
    }

    fn echo(&self) -> Value {
        json!({ "input": self.input.display().to_string(), "window": self.window })
    }
}

#[derive(Debug, Args)]
struct AclArgs {
    #[command(flatten)]
    signal: SignalInput,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[command(flatten)]
    signal: SignalInput,
    /// `auto` or a delay in samples.
    #[arg(long, default_value = "auto")]
    delay: Delay,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value = "first-zero")]
    strategy: DelayStrategy,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG scatter plot.
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SubsampleArgs {
    cloud: PathBuf,
    #[arg(long, default_value = "random")]
    method: SubsampleMethod,
    #[arg(long, default_value_t = topoperiod::subsample::DEFAULT_SUBSAMPLE_SIZE)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PersistArgs {
    cloud: PathBuf,
    /// Largest simplex dimension; homology is reported below it.
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Largest edge length; defaults to the cloud diameter.
    #[arg(long)]
    max_eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the barcode as SVG.
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DistCommand {
    /// Hausdorff distance between two point cloud CSVs.
    Hausdorff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bottleneck distance between two diagram JSONs in one dimension.
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SynthArgs {
    model: PathBuf,
    #[arg(long, default_value_t = 44100.0)]
    rate: f64,
    /// `.wav` for 32-bit float audio, anything else for CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    signal: SignalInput,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// JSON file with any of the pipeline settings below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    strategy: Option<DelayStrategy>,
    #[arg(long)]
    method: Option<SubsampleMethod>,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    signal: SignalInput,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the intermediate artifacts (acl.json, embedding.csv,
    /// subsample.csv, diagram.json) into this directory.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
    /// Also write the barcode as SVG.
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// CSV with `path,label` per line; paths are relative to the manifest.
    manifest: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Sample rate for CSV signals without a header.
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Point cloud CSV, or diagram JSON (`.json`).
    artifact: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the command line with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            1
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Acl(a) => cmd_acl(a, stdout),
        Command::Embed(a) => cmd_embed(a, stdout),
        Command::Subsample(a) => cmd_subsample(a, stdout),
        Command::Persist(a) => cmd_persist(a, stdout),
        Command::Dist(a) => cmd_dist(a, stdout),
        Command::Synth(a) => cmd_synth(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Detect(a) => cmd_detect(a, stdout),
        Command::Eval(a) => cmd_eval(a, stdout),
        Command::Render(a) => cmd_render(a, stdout),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            CliError::FileNotFound(path.to_path_buf())
        } else {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `text` to `out` or, without a path, to stdout.
fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn read_cloud(path: &Path) -> Result<PointCloud> {
    PointCloud::from_csv_str(&read_text(path)?).map_err(domain)
}

fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    PersistenceDiagram::from_json(&read_text(path)?).map_err(domain)
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::InvalidConfig(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

/// Defaults, then the seed from the environment, then the config file, then
/// explicit flags.
fn pipeline_config(a: &PipelineArgs) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(seed) = env_seed()? {
        cfg.seed = seed;
    }
    if let Some(path) = &a.config {
        let mut base = serde_json::to_value(cfg).expect("config serializes");
        let file: Value = serde_json::from_str(&read_text(path)?)
            .map_err(|e| CliError::InvalidConfig(format!("{}: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(CliError::InvalidConfig(format!(
                "{}: expected a JSON object",
                path.display()
            )));
        };
        let base_map = base.as_object_mut().expect("config is an object");
        for (k, v) in file {
            base_map.insert(k, v);
        }
        cfg = serde_json::from_value(base).map_err(|e| CliError::InvalidConfig(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = a.threshold {
        cfg.threshold = v;
    }
    if let Some(v) = a.n {
        cfg.n = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.strategy {
        cfg.strategy = v;
    }
    if let Some(v) = a.method {
        cfg.method = v;
    }
    if let Some(v) = a.dim {
        cfg.dim = v;
    }
    Ok(cfg)
}

fn acl_document(signal: &SignalInput, s: &Signal) -> (AclCurve, Value) {
    let curve = acl(&s.normalize());
    let pick = |st| select_delay(&curve, st).ok();
    let mut doc = signal.echo();
    let fields = doc.as_object_mut().expect("echo is an object");
    fields.insert("normalized".into(), json!(true));
    fields.insert(
        "delays".into(),
        json!({
            "first-zero": pick(DelayStrategy::FirstZero),
            "second-zero": pick(DelayStrategy::SecondZero),
            "mid-critical": pick(DelayStrategy::MidCritical),
        }),
    );
    fields.insert(
        "critical_points".into(),
        json!(critical_points(&curve).unwrap_or_default()),
    );
    fields.insert("curve".into(), serde_json::to_value(&curve).expect("curve serializes"));
    (curve, doc)
}

fn cmd_acl(a: AclArgs, stdout: &mut dyn Write) -> Result<()> {
    let s = a.signal.load()?;
    let (_, doc) = acl_document(&a.signal, &s);
    emit(a.out.as_deref(), &pretty(&doc), stdout)
}

fn cmd_embed(a: EmbedArgs, stdout: &mut dyn Write) -> Result<()> {
    let s = a.signal.load()?.normalize();
    let delay = match a.delay {
        Delay::Fixed(j) => j,
        Delay::Auto => select_delay(&acl(&s), a.strategy).map_err(domain)?,
    };
    let cloud = delay_embed(&s, delay, a.dim).map_err(domain)?;
    if let Some(p) = &a.render {
        write_file(p, render_svg(Artifact::Cloud(&cloud))?.as_bytes())?;
    }
    emit(a.out.as_deref(), &cloud.to_csv_string(), stdout)
}

fn cmd_subsample(a: SubsampleArgs, stdout: &mut dyn Write) -> Result<()> {
    let cloud = read_cloud(&a.cloud)?;
    let seed = match a.seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(topoperiod::detector::DEFAULT_SEED),
    };
    let sample = subsample(&cloud, a.n, seed, a.method).map_err(domain)?;
    emit(a.out.as_deref(), &sample.to_csv_string(), stdout)
}

fn persistence_of(cloud: &PointCloud, max_dim: usize, max_eps: MaxEps) -> Result<PersistenceDiagram> {
    if max_dim == 2 {
        rips_persistence(cloud, max_eps).map_err(domain)
    } else {
        let f = rips_filtration(cloud, max_dim, max_eps).map_err(domain)?;
        Ok(persistent_homology(&f))
    }
}

fn cmd_persist(a: PersistArgs, stdout: &mut dyn Write) -> Result<()> {
    let cloud = read_cloud(&a.cloud)?;
    let max_eps = a.max_eps.map_or(MaxEps::Auto, MaxEps::Value);
    let d = persistence_of(&cloud, a.max_dim, max_eps)?;
    if let Some(p) = &a.render {
        write_file(p, render_svg(Artifact::Diagram(&d))?.as_bytes())?;
    }
    emit(a.out.as_deref(), &pretty(&d), stdout)
}

fn cmd_dist(c: DistCommand, stdout: &mut dyn Write) -> Result<()> {
    let (doc, out) = match c {
        DistCommand::Hausdorff { a, b, out } => {
            let value = hausdorff(&read_cloud(&a)?, &read_cloud(&b)?).map_err(domain)?;
            let doc = json!({
                "metric": "hausdorff",
                "a": a.display().to_string(),
                "b": b.display().to_string(),
                "value": value,
            });
            (doc, out)
        }
        DistCommand::Bottleneck { a, b, dim, out } => {
            let value = bottleneck(&read_diagram(&a)?, &read_diagram(&b)?, dim);
            let doc = json!({
                "metric": "bottleneck",
                "dim": dim,
                "a": a.display().to_string(),
                "b": b.display().to_string(),
                "value": value,
            });
            (doc, out)
        }
    };
    emit(out.as_deref(), &pretty(&doc), stdout)
}

fn cmd_synth(a: SynthArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = PiecewiseSinusoidModel::from_json(&read_text(&a.model)?).map_err(domain)?;
    let s = synthesize(&model, a.rate).map_err(domain)?;
    match &a.out {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")) => s.write_wav(p).map_err(domain),
        out => emit(out.as_deref(), &s.to_csv_string(), stdout),
    }
}

fn cmd_fit(a: FitArgs, stdout: &mut dyn Write) -> Result<()> {
    let s = a.signal.load()?;
    let model = fit_model(&s).map_err(domain)?;
    let error = graph_distance(&s, &model).map_err(domain)?;
    let mut doc = serde_json::to_value(&model).expect("model serializes");
    let fields = doc.as_object_mut().expect("model is an object");
    fields.insert("graph_distance".into(), json!(error));
    fields.insert("source".into(), a.signal.echo());
    emit(a.out.as_deref(), &pretty(&doc), stdout)
}

#[derive(Serialize)]
struct DetectOutput<'a> {
    input: String,
    window: Option<Window>,
    #[serde(flatten)]
    report: &'a DetectionReport,
}

fn cmd_detect(a: DetectArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = pipeline_config(&a.pipeline)?;
    let s = a.signal.load()?;
    let report = detect(&s, &cfg).map_err(domain)?;
    if let Some(dir) = &a.emit_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        let (_, acl_doc) = acl_document(&a.signal, &s);
        write_file(&dir.join("acl.json"), pretty(&acl_doc).as_bytes())?;
        let cloud = delay_embed(&s.normalize(), report.delay_j, cfg.dim).map_err(domain)?;
        write_file(&dir.join("embedding.csv"), cloud.to_csv_string().as_bytes())?;
        let sample = subsample(&cloud, report.subsample_size, cfg.seed, cfg.method).map_err(domain)?;
        write_file(&dir.join("subsample.csv"), sample.to_csv_string().as_bytes())?;
        write_file(&dir.join("diagram.json"), pretty(&report.diagram).as_bytes())?;
    }
    if let Some(p) = &a.render {
        write_file(p, render_svg(Artifact::Diagram(&report.diagram))?.as_bytes())?;
    }
    let out = DetectOutput {
        input: a.signal.input.display().to_string(),
        window: a.signal.window,
        report: &report,
    };
    emit(a.out.as_deref(), &pretty(&out), stdout)
}

#[derive(Serialize)]
struct EvalEntry {
    path: String,
    truth: Label,
    predicted: Option<Label>,
    significance: Option<f64>,
    error: Option<Value>,
}

fn parse_manifest(path: &Path) -> Result<Vec<(PathBuf, String, Label)>> {
    let text = read_text(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| CliError::InvalidManifest {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        let (file, label) = line.rsplit_once(',').ok_or_else(|| bad("expected path,label".into()))?;
        let label: Label = label.parse().map_err(bad)?;
        let file = file.trim();
        // a header row such as `path,label` fails the label parse above
        rows.push((base.join(file), file.to_string(), label));
    }
    if rows.is_empty() {
        return Err(domain(DetectError::EmptyDataset));
    }
    Ok(rows)
}

fn cmd_eval(a: EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = pipeline_config(&a.pipeline)?;
    let rows = parse_manifest(&a.manifest)?;
    let signals = rows
        .iter()
        .map(|(p, _, _)| topoperiod::load_signal(p, a.rate).map_err(domain))
        .collect::<Result<Vec<_>>>()?;

    // Files are independent; results keep manifest order.
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(signals.len());
    let chunk = signals.len().div_ceil(workers);
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = signals
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|s| detect(s, &cfg)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("detector thread panicked"))
            .collect()
    });

    let evaluation = evaluate_outcomes(
        results
            .iter()
            .zip(&rows)
            .map(|(r, (_, _, truth))| (r.as_ref().map(|r| r.label).map_err(Clone::clone), *truth)),
        &cfg,
    )
    .map_err(domain)?;
    let entries: Vec<EvalEntry> = results
        .iter()
        .zip(&rows)
        .map(|(r, (_, name, truth))| EvalEntry {
            path: name.clone(),
            truth: *truth,
            predicted: r.as_ref().ok().map(|r| r.label),
            significance: r.as_ref().ok().map(|r| r.significance),
            error: r
                .as_ref()
                .err()
                .map(|e| json!({ "kind": e.kind(), "message": e.to_string() })),
        })
        .collect();
    let doc = json!({
        "manifest": a.manifest.display().to_string(),
        "evaluation": evaluation,
        "results": entries,
    });
    emit(a.out.as_deref(), &pretty(&doc), stdout)
}

fn cmd_render(a: RenderArgs, stdout: &mut dyn Write) -> Result<()> {
    let is_json = a.artifact.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let svg = if is_json {
        render_svg(Artifact::Diagram(&read_diagram(&a.artifact)?))?
    } else {
        render_svg(Artifact::Cloud(&read_cloud(&a.artifact)?))?
    };
    emit(a.out.as_deref(), &svg, stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_and_delay_parse() {
        assert_eq!("0.5:1.5".parse::<Window>(), Ok(Window { start: 0.5, end: 1.5 }));
        assert!("0.5".parse::<Window>().is_err());
        assert_eq!("auto".parse::<Delay>(), Ok(Delay::Auto));
        assert_eq!("12".parse::<Delay>(), Ok(Delay::Fixed(12)));
        assert!("0".parse::<Delay>().is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["topoperiod", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run_with(["topoperiod", "embed"], &mut out, &mut err), 2);
        assert_eq!(
            run_with(["topoperiod", "embed", "x.wav", "--window", "3"], &mut out, &mut err),
            2
        );
    }

    #[test]
    fn help_exits_0() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["topoperiod", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("detect"));
    }
}
