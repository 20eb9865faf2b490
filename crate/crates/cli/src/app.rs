//! Argument parsing and the six subcommands.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use nidsbench::dataset::{fetch_dataset, write_kdd_records, DatasetName};
use nidsbench::eval::{annotate_drifts, cross_validate, prequential_run, PrequentialTrace};
use nidsbench::preprocess::{apply_variant, fit_normalizer, oner_rank, select_attributes, AttackCategoryMap, PreprocessVariant};
use nidsbench::{Error, Execution};

use crate::algo;
use crate::config::{Algorithm, AttrChoice, RunConfig};
use crate::data::{self, prepare};
use crate::report::{
    combined_trace_csv, emit_batch_report, emit_stream_report, ensure_dir, read_trace_points, write_file, write_json,
    InputDigest, Manifest, Summary,
};
use crate::svg::{emit_svg_curve, Curve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nidsbench", version, about = "Batch and stream intrusion-detection benchmark on KDD99-family data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download a dataset into the cache and verify its SHA-256 digest.
    Fetch(FetchArgs),
    /// Relabel, select attributes and optionally normalize; writes CSV.
    Preprocess(PreprocessArgs),
    /// Print the OneR attribute ranking.
    Rank(DataArgs),
    /// Stratified cross-validation of batch learners.
    Batch(RunArgs),
    /// Prequential evaluation of stream learners.
    Stream(RunArgs),
    /// Summarize the runs found in an output directory.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct FetchArgs {
    /// kdd99-10 or nsl-kdd.
    #[arg(long)]
    data: String,
    /// Expected hex SHA-256 of the file.
    #[arg(long)]
    sha256: String,
    /// Override the download URL.
    #[arg(long)]
    url: Option<String>,
    /// Cache directory (default: $NIDSBENCH_CACHE or ./data).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// kdd99-10, nsl-kdd or a path to a raw record file.
    #[arg(long)]
    data: Option<String>,
    /// v1 (5 classes), v2 (normal/attack) or v3 (23 classes).
    #[arg(long)]
    variant: Option<PreprocessVariant>,
    /// selected, all, or comma-separated 1-based indices.
    #[arg(long)]
    attrs: Option<AttrChoice>,
}

#[derive(Args, Debug)]
struct PreprocessArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Min-max scale numeric attributes.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Algorithm ids, comma-separated: nb, j48, knn, mlp, svm (batch);
    /// snb, ht, wknn, ozaboost (stream).
    #[arg(long, value_delimiter = ',')]
    algo: Option<Vec<Algorithm>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stratified training subsample size for knn.
    #[arg(long)]
    sample: Option<usize>,
    /// Keep every n-th trace row in CSV and chart output.
    #[arg(long)]
    step: Option<usize>,
    /// Training epochs for mlp.
    #[arg(long)]
    epochs: Option<usize>,
    /// Start from a saved RunConfig or manifest; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run folds and algorithms one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

/// Error classes that map onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Config(_) | Error::AttributeIndex { .. }) => EXIT_USAGE,
            CliError::Core(e) if e.is_data_error() => EXIT_DATA,
            CliError::Core(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Summary lines go to stdout, errors to stderr.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<Vec<String>> {
    match cmd {
        Command::Fetch(a) => fetch(a),
        Command::Preprocess(a) => preprocess(a),
        Command::Rank(a) => rank(a),
        Command::Batch(a) => {
            let cfg = resolve_config(&a, RunConfig::batch_default())?;
            run_batch(&cfg, exec_of(&a))
        }
        Command::Stream(a) => {
            let cfg = resolve_config(&a, RunConfig::stream_default())?;
            run_stream(&cfg, exec_of(&a))
        }
        Command::Report(a) => report(&a.out),
    }
}

fn exec_of(a: &RunArgs) -> Execution {
    if a.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn apply_data_args(cfg: &mut RunConfig, d: &DataArgs) {
    if let Some(v) = &d.data {
        cfg.dataset = v.clone();
    }
    if let Some(v) = d.variant {
        cfg.variant = v;
    }
    if let Some(v) = &d.attrs {
        cfg.attrs = v.clone();
    }
}

fn load_config_file(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    if let Ok(cfg) = serde_json::from_str::<RunConfig>(&text) {
        return Ok(cfg);
    }
    serde_json::from_str::<Manifest>(&text)
        .map(|m| m.config)
        .map_err(|e| CliError::Usage(format!("{}: neither a RunConfig nor a manifest: {e}", path.display())))
}

fn resolve_config(a: &RunArgs, defaults: RunConfig) -> CliResult<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => load_config_file(p)?,
        None => defaults,
    };
    apply_data_args(&mut cfg, &a.data);
    if let Some(v) = &a.algo {
        cfg.algorithms = v.clone();
    }
    macro_rules! set {
        ($($field:ident <- $arg:expr),*) => { $(if let Some(v) = $arg { cfg.$field = v; })* };
    }
    set!(k <- a.k, folds <- a.folds, alpha <- a.alpha, seed <- a.seed, trace_step <- a.step, epochs <- a.epochs);
    if let Some(o) = &a.out {
        cfg.out = o.clone();
    }
    if a.sample.is_some() {
        cfg.sample = a.sample;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn fetch(a: FetchArgs) -> CliResult<Vec<String>> {
    let name: DatasetName = a.data.parse()?;
    let url = a.url.as_deref().unwrap_or(name.default_url());
    let cache = a.cache.unwrap_or_else(data::cache_dir);
    let path = fetch_dataset(name, url, &a.sha256, &cache)?;
    Ok(vec![format!("fetch {}: {}", name.as_str(), path.display())])
}

fn preprocess(a: PreprocessArgs) -> CliResult<Vec<String>> {
    let mut cfg = RunConfig::batch_default();
    apply_data_args(&mut cfg, &a.data);
    let source = data::resolve_dataset(&cfg.dataset)?;
    let raw = data::load_raw(&source)?;
    let relabeled = apply_variant(&raw, cfg.variant, &AttackCategoryMap::kdd99())?;
    let mut ds = select_attributes(&relabeled, &cfg.attrs.spec(relabeled.schema().len()))?;
    if a.normalize {
        ds = fit_normalizer(&ds).apply(&ds)?;
        ds.add_provenance("normalize: min-max fitted on the whole file");
    }
    ensure_dir(&a.out)?;
    let stem = format!("{}_{}_preprocessed", cfg.dataset_label(), cfg.variant.as_str());
    let csv_path = a.out.join(format!("{stem}.csv"));
    let mut buf = Vec::new();
    write_kdd_records(&ds, &mut buf).map_err(|e| Error::Io {
        path: csv_path.clone(),
        source: e,
    })?;
    fs::write(&csv_path, buf).map_err(|e| Error::Io {
        path: csv_path.clone(),
        source: e,
    })?;
    let mut prov = ds.provenance().join("\n");
    prov.push('\n');
    write_file(&a.out.join(format!("{stem}.provenance.txt")), &prov)?;
    Ok(vec![format!(
        "preprocess {} {}: {} instances, {} attributes -> {}",
        cfg.dataset,
        cfg.variant,
        ds.len(),
        ds.schema().len(),
        csv_path.display()
    )])
}

fn rank(d: DataArgs) -> CliResult<Vec<String>> {
    let mut cfg = RunConfig::batch_default();
    cfg.attrs = AttrChoice::All;
    apply_data_args(&mut cfg, &d);
    let prepared = prepare(&cfg)?;
    let scores = oner_rank(&prepared.data)?;
    let spec = cfg.attrs.spec(41);
    let mut lines = vec![format!("{:>4}  {:>4}  {:<28} {:>9}", "rank", "attr", "name", "accuracy")];
    for (i, s) in scores.iter().enumerate() {
        let original = spec.indices()[s.attribute - 1];
        lines.push(format!("{:>4}  {:>4}  {:<28} {:>8.4}%", i + 1, original, s.name, s.accuracy * 100.0));
    }
    Ok(lines)
}

fn manifest(cfg: &RunConfig, command: &str, source: &Path, sha256: &str, outputs: &[PathBuf]) -> Manifest {
    Manifest {
        tool: "nidsbench".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config: cfg.clone(),
        inputs: vec![InputDigest {
            path: source.display().to_string(),
            sha256: sha256.into(),
        }],
        outputs: outputs
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
    }
}

fn pct(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

pub fn run_batch(cfg: &RunConfig, exec: Execution) -> CliResult<Vec<String>> {
    if let Some(a) = cfg.algorithms.iter().find(|a| a.is_stream()) {
        return Err(CliError::Usage(format!("{a} is a stream algorithm; use the stream command")));
    }
    let prepared = prepare(cfg)?;
    let ds = &prepared.data;
    let mut lines = Vec::new();
    for &alg in &cfg.algorithms {
        let started = Instant::now();
        let res = cross_validate(ds, || algo::batch_learner(alg, cfg), cfg.folds, cfg.seed, exec)?;
        let runtime = started.elapsed().as_secs_f64();
        let summary = Summary {
            dataset: cfg.dataset.clone(),
            variant: cfg.variant.to_string(),
            algorithm: alg.to_string(),
            params: algo::params(alg, cfg),
            accuracy: res.accuracy,
            error: res.error,
            runtime_seconds: runtime,
            drift_indices: vec![],
            instances: ds.len(),
            mean_faded_accuracy: None,
            trace_file: None,
        };
        let stem = cfg.stem(alg);
        let mut outputs = emit_batch_report(&cfg.out, &stem, &res.confusion, &summary)?;
        let manifest_path = cfg.out.join(format!("{stem}_manifest.json"));
        outputs.push(manifest_path.clone());
        let single = RunConfig {
            algorithms: vec![alg],
            ..cfg.clone()
        };
        write_json(&manifest_path, &manifest(&single, "batch", &prepared.source, &prepared.sha256, &outputs))?;
        lines.push(format!(
            "batch {} {} {}: accuracy {} ({}/{}), error {}, {:.1} s",
            cfg.dataset,
            cfg.variant,
            alg,
            pct(res.accuracy),
            res.confusion.correct(),
            res.confusion.total(),
            pct(res.error),
            runtime
        ));
    }
    Ok(lines)
}

/// Result of one stream algorithm over the prepared stream.
pub struct StreamOutcome {
    pub algorithm: Algorithm,
    pub trace: PrequentialTrace,
    pub drifts: Vec<usize>,
    pub runtime_seconds: f64,
}

pub fn run_stream(cfg: &RunConfig, exec: Execution) -> CliResult<Vec<String>> {
    if let Some(a) = cfg.algorithms.iter().find(|a| !a.is_stream()) {
        return Err(CliError::Usage(format!("{a} is a batch algorithm; use the batch command")));
    }
    let prepared = prepare(cfg)?;
    let ds = &prepared.data;
    let outcomes: Vec<nidsbench::Result<StreamOutcome>> = exec.map_slice(&cfg.algorithms, |&alg| {
        let started = Instant::now();
        let mut model = algo::stream_model(alg, ds, cfg)?;
        let input = algo::stream_input(alg, ds, cfg);
        let trace = prequential_run(&input, model.as_mut(), cfg.alpha, ds.schema().class_labels())?;
        let runtime_seconds = started.elapsed().as_secs_f64();
        let drifts = annotate_drifts(&trace, cfg.drift_threshold, cfg.drift_window)?;
        Ok(StreamOutcome {
            algorithm: alg,
            trace,
            drifts,
            runtime_seconds,
        })
    });
    let outcomes = outcomes.into_iter().collect::<nidsbench::Result<Vec<_>>>()?;
    let mut lines = Vec::new();
    let mut curves = Vec::new();
    for o in &outcomes {
        let stem = cfg.stem(o.algorithm);
        let acc = o.trace.cumulative_accuracy();
        let summary = Summary {
            dataset: cfg.dataset.clone(),
            variant: cfg.variant.to_string(),
            algorithm: o.algorithm.to_string(),
            params: algo::params(o.algorithm, cfg),
            accuracy: acc,
            error: 1.0 - acc,
            runtime_seconds: o.runtime_seconds,
            drift_indices: o.drifts.clone(),
            instances: o.trace.len(),
            mean_faded_accuracy: Some(o.trace.mean_faded_accuracy()),
            trace_file: Some(format!("{stem}_trace.csv")),
        };
        let mut outputs = emit_stream_report(&cfg.out, &stem, &o.trace, &summary, cfg.trace_step)?;
        let manifest_path = cfg.out.join(format!("{stem}_manifest.json"));
        outputs.push(manifest_path.clone());
        let single = RunConfig {
            algorithms: vec![o.algorithm],
            ..cfg.clone()
        };
        write_json(&manifest_path, &manifest(&single, "stream", &prepared.source, &prepared.sha256, &outputs))?;
        curves.push(Curve::from_trace(o.algorithm.as_str(), &o.trace, cfg.trace_step));
        lines.push(format!(
            "stream {} {} {}: accuracy {}, mean faded accuracy {}, drifts {:?}, {:.1} s",
            cfg.dataset,
            cfg.variant,
            o.algorithm,
            pct(acc),
            pct(o.trace.mean_faded_accuracy()),
            o.drifts,
            o.runtime_seconds
        ));
    }
    let group = cfg.group_stem();
    if outcomes.len() > 1 {
        let named: Vec<(&str, &PrequentialTrace)> = outcomes.iter().map(|o| (o.algorithm.as_str(), &o.trace)).collect();
        write_file(
            &cfg.out.join(format!("{group}_comparison.csv")),
            &combined_trace_csv(&named, cfg.trace_step),
        )?;
    }
    let names: Vec<&str> = outcomes.iter().map(|o| o.algorithm.as_str()).collect();
    emit_svg_curve(&curves, &cfg.out.join(format!("{group}_{}_curves.svg", names.join("-"))))?;
    Ok(lines)
}

fn report(out: &Path) -> CliResult<Vec<String>> {
    let entries = fs::read_dir(out).map_err(|e| Error::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with("_summary.json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Empty { path: out.to_path_buf() }.into());
    }
    let mut summaries = Vec::new();
    for p in &paths {
        let text = fs::read_to_string(p).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        })?;
        let s: Summary =
            serde_json::from_str(&text).map_err(|e| Error::SchemaMismatch(format!("{}: {e}", p.display())))?;
        summaries.push(s);
    }
    let mut csv = String::from("dataset,variant,algorithm,accuracy,error,runtime_seconds,drift_indices\n");
    let mut lines = vec![format!(
        "{:<12} {:<4} {:<9} {:>9} {:>10}  drifts",
        "dataset", "var", "algorithm", "accuracy", "runtime s"
    )];
    for s in &summaries {
        let drifts: Vec<String> = s.drift_indices.iter().map(ToString::to_string).collect();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.dataset,
            s.variant,
            s.algorithm,
            s.accuracy,
            s.error,
            s.runtime_seconds,
            drifts.join(" ")
        ));
        lines.push(format!(
            "{:<12} {:<4} {:<9} {:>9} {:>10.1}  {}",
            s.dataset,
            s.variant,
            s.algorithm,
            pct(s.accuracy),
            s.runtime_seconds,
            drifts.join(" ")
        ));
    }
    write_file(&out.join("report.csv"), &csv)?;

    // One chart per (dataset, variant) with every stream trace on it.
    let mut groups: Vec<((String, String), Vec<Curve>)> = Vec::new();
    for s in &summaries {
        let Some(file) = &s.trace_file else { continue };
        let points = read_trace_points(&out.join(file))?;
        let key = (s.dataset.clone(), s.variant.clone());
        let curve = Curve {
            name: s.algorithm.clone(),
            points,
        };
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.1.push(curve),
            None => groups.push((key, vec![curve])),
        }
    }
    for ((dataset, variant), curves) in &groups {
        let label = RunConfig {
            dataset: dataset.clone(),
            ..RunConfig::default()
        }
        .dataset_label();
        let path = emit_svg_curve(curves, &out.join(format!("report_{label}_{variant}.svg")))?;
        lines.push(format!("chart: {}", path.display()));
    }
    Ok(lines)
}
