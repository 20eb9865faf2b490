//! Artifact files: trace and confusion CSVs, summary JSON and manifests.

use std::fs;
use std::path::{Path, PathBuf};

use nidsbench::eval::{ConfusionMatrix, PrequentialTrace};
use nidsbench::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

/// Per-run summary written as `<stem>_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dataset: String,
    pub variant: String,
    pub algorithm: String,
    pub params: Value,
    pub accuracy: f64,
    pub error: f64,
    pub runtime_seconds: f64,
    pub drift_indices: Vec<usize>,
    pub instances: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_faded_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to repeat a run and check its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    write_file(path, &s)
}

/// Trace CSV, confusion CSV and summary JSON for one stream run.
pub fn emit_stream_report(
    out: &Path,
    stem: &str,
    trace: &PrequentialTrace,
    summary: &Summary,
    step: usize,
) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let trace_path = out.join(format!("{stem}_trace.csv"));
    write_file(&trace_path, &trace.to_csv(step))?;
    let mut paths = vec![trace_path];
    paths.extend(emit_batch_report(out, stem, &trace.confusion, summary)?);
    Ok(paths)
}

/// Confusion CSV and summary JSON for one run.
pub fn emit_batch_report(out: &Path, stem: &str, cm: &ConfusionMatrix, summary: &Summary) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let cm_path = out.join(format!("{stem}_confusion.csv"));
    write_file(&cm_path, &cm.to_csv())?;
    let summary_path = out.join(format!("{stem}_summary.json"));
    write_json(&summary_path, summary)?;
    Ok(vec![cm_path, summary_path])
}

/// Several algorithms' traces over the same stream in one CSV with an
/// `algorithm` column.
pub fn combined_trace_csv(traces: &[(&str, &PrequentialTrace)], step: usize) -> String {
    let mut out = String::from("algorithm,index,correct,faded_accuracy,cumulative_accuracy\n");
    for (name, trace) in traces {
        for line in trace.to_csv(step).lines().skip(1) {
            out.push_str(name);
            out.push(',');
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// Reads `index` and `faded_accuracy` columns back from a trace CSV.
pub fn read_trace_points(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "index,correct,faded_accuracy,cumulative_accuracy" {
        return Err(Error::SchemaMismatch(format!("{}: not a trace CSV", path.display())));
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let bad = || Error::Parse {
                line: i + 2,
                field: 0,
                message: format!("malformed trace row in {}", path.display()),
            };
            let mut f = l.split(',');
            let idx = f.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            let faded = f.nth(1).and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            Ok((idx, faded))
        })
        .collect()
}
