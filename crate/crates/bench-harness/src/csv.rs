use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::runner::ExperimentResult;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Renders the raw per-run rows: `policy,run,t,cum_regret`, plus a
/// `cum_realized` column when realized-regret tracking is on. Floats are
/// printed shortest-round-trip, so parsing the file back reproduces the
/// in-memory values bit for bit.
pub fn raw_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    if result.realized_regret {
        out.push_str("policy,run,t,cum_regret,cum_realized\n");
    } else {
        out.push_str("policy,run,t,cum_regret\n");
    }
    for trace in &result.raw {
        for (idx, &(t, cum)) in trace.samples.iter().enumerate() {
            let _ = write!(out, "{},{},{t},{cum}", trace.policy, trace.run);
            if let Some(realized) = &trace.realized {
                let _ = write!(out, ",{}", realized[idx].1);
            }
            out.push('\n');
        }
    }
    out
}

/// Renders the aggregate rows: `policy,t,mean_regret,stderr`.
pub fn aggregate_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("policy,t,mean_regret,stderr\n");
    for agg in &result.aggregates {
        for &(t, mean, stderr) in &agg.points {
            let _ = writeln!(out, "{},{t},{mean},{stderr}", agg.policy);
        }
    }
    out
}

/// Writes `raw.csv` and `aggregate.csv` under `dir` (created if missing).
pub fn write_csv(result: &ExperimentResult, dir: &Path) -> Result<(), CsvError> {
    let write = |name: &str, content: String| -> Result<(), CsvError> {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|source| CsvError::Io { path, source })
    };
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(dir)
            .map_err(|source| CsvError::Io { path: dir.to_path_buf(), source })?;
    }
    write("raw.csv", raw_csv(result))?;
    write("aggregate.csv", aggregate_csv(result))
}
