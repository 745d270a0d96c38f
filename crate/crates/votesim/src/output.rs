//! CSV serialization of sweep surfaces and game traces.
//!
//! Sweep output is a plain CSV, one row per grid cell, sorted by
//! (altruist_count, n0), with floats printed in shortest round-trip form. A
//! sidecar at `<path>.meta` records the effective [`RunSpec`], the artifact
//! version, and a timestamp; everything except the timestamp is deterministic
//! for a given spec, and the sidecar body is itself a valid config document.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;
use votesim_core::{Decision, GameResult, SweepResult};

use crate::config::RunSpec;

pub const SWEEP_CSV_HEADER: &str = "altruist_count,n0,replications,mean_survival,stderr_survival,mean_survivors_egoist,mean_survivors_altruist";
pub const TRACE_CSV_HEADER: &str = "step,decision,yes,voters,alive_after,newly_ruined";
pub const METADATA_SUFFIX: &str = ".meta";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("no trace recorded in this result; run with tracing enabled (mode = trace or --trace)")]
    MissingTrace,
}

fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    std::fs::write(path, contents).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut rows = sweep.grid.clone();
    rows.sort_by_key(|c| (c.altruist_count, c.support_size));
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for cell in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.altruist_count,
            cell.support_size,
            cell.replications,
            cell.mean_survival,
            cell.stderr_survival,
            cell.mean_survivors_by_strategy.egoist,
            cell.mean_survivors_by_strategy.altruist,
        )
        .expect("writing to String cannot fail");
    }
    out
}

fn metadata(spec: &RunSpec) -> String {
    let timestamp = OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .unwrap_or_else(|_| "unknown".to_string());
    format!(
        "# artifact_version = {}\n# timestamp = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        timestamp,
        spec.render(),
    )
}

/// Writes the sweep CSV plus its `<path>.meta` sidecar.
pub fn write_sweep_csv(
    sweep: &SweepResult,
    spec: &RunSpec,
    path: &Path,
) -> Result<(), OutputError> {
    write_file(path, &sweep_csv(sweep))?;
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(METADATA_SUFFIX);
    write_file(Path::new(&meta_path), &metadata(spec))
}

pub fn trace_csv(result: &GameResult) -> Result<String, OutputError> {
    let trace = result.trace.as_ref().ok_or(OutputError::MissingTrace)?;
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for record in trace {
        let ruined = record
            .newly_ruined
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            record.step_index,
            match record.decision {
                Decision::Accepted => "accepted",
                Decision::Rejected => "rejected",
            },
            record.yes_count,
            record.voters,
            record.alive_after,
            ruined,
        )
        .expect("writing to String cannot fail");
    }
    Ok(out)
}

/// Writes the per-step trace of a single game.
pub fn write_trace(result: &GameResult, path: &Path) -> Result<(), OutputError> {
    write_file(path, &trace_csv(result)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use votesim_core::{run_game, sweep, RngSeed};

    #[test]
    fn sweep_csv_is_sorted_with_header() {
        let spec = RunSpec::default();
        let result = sweep(&spec.config, &[50, 10], &[20, 10], 2, RngSeed(1)).unwrap();
        let csv = sweep_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert!(lines[1].starts_with("10,10,"));
        assert!(lines[2].starts_with("10,20,"));
        assert!(lines[3].starts_with("50,10,"));
        assert!(lines[4].starts_with("50,20,"));
    }

    #[test]
    fn trace_has_header_plus_one_row_per_step() {
        let mut spec = RunSpec::default();
        spec.config.n = 10;
        spec.config.steps = 25;
        let result = run_game(&spec.config, RngSeed(3), true).unwrap();
        let csv = trace_csv(&result).unwrap();
        assert_eq!(csv.lines().count(), 26);
        assert!(csv.starts_with(TRACE_CSV_HEADER));
    }

    #[test]
    fn trace_without_trace_is_usage_error() {
        let mut spec = RunSpec::default();
        spec.config.n = 5;
        spec.config.steps = 5;
        let result = run_game(&spec.config, RngSeed(3), false).unwrap();
        assert!(matches!(trace_csv(&result), Err(OutputError::MissingTrace)));
    }

    #[test]
    fn rejected_rows_keep_previous_alive_count() {
        let mut spec = RunSpec::default();
        spec.config.n = 20;
        spec.config.initial_capital = 5.0;
        spec.config.steps = 200;
        let result = run_game(&spec.config, RngSeed(9), true).unwrap();
        let trace = result.trace.as_ref().unwrap();
        for pair in trace.windows(2) {
            if pair[1].decision == Decision::Rejected {
                assert_eq!(pair[1].alive_after, pair[0].alive_after);
            }
        }
    }
}
