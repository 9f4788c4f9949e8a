//! CSV and JSON result files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::experiment::{group_records, read_records, CellResult};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(HarnessError::Config(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

pub const RUNS_HEADER: &str = "function,dim,run_index,seed,best_error,evals_used,wall_ms";
pub const SUMMARY_HEADER: &str = "function,dim,n,best,worst,mean,std";

/// Sibling path receiving the per-cell summary of a CSV report:
/// `out/results.csv` becomes `out/results_summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_summary.{ext}"))
}

pub fn runs_csv(cells: &[CellResult]) -> String {
    let mut out = String::from(RUNS_HEADER);
    out.push('\n');
    for cell in cells {
        let name = cell.function.base_id.id();
        for r in &cell.runs {
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{},{}",
                cell.function.dim,
                r.run_index,
                r.seed,
                r.result.best_error,
                r.result.evals_used,
                r.wall_ms
            );
        }
    }
    out
}

pub fn summary_csv(cells: &[CellResult]) -> Result<String, HarnessError> {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for cell in cells.iter().filter(|c| !c.runs.is_empty()) {
        let s = cell.summary()?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.function.base_id.id(),
            cell.function.dim,
            s.n,
            s.best,
            s.worst,
            s.mean,
            s.std
        );
    }
    Ok(out)
}

/// Write `cells` to `path`. CSV output also writes [`summary_path`].
pub fn emit_report(
    cells: &[CellResult],
    format: ReportFormat,
    path: &Path,
) -> Result<(), HarnessError> {
    let write =
        |p: &Path, text: String| std::fs::write(p, text).map_err(|e| HarnessError::io(p, e));
    match format {
        ReportFormat::Json => {
            let text = serde_json::to_string_pretty(cells).expect("results serialize");
            write(path, text)
        }
        ReportFormat::Csv => {
            write(path, runs_csv(cells))?;
            write(&summary_path(path), summary_csv(cells)?)
        }
    }
}

/// Load a JSON report written by [`emit_report`].
pub fn load_json(path: &Path) -> Result<Vec<CellResult>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Load the JSON-lines results file of an experiment.
pub fn load_records(path: &Path) -> Result<Vec<CellResult>, HarnessError> {
    Ok(group_records(read_records(path)?))
}

/// Load either kind of results file, deciding by its first character.
pub fn load_results(path: &Path) -> Result<Vec<CellResult>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    if text.trim_start().starts_with('[') {
        load_json(path)
    } else {
        load_records(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::experiment::RunRecord;
    use crate::objectives::{BaseFunction, ObjectiveDescriptor, DEFAULT_MARGIN};
    use crate::run::{CurvePoint, RunResult};

    fn cell(errors: &[f64]) -> CellResult {
        let function = ObjectiveDescriptor {
            base_id: BaseFunction::Sphere,
            dim: 2,
            transform_seed: 0,
            margin: DEFAULT_MARGIN,
        };
        let runs = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| RunRecord {
                optimizer: "yi".into(),
                function: function.clone(),
                run_index: i as u32,
                seed: i as u64,
                master_seed: 42,
                wall_ms: 0.5,
                result: RunResult {
                    best_error: e,
                    best_point: vec![0.25, -1.0],
                    evals_used: 10,
                    curve: vec![CurvePoint {
                        evals: 1,
                        best_error: e,
                    }],
                    seed: i as u64,
                },
            })
            .collect();
        CellResult { function, runs }
    }

    #[test]
    fn summary_row_matches_hand_values() {
        let text = summary_csv(&[cell(&[1.0, 2.0, 3.0])]).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert!(row.ends_with(",1,3,2,1"), "{row}");
        assert_eq!(row, "sphere,2,3,1,3,2,1");
    }

    #[test]
    fn empty_results() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("r.csv");
        emit_report(&[], ReportFormat::Csv, &csv).unwrap();
        assert_eq!(std::fs::read_to_string(&csv).unwrap().trim(), RUNS_HEADER);
        assert_eq!(
            std::fs::read_to_string(summary_path(&csv)).unwrap().trim(),
            SUMMARY_HEADER
        );
        let json = dir.path().join("r.json");
        emit_report(&[], ReportFormat::Json, &json).unwrap();
        assert_eq!(std::fs::read_to_string(&json).unwrap().trim(), "[]");
        assert!(load_json(&json).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let cells = vec![cell(&[0.1, 1e-300, 7.0])];
        emit_report(&cells, ReportFormat::Json, &path).unwrap();
        assert_eq!(load_json(&path).unwrap(), cells);
        assert_eq!(load_results(&path).unwrap(), cells);
    }

    #[test]
    fn runs_rows() {
        let text = runs_csv(&[cell(&[4.5])]);
        assert_eq!(text.lines().nth(1).unwrap(), "sphere,2,0,0,4.5,10,0.5");
    }

    #[test]
    fn summary_path_naming() {
        assert_eq!(
            summary_path(Path::new("out/results.csv")),
            PathBuf::from("out/results_summary.csv")
        );
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
