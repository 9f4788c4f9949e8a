//! Running experiments: every (function, dim) cell gets `runs` independent
//! runs whose seeds derive from the master seed and the run index only.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::objectives::{ObjectiveDescriptor, ObjectiveSpec};
use crate::rng::child_seed;
use crate::run::RunResult;

use super::config::ExperimentConfig;
use super::stats::{summarize, StatsSummary};
use super::HarnessError;

/// One run as persisted in a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub optimizer: String,
    pub function: ObjectiveDescriptor,
    pub run_index: u32,
    pub seed: u64,
    pub master_seed: u64,
    pub wall_ms: f64,
    pub result: RunResult,
}

/// All runs of one (function, dim) pair, ordered by run index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub function: ObjectiveDescriptor,
    pub runs: Vec<RunRecord>,
}

impl CellResult {
    pub fn errors(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.result.best_error).collect()
    }

    pub fn summary(&self) -> Result<StatsSummary, HarnessError> {
        summarize(&self.errors())
    }
}

type RecordKey = (String, u32);

fn record_key(descriptor: &ObjectiveDescriptor, run_index: u32) -> RecordKey {
    (
        serde_json::to_string(descriptor).expect("descriptor serializes"),
        run_index,
    )
}

/// Read records from a JSON-lines file. A malformed final line (an
/// interrupted write) is dropped; malformed lines elsewhere are errors.
pub(crate) fn read_records(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    read_records_checked(path).map(|(records, _)| records)
}

/// Like [`read_records`], also reporting whether a torn final line was dropped.
fn read_records_checked(path: &Path) -> Result<(Vec<RunRecord>, bool), HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<Result<_, _>>()
        .map_err(|e| HarnessError::io(path, e))?;
    let last = lines.iter().rposition(|l| !l.trim().is_empty());
    let mut records = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(line) {
            Ok(r) => records.push(r),
            Err(_) if Some(i) == last => return Ok((records, true)),
            Err(e) => {
                return Err(HarnessError::Format {
                    path: path.to_path_buf(),
                    message: format!("line {}: {e}", i + 1),
                })
            }
        }
    }
    Ok((records, false))
}

/// Group records into cells in first-seen cell order, runs sorted by index.
pub fn group_records(records: Vec<RunRecord>) -> Vec<CellResult> {
    let mut order: Vec<ObjectiveDescriptor> = Vec::new();
    let mut cells: Vec<Vec<RunRecord>> = Vec::new();
    for r in records {
        match order.iter().position(|d| *d == r.function) {
            Some(i) => cells[i].push(r),
            None => {
                order.push(r.function.clone());
                cells.push(vec![r]);
            }
        }
    }
    order
        .into_iter()
        .zip(cells)
        .map(|(function, mut runs)| {
            runs.sort_by_key(|r| r.run_index);
            CellResult { function, runs }
        })
        .collect()
}

struct Task {
    cell: usize,
    run_index: u32,
}

/// Execute an experiment.
///
/// When `output_path` is set, records already present there are reused and
/// new records are appended as they complete, so re-running the same config
/// after an interruption finishes the remaining runs only.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CellResult>, HarnessError> {
    cfg.validate()?;
    let descriptors: Vec<ObjectiveDescriptor> = cfg
        .dims
        .iter()
        .flat_map(|&d| cfg.functions.iter().map(move |f| f.descriptor(d)))
        .collect();
    let specs: Vec<ObjectiveSpec> = descriptors
        .iter()
        .map(|d| d.build())
        .collect::<Result<_, _>>()?;

    let mut done: BTreeMap<RecordKey, RunRecord> = BTreeMap::new();
    let mut sink: Option<Mutex<File>> = None;
    if let Some(path) = &cfg.output_path {
        if path.exists() {
            let (records, torn) = read_records_checked(path)?;
            if torn {
                let mut text = String::new();
                for r in &records {
                    text.push_str(&serde_json::to_string(r).expect("record serializes"));
                    text.push('\n');
                }
                std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))?;
            }
            for r in records {
                let expected = child_seed(cfg.master_seed, u64::from(r.run_index));
                if r.optimizer != cfg.optimizer.name() || r.seed != expected {
                    return Err(HarnessError::Config(format!(
                        "output_path {} holds results of a different experiment",
                        path.display()
                    )));
                }
                done.insert(record_key(&r.function, r.run_index), r);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| HarnessError::io(path, e))?;
        sink = Some(Mutex::new(file));
    }

    let tasks: Vec<Task> = descriptors
        .iter()
        .enumerate()
        .flat_map(|(cell, d)| {
            (0..cfg.runs)
                .filter(|&r| !done.contains_key(&record_key(d, r)))
                .map(move |run_index| Task { cell, run_index })
                .collect::<Vec<_>>()
        })
        .collect();

    let execute = |task: &Task| -> Result<RunRecord, HarnessError> {
        let spec = &specs[task.cell];
        let seed = child_seed(cfg.master_seed, u64::from(task.run_index));
        let start = Instant::now();
        let result = cfg.optimizer.run(spec, cfg.max_fe(spec.dim()), seed)?;
        let record = RunRecord {
            optimizer: cfg.optimizer.name().to_string(),
            function: descriptors[task.cell].clone(),
            run_index: task.run_index,
            seed,
            master_seed: cfg.master_seed,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            result,
        };
        if let (Some(sink), Some(path)) = (&sink, &cfg.output_path) {
            let line = serde_json::to_string(&record).expect("record serializes");
            let mut file = sink.lock().expect("results file lock");
            writeln!(file, "{line}")
                .and_then(|_| file.flush())
                .map_err(|e| HarnessError::io(path, e))?;
        }
        Ok(record)
    };

    let fresh: Vec<RunRecord> = if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| HarnessError::Config(format!("workers: {e}")))?;
        pool.install(|| tasks.par_iter().map(execute).collect::<Result<_, _>>())?
    } else {
        tasks.iter().map(execute).collect::<Result<_, _>>()?
    };

    for r in fresh {
        done.insert(record_key(&r.function, r.run_index), r);
    }
    let cells = descriptors
        .iter()
        .map(|d| {
            let runs: Vec<RunRecord> = (0..cfg.runs)
                .map(|r| done.remove(&record_key(d, r)).expect("every run executed"))
                .collect();
            CellResult {
                function: d.clone(),
                runs,
            }
        })
        .collect();
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{FunctionEntry, OptimizerSpec, YiParams};
    use crate::objectives::BaseFunction;

    fn small(runs: u32) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(
            OptimizerSpec::Yi(YiParams::default()),
            vec![
                FunctionEntry::new(BaseFunction::Sphere, 1),
                FunctionEntry::new(BaseFunction::Levy, 2),
            ],
            vec![2, 3],
            runs,
        );
        cfg.fe_multiplier = 200;
        cfg
    }

    #[test]
    fn cells_and_budgets() {
        let cells = run_experiment(&small(3)).unwrap();
        assert_eq!(cells.len(), 4);
        for c in &cells {
            assert_eq!(c.runs.len(), 3);
            for (i, r) in c.runs.iter().enumerate() {
                assert_eq!(r.run_index, i as u32);
                assert_eq!(r.seed, child_seed(42, i as u64));
                assert!(r.result.evals_used <= 200 * c.function.dim as u64);
            }
        }
    }

    #[test]
    fn single_run_summary_has_zero_std() {
        let cells = run_experiment(&small(1)).unwrap();
        let s = cells[0].summary().unwrap();
        assert_eq!(s.std, 0.0);
        assert!(s.is_degenerate());
    }

    #[test]
    fn parallel_matches_serial() {
        let serial = run_experiment(&small(4)).unwrap();
        let mut cfg = small(4);
        cfg.workers = 3;
        let parallel = run_experiment(&cfg).unwrap();
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.errors(), b.errors());
        }
    }

    #[test]
    fn resume_reuses_and_completes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        let mut cfg = small(2);
        cfg.output_path = Some(path.clone());
        run_experiment(&cfg).unwrap();
        let first = read_records(&path).unwrap().len();
        assert_eq!(first, 8);

        cfg.runs = 5;
        let cells = run_experiment(&cfg).unwrap();
        assert_eq!(read_records(&path).unwrap().len(), 20);

        let mut fresh = small(5);
        fresh.output_path = None;
        let reference = run_experiment(&fresh).unwrap();
        for (a, b) in cells.iter().zip(&reference) {
            assert_eq!(a.errors(), b.errors());
        }
    }

    #[test]
    fn truncated_tail_is_ignored_and_rerun() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        let mut cfg = small(2);
        cfg.output_path = Some(path.clone());
        run_experiment(&cfg).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let keep: Vec<&str> = text.lines().take(5).collect();
        let partial = &text.lines().nth(5).unwrap()[..20];
        std::fs::write(&path, format!("{}\n{partial}", keep.join("\n"))).unwrap();
        assert_eq!(read_records(&path).unwrap().len(), 5);
        let again = run_experiment(&cfg).unwrap();
        assert!(again.iter().all(|c| c.runs.len() == 2));
        assert_eq!(read_records(&path).unwrap().len(), 8);
    }

    #[test]
    fn foreign_results_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        let mut cfg = small(1);
        cfg.output_path = Some(path.clone());
        run_experiment(&cfg).unwrap();
        cfg.master_seed = 7;
        assert!(run_experiment(&cfg).unwrap_err().is_config_error());
    }
}
