use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use yiopt::harness::published::{BASELINE_NAMES, YI_NAME};
use yiopt::harness::{
    comparison_moments, emit_report, load_results, measure_time_complexity, parameter_sweep,
    run_experiment, wtl_table, CellResult, ExperimentConfig, HarnessError, ReportFormat,
    SampleMoments, SweepConfig, WtlTable, YiParams,
};

#[derive(Debug, Parser)]
#[command(
    name = "yiopt",
    version,
    about = "Yi optimizer experiments and comparisons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute an experiment config, appending run records to its output_path.
    Run {
        config: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Win/tie/loss of another result set, or of a published baseline, against ours.
    Compare {
        /// Our results (JSON report or JSON-lines records).
        ours: Option<PathBuf>,
        /// Their results, keyed by the same functions.
        theirs: Option<PathBuf>,
        /// Compare the published YI column against this published baseline.
        #[arg(long, value_name = "ALGORITHM", conflicts_with_all = ["ours", "theirs"])]
        published: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Print the full table as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Measure (t2 - t1) / t0 at each dimension.
    Timing {
        #[arg(long, value_delimiter = ',', default_values_t = [10, 30, 50])]
        dims: Vec<usize>,
        /// JSON file with YI parameters; defaults otherwise.
        #[arg(long)]
        yi: Option<PathBuf>,
    },
    /// Compare YI parameter variants against a base configuration.
    Sweep { config: PathBuf },
    /// Re-emit stored results as CSV or JSON.
    Report {
        input: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Write a report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

/// An unreadable or malformed config file is the user's to fix.
fn config_error(e: HarnessError) -> HarnessError {
    match e {
        HarnessError::Io { path, source } => {
            HarnessError::Config(format!("{}: {source}", path.display()))
        }
        other => other,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}

fn print_summaries(cells: &[CellResult]) -> Result<(), HarnessError> {
    println!(
        "{:<24} {:>4} {:>12} {:>12} {:>12} {:>12}",
        "function", "n", "best", "worst", "mean", "std"
    );
    for c in cells {
        let s = c.summary()?;
        println!(
            "{:<24} {:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            c.function.label(),
            s.n,
            s.best,
            s.worst,
            s.mean,
            s.std
        );
    }
    Ok(())
}

fn write_report(cells: &[CellResult], args: &ReportArgs) -> Result<(), HarnessError> {
    if let Some(out) = &args.out {
        emit_report(cells, args.format, out)?;
        eprintln!("wrote {}", out.display());
    }
    Ok(())
}

fn moments(cells: &[CellResult]) -> Result<BTreeMap<String, SampleMoments>, HarnessError> {
    cells
        .iter()
        .map(|c| Ok((c.function.label(), c.summary()?.moments())))
        .collect()
}

fn print_table(table: &WtlTable, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(table).expect("table serializes")
        );
        return;
    }
    for (k, o) in &table.per_function {
        println!(
            "{:<24} {} t={:>10.4} df={:>8.2} p={:.3e}",
            k,
            o.verdict.mark(),
            o.t_statistic,
            o.degrees_of_freedom,
            o.p_value
        );
    }
    println!("(w,t,l) = ({},{},{})", table.wins, table.ties, table.losses);
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config, report } => {
            let cfg = ExperimentConfig::from_path(&config).map_err(config_error)?;
            eprintln!("master_seed {}", cfg.master_seed);
            let cells = run_experiment(&cfg)?;
            print_summaries(&cells)?;
            write_report(&cells, &report)
        }
        Command::Compare {
            ours,
            theirs,
            published,
            alpha,
            json,
        } => {
            let table = match (published, ours, theirs) {
                (Some(alg), _, _) => {
                    if !BASELINE_NAMES.contains(&alg.as_str()) {
                        return Err(HarnessError::Config(format!(
                            "unknown published baseline {alg:?}, expected one of {BASELINE_NAMES:?}"
                        )));
                    }
                    wtl_table(
                        &comparison_moments(YI_NAME),
                        &comparison_moments(&alg),
                        alpha,
                    )?
                }
                (None, Some(ours), Some(theirs)) => wtl_table(
                    &moments(&load_results(&ours)?)?,
                    &moments(&load_results(&theirs)?)?,
                    alpha,
                )?,
                _ => {
                    return Err(HarnessError::Config(
                        "compare needs two result files or --published <ALGORITHM>".into(),
                    ))
                }
            };
            print_table(&table, json);
            Ok(())
        }
        Command::Timing { dims, yi } => {
            let params: YiParams = match yi {
                Some(p) => read_json(&p).map_err(config_error)?,
                None => YiParams::default(),
            };
            for d in dims {
                let report = measure_time_complexity(d, &params)?;
                if let Some(w) = &report.timer_warning {
                    eprintln!("warning: {w}");
                }
                println!(
                    "{}",
                    serde_json::to_string(&report).expect("report serializes")
                );
            }
            Ok(())
        }
        Command::Sweep { config } => {
            let cfg: SweepConfig = read_json(&config).map_err(config_error)?;
            for row in parameter_sweep(&cfg)? {
                println!(
                    "I_min={} I_max={} sigma={} (w,t,l) = ({},{},{})",
                    row.variant.i_min,
                    row.variant.i_max,
                    row.variant.sigma,
                    row.wins,
                    row.ties,
                    row.losses
                );
            }
            Ok(())
        }
        Command::Report { input, report } => {
            let cells = load_results(&input)?;
            if report.out.is_none() {
                return print_summaries(&cells);
            }
            write_report(&cells, &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}
