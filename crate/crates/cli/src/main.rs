//! `equiwide` command line: single runs and multi-seed benchmark batches.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use equiwide::cover::{SubObjective, DEFAULT_ENUM_LIMIT};
use equiwide::homoset::DEFAULT_CLIQUE_CAP;
use equiwide::io::write_labels_csv;
use equiwide::pipeline::{
    bench, bench_exit_code, run, Algorithm, BenchSpec, InputKind, RunConfig, DEFAULT_DTW_WINDOW, DEFAULT_TIME_LIMIT_S,
};
use equiwide::WidthKind;

#[derive(Parser)]
#[command(
    name = "equiwide",
    version,
    about = "Fewest clusters under a diameter or radius threshold"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster one dataset and print a JSON report.
    Run(RunArgs),
    /// Run a batch of configurations over several seeds and print a JSON table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "points-csv", value_parser = parse::<InputKind>)]
    input_kind: InputKind,
    #[arg(long, default_value = "diameter", value_parser = parse::<WidthKind>)]
    constraint: WidthKind,
    #[arg(long)]
    threshold: f64,
    #[arg(long, default_value = "eqw-exact", value_parser = parse::<Algorithm>)]
    algorithm: Algorithm,
    #[arg(long, default_value = "none", value_parser = parse::<SubObjective>)]
    subobjective: SubObjective,
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_S)]
    time_limit_s: f64,
    /// Shuffle element order with this seed before solving.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CLIQUE_CAP)]
    clique_cap: usize,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
    #[arg(long, default_value_t = DEFAULT_DTW_WINDOW)]
    dtw_window: usize,
    /// 0-based column holding class labels (points input only).
    #[arg(long)]
    label_col: Option<usize>,
    /// Keep radius balls that are contained in other balls.
    #[arg(long)]
    no_prune: bool,
    /// Write `element,cluster` rows here.
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON file: {"seeds": [...], "runs": [RunConfig, ...]}.
    #[arg(long)]
    config: PathBuf,
    /// Override the seed list with 0..N.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr<Err = equiwide::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: equiwide::Error| e.to_string())
}

fn emit(json: String, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run_cmd(a: RunArgs) -> anyhow::Result<i32> {
    let cfg = RunConfig {
        input: a.input,
        input_kind: a.input_kind,
        constraint: a.constraint,
        threshold: a.threshold,
        algorithm: a.algorithm,
        subobjective: a.subobjective,
        time_limit_s: a.time_limit_s,
        seed: a.seed,
        clique_cap: a.clique_cap,
        enum_limit: a.enum_limit,
        dtw_window: a.dtw_window,
        label_col: a.label_col,
        prune_balls: !a.no_prune,
    };
    let report = run(&cfg)?;
    if let Some(p) = &a.labels_out {
        write_labels_csv(p, &report.labels)?;
    }
    emit(serde_json::to_string_pretty(&report)?, a.report_out.as_ref())?;
    Ok(report.exit_code())
}

fn bench_cmd(a: BenchArgs) -> anyhow::Result<i32> {
    let mut spec = BenchSpec::from_json_file(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    if let Some(n) = a.seeds {
        spec.seeds = (0..n).collect();
    }
    let rows = bench(&spec);
    emit(serde_json::to_string_pretty(&rows)?, a.report_out.as_ref())?;
    Ok(bench_exit_code(&rows))
}

fn main() -> ExitCode {
    // clap exits 2 on usage errors, which is reserved for unproven results
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(a) => run_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
