//! Command-line driver: replay traces, fuzz, run the Dijkstra workload and
//! check the rank-bound certificate.
//!
//! Exit codes: 0 success, 1 mismatch or audit failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use dkheap::audit;
use dkheap::harness::{
    dijkstra_bench, emit_stats, fuzz_campaign, parse_trace, run_differential, HarnessError, Mix,
};
use dkheap::{AuditLevel, HeapConfig, StatsReport, Strategy};

#[derive(Parser, Debug)]
#[command(
    name = "dkheap",
    version,
    about = "Worst-case decrease-key heap: replay, fuzz, bench, certify"
)]
struct Cli {
    /// Reduction strategy: amortized, wc1 or wc2.
    #[arg(long, global = true, default_value = "amortized")]
    strategy: Strategy,
    /// Audit level: off, boundary or paranoid.
    #[arg(long, global = true, default_value = "boundary")]
    audit: AuditLevel,
    /// Base RNG seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Operations per generated trace.
    #[arg(long, global = true, default_value_t = 10_000)]
    ops: usize,
    /// Write the final counters as key=value lines to this file.
    #[arg(long, global = true)]
    stats: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Replay a trace file against the oracle.
    Run { file: PathBuf },
    /// Generate random traces and replay each against the oracle.
    Fuzz {
        /// Number of traces (seeds `seed..seed+traces`).
        #[arg(long, default_value_t = 10)]
        traces: u64,
    },
    /// Dijkstra on a random connected graph, checked against a quadratic reference.
    Bench {
        #[arg(long, default_value_t = 10_000)]
        vertices: usize,
        #[arg(long, default_value_t = 100_000)]
        edges: usize,
    },
    /// Check the minimal-tree-size certificate for ranks up to `max-rank`.
    Cert {
        #[arg(long, default_value_t = 60)]
        max_rank: u32,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Parse { .. }
            | HarnessError::BadMix(_)
            | HarnessError::InvalidOp { .. } => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn write_stats(cli: &Cli, report: &StatsReport) -> Result<(), Failure> {
    if let Some(path) = &cli.stats {
        std::fs::write(path, emit_stats(report))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let config = HeapConfig::with_strategy(cli.strategy).audit(cli.audit);
    match &cli.command {
        Command::Run { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let trace = parse_trace(&text)?;
            let summary = run_differential(&trace, config)?;
            println!(
                "ok: {} ops, {} extracted, strategy {}",
                summary.ops,
                summary.extracted.len(),
                cli.strategy
            );
            write_stats(cli, &summary.stats)
        }
        Command::Fuzz { traces } => {
            let ops = cli.ops;
            let seeds: Vec<u64> = (cli.seed..cli.seed + traces).collect();
            let runs = fuzz_campaign(&seeds, ops, &Mix::default(), &[cli.strategy], config);
            let mut last = StatsReport::default();
            let mut failed = None;
            for run in runs {
                match run.result {
                    Ok(s) => last = s.stats,
                    Err(e) => {
                        eprintln!("seed {}: {e}", run.seed);
                        failed.get_or_insert(run.seed);
                    }
                }
            }
            write_stats(cli, &last)?;
            match failed {
                Some(seed) => Err(Failure::Check(format!(
                    "fuzzing failed (first failing seed {seed})"
                ))),
                None => {
                    println!("ok: {traces} traces x {ops} ops, strategy {}", cli.strategy);
                    Ok(())
                }
            }
        }
        Command::Bench { vertices, edges } => {
            if *vertices == 0 || *edges + 1 < *vertices {
                return Err(Failure::Usage(
                    "need vertices >= 1 and edges >= vertices - 1".into(),
                ));
            }
            let start = Instant::now();
            let report = dijkstra_bench(cli.seed, *vertices, *edges, config)?;
            println!(
                "ok: {} vertices, {} edges, {:.3}s, {} comparisons",
                report.vertices,
                report.edges,
                start.elapsed().as_secs_f64(),
                report.stats.comparisons
            );
            write_stats(cli, &report.stats)
        }
        Command::Cert { max_rank } => {
            let start = Instant::now();
            match audit::rank_bound_certificate(*max_rank) {
                Ok(true) => {
                    println!(
                        "ok: certificate holds for ranks <= {max_rank} ({:?})",
                        start.elapsed()
                    );
                    Ok(())
                }
                Ok(false) => Err(Failure::Check(format!(
                    "certificate fails for some rank <= {max_rank}"
                ))),
                Err(e) => Err(Failure::Usage(e.to_string())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
    }
}
