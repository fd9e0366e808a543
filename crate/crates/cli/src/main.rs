//! `dynspanner`: generate update traces, replay them through a spanner
//! algorithm with periodic audits, and report run metrics.
//!
//! Exit codes: 0 success, 1 audit failure or budget overrun, 2 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dynspanner::harness::{run, Algorithm, RunConfig, RunOutcome};
use dynspanner::trace::{generate_trace, Pattern, UpdateTrace};
use dynspanner::verify::AuditOptions;

#[derive(Parser)]
#[command(name = "dynspanner", version, about = "Dynamic spanner trace harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a trace with periodic audits and print metrics.
    Run {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Engine)]
        algorithm: AlgorithmArg,
        /// Audit every k external updates (0 = final audit only).
        /// Defaults to 1 for n <= 64, else 32.
        #[arg(long)]
        audit_every: Option<usize>,
        #[command(flatten)]
        audit: AuditArgs,
        /// Print only the single-line metrics summary.
        #[arg(long)]
        summary: bool,
    },
    /// Generate a trace and write it to stdout (or --out).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        deletions: usize,
        #[arg(long, value_enum, default_value_t = PatternArg::Random)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a trace through the engine and audit the final state only.
    Audit {
        #[arg(long)]
        trace: PathBuf,
        #[command(flatten)]
        audit: AuditArgs,
    },
}

#[derive(clap::Args)]
struct AuditArgs {
    /// Sample BFS sources for graphs above this many vertices.
    #[arg(long, default_value_t = AuditOptions::default().sample_above)]
    sample_above: usize,
    #[arg(long, default_value_t = AuditOptions::default().sample_sources)]
    sample_sources: usize,
    #[arg(long, default_value_t = AuditOptions::default().seed)]
    audit_seed: u64,
}

impl AuditArgs {
    fn options(&self) -> AuditOptions {
        AuditOptions {
            sample_above: self.sample_above,
            sample_sources: self.sample_sources,
            seed: self.audit_seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Engine,
    LowRecourse,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    Random,
    Adversarial,
}

const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            trace,
            algorithm,
            audit_every,
            audit,
            summary,
        } => {
            let algorithm = match algorithm {
                AlgorithmArg::Engine => Algorithm::Engine,
                AlgorithmArg::LowRecourse => Algorithm::LowRecourse,
            };
            let config = RunConfig {
                algorithm,
                audit_every,
                audit: audit.options(),
            };
            replay(&trace, &config, summary)
        }
        Command::Audit { trace, audit } => {
            let config = RunConfig {
                algorithm: Algorithm::Engine,
                audit_every: Some(0),
                audit: audit.options(),
            };
            replay(&trace, &config, false)
        }
        Command::Gen {
            n,
            m,
            deletions,
            pattern,
            seed,
            out,
        } => {
            let pattern = match pattern {
                PatternArg::Random => Pattern::Random,
                PatternArg::Adversarial => Pattern::Adversarial,
            };
            let trace = match generate_trace(n, m, deletions, pattern, seed) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(INPUT_ERROR);
                }
            };
            let text = trace.to_string();
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(INPUT_ERROR);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
    }
}

fn replay(path: &PathBuf, config: &RunConfig, summary_only: bool) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let trace = match UpdateTrace::parse(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let outcome = match run(&trace, config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    report(&outcome, summary_only);
    ExitCode::from(outcome.exit_code() as u8)
}

fn report(outcome: &RunOutcome, summary_only: bool) {
    if summary_only {
        println!("{}", outcome.metrics.summary_line());
        return;
    }
    // Failed intermediate audits are printed in full; passing ones are summarised.
    for point in &outcome.audits {
        if !point.report.passed() {
            println!("# audit at step {} FAILED", point.step);
            print!("{}", point.report);
        }
    }
    if let Some(last) = outcome.audits.last() {
        println!("# final audit (step {}, {} audits total)", last.step, outcome.audits.len());
        print!("{}", last.report);
    }
    println!("# metrics");
    print!("{}", outcome.metrics);
    println!("summary {}", outcome.metrics.summary_line());
    if outcome.metrics.budget_exceeded {
        println!("# trace exceeded its declared budget; bounds are not guaranteed");
    }
}
