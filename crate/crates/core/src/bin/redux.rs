use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use redux_core::gen::{random_cnf, random_graph, random_weighted_graph};
use redux_core::model::{graph_to_text, Mode};
use redux_core::runner::{exit, run_reduction, RunRequest};
use redux_core::threesum::gen_tripartite_instance;
use redux_core::verify::{run_suite, Suite};

/// Fine-grained reductions to dynamic graph problems, checked against
/// brute-force oracles.
#[derive(Parser)]
#[command(name = "redux", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one reduction and print its JSON report.
    Run {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        input: PathBuf,
        /// full, inc or dec; defaults per reduction.
        #[arg(long)]
        mode: Option<Mode>,
        /// Split fraction p/q for the SAT reductions.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        oracle_check: bool,
        /// Record wall-clock time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run randomized property suites and print a JSON summary.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Print a random instance.
    Gen {
        #[command(subcommand)]
        what: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// DIMACS CNF with up to 4n clauses of width at most 3.
    Cnf {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Edge-list graph with edge probability p.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long)]
        directed: bool,
        /// Random weights in 1..=W.
        #[arg(long)]
        max_weight: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tripartite instance for the 3SUM-side listing.
    Tripartite {
        #[arg(long)]
        n_c: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => code(exit::OK),
                _ => code(exit::USAGE),
            };
        }
    };
    match cli.command {
        Command::Run {
            reduction,
            input,
            mode,
            delta,
            seed,
            oracle_check,
            timing,
        } => {
            let text = match std::fs::read_to_string(&input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", input.display());
                    return code(exit::FAILURE);
                }
            };
            let req = RunRequest {
                reduction,
                input: text,
                mode,
                delta,
                seed,
                oracle_check,
                timing,
            };
            match run_reduction(&req) {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
                    if report.mismatch() {
                        eprintln!("answer differs from the oracle");
                    }
                    code(report.exit_code())
                }
                Err(e) => {
                    eprintln!("{e}");
                    code(e.exit_code())
                }
            }
        }
        Command::Verify {
            suite,
            trials,
            seed,
            max_n,
        } => {
            let suite: Suite = suite.parse().expect("restricted by clap");
            let summary = run_suite(suite, trials, seed, max_n);
            println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
            code(if summary.all_passed { exit::OK } else { exit::MISMATCH })
        }
        Command::Gen { what } => gen(what),
    }
}

fn gen(what: GenKind) -> ExitCode {
    let text = match what {
        GenKind::Cnf { n, seed } => random_cnf(&mut ChaCha8Rng::seed_from_u64(seed), n).to_dimacs(),
        GenKind::Graph {
            n,
            p,
            directed,
            max_weight,
            seed,
        } => {
            if !(0.0..=1.0).contains(&p) || max_weight == Some(0) {
                eprintln!("need 0 <= p <= 1 and a positive weight bound");
                return code(exit::USAGE);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = match max_weight {
                Some(w) => random_weighted_graph(&mut rng, n, p, w, directed),
                None => random_graph(&mut rng, n, p, directed),
            };
            graph_to_text(&g)
        }
        GenKind::Tripartite {
            n_c,
            r,
            density,
            seed,
        } => match gen_tripartite_instance(n_c, r, density, seed) {
            Ok(inst) => inst.to_text(),
            Err(e) => {
                eprintln!("{e}");
                return code(exit::FAILURE);
            }
        },
    };
    print!("{text}");
    code(exit::OK)
}
