mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::Exit;

#[derive(Parser, Debug)]
#[command(name = "sdnnf", version, about = "Compile CNFs bottom-up into structured DNNF and study Tseitin refutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a charged graph and its Tseitin CNF.
    Gen {
        /// grid, cycle, complete, path or random-regular
        family: String,
        /// grid: ROWS COLS; random-regular: N D; otherwise N
        params: Vec<usize>,
        /// all-zero, target-unsat, single:V or random:SEED
        #[arg(long, default_value = "all-zero")]
        charges: String,
        /// Required by random-regular.
        #[arg(long)]
        seed: Option<u64>,
        /// Output prefix; writes PREFIX.graph and PREFIX.cnf.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compile a DIMACS CNF and print a size summary.
    Compile {
        cnf: PathBuf,
        /// linear, balanced or random:SEED
        #[arg(long, default_value = "linear")]
        vtree: String,
        /// input, random:SEED, greedy_min_size or group_by_vertex
        #[arg(long, default_value = "input")]
        clauses: String,
        /// sequential, balanced_tree or greedy_min_pair
        #[arg(long, default_value = "sequential")]
        apply: String,
        /// Edge ceiling for each apply result.
        #[arg(long, env = "SDNNF_LIMIT")]
        limit: Option<usize>,
        /// Directory for the trace files.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Check every step of the trace.
        #[arg(long)]
        validate: bool,
        /// Seed for sampled equivalence checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Partition a graph and report verified treewidths.
    Partition {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        seed: u64,
        /// Write the blocks to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a Tseitin family over a range of sizes and strategies.
    Bench {
        /// grid-unsat, grid-sat, cycle-unsat or cycle-sat
        family: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Comma-separated `shape/clauses/apply` names; the default set when omitted.
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, env = "SDNNF_LIMIT")]
        limit: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Extract a satisfiable Tseitin subformula from a refutation trace.
    Witness {
        #[arg(long)]
        graph: PathBuf,
        /// Trace directory or its trace.txt.
        #[arg(long)]
        trace: PathBuf,
        /// Must match the trace's input when given.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Seed for the partition search.
        #[arg(long)]
        seed: u64,
    },
    /// Check a circuit against a CNF, or every step of a trace.
    Check {
        #[arg(long, required_unless_present = "trace", requires = "nnf")]
        cnf: Option<PathBuf>,
        #[arg(long, requires = "cnf")]
        nnf: Option<PathBuf>,
        /// Defaults to the file named in the circuit's `c vtree` line.
        #[arg(long)]
        vtree: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["cnf", "nnf", "vtree"])]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Theorem4,
    Lemma4,
    Tripartition,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.downcast_ref::<Exit>().map_or(Exit::USAGE, |x| x.code);
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
