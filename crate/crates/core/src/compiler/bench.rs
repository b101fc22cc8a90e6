use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::{compile_with, CompileError, CompileOptions, Strategy};
use crate::cnf::Cnf;
use crate::tseitin::{cycle, grid, tseitin_cnf, Charges};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `n × n` grid, one odd charge.
    GridUnsat,
    /// `n × n` grid, all charges zero.
    GridSat,
    CycleUnsat,
    CycleSat,
}

impl Family {
    pub fn instance(self, n: usize) -> Result<Cnf, CompileError> {
        let g = match self {
            Family::GridUnsat => grid(n, n, Charges::TargetUnsat),
            Family::GridSat => grid(n, n, Charges::AllZero),
            Family::CycleUnsat => cycle(n, Charges::TargetUnsat),
            Family::CycleSat => cycle(n, Charges::AllZero),
        }
        .map_err(|e| CompileError::Instance(e.to_string()))?;
        Ok(tseitin_cnf(&g))
    }

    pub fn satisfiable(self) -> bool {
        matches!(self, Family::GridSat | Family::CycleSat)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GridUnsat => "grid-unsat",
            Family::GridSat => "grid-sat",
            Family::CycleUnsat => "cycle-unsat",
            Family::CycleSat => "cycle-sat",
        })
    }
}

impl FromStr for Family {
    type Err = CompileError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid-unsat" => Ok(Family::GridUnsat),
            "grid-sat" => Ok(Family::GridSat),
            "cycle-unsat" => Ok(Family::CycleUnsat),
            "cycle-sat" => Ok(Family::CycleSat),
            _ => Err(CompileError::UnknownName {
                what: "family",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub strategy: String,
    pub seed: u64,
    pub max_intermediate: usize,
    pub final_size: usize,
    pub aborted: bool,
    pub millis: u128,
}

impl BenchRow {
    pub const HEADER: [&'static str; 8] = [
        "family",
        "n",
        "strategy",
        "seed",
        "max_intermediate",
        "final_size",
        "aborted",
        "millis",
    ];
}

/// One compilation per `n × strategy`, run on up to `jobs` threads. Rows come
/// back ordered by `n`, then by the position of the strategy.
pub fn benchmark(
    family: Family,
    ns: &[usize],
    strategies: &[Strategy],
    opts: &CompileOptions,
    jobs: usize,
) -> Result<Vec<BenchRow>, CompileError> {
    let mut inputs = Vec::with_capacity(ns.len());
    for &n in ns {
        inputs.push((n, family.instance(n)?));
    }
    let runs: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|i| (0..strategies.len()).map(move |j| (i, j)))
        .collect();
    let one = |&(i, j): &(usize, usize)| -> Result<BenchRow, CompileError> {
        let (n, f) = &inputs[i];
        let s = &strategies[j];
        let start = Instant::now();
        let t = compile_with(f, s, opts)?;
        Ok(BenchRow {
            family: family.to_string(),
            n: *n,
            strategy: s.to_string(),
            seed: opts.seed,
            max_intermediate: t.max_intermediate(),
            final_size: t.final_size(),
            aborted: t.aborted,
            millis: start.elapsed().as_millis(),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    // collect keeps the input order, so rows are deterministic
    pool.install(|| runs.par_iter().map(one).collect())
}
