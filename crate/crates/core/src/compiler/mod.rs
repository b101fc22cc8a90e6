//! Bottom-up compilation of CNF formulas into str-DNNF, recorded as traces.
//!
//! A trace is a sequence of circuits. Each one is a compiled clause, the
//! conjunction of two earlier circuits over the same vtree, or an earlier
//! circuit re-expressed over another vtree.

mod bench;
mod io;
mod trace;
mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Assignment, Cnf, Var};
use crate::oracle::{self, MAX_VARS};
use crate::strdnnf::{apply_and_limited, compile_clause, restructure, StrDnnf, StrDnnfError};
use crate::vtree::{Shape, Vtree, VtreeError};

pub use bench::{benchmark, BenchRow, Family};
pub use io::{load_trace, parse_trace_header, save_trace, TraceFileError, TraceHeader};
pub use trace::{condition_trace, validate_trace, TraceViolation};
pub use witness::{
    extract_satisfiable_witness, reduce_to_2connected, refutation_report, Reduction, ReductionStep, RefutationReport,
    Side, Witness, WitnessCase, WitnessError, WITNESS_CONSTANT,
};

/// Default edge ceiling per circuit.
pub const DEFAULT_LIMIT: usize = 1 << 22;
/// Sampled assignments for the final check beyond the oracle limit.
pub const FINAL_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Index into the clauses of the input.
    Clause(usize),
    /// A clause satisfied by conditioning; the circuit is the constant 1.
    Satisfied,
    Apply(usize, usize),
    /// Parent step and the id of the new vtree.
    Restructure(usize, usize),
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    pub kind: StepKind,
    pub circuit: StrDnnf,
    pub size: usize,
    /// Index into the trace's vtree table.
    pub vtree: usize,
    /// Input clauses this circuit was built from.
    pub support: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    Exact,
    Sampled(usize),
}

#[derive(Debug, Clone)]
pub struct CompilationTrace {
    pub input: Cnf,
    pub steps: Vec<TraceStep>,
    pub vtrees: Vec<Arc<Vtree>>,
    pub aborted: bool,
    /// How the final circuit was checked against the input, if it was.
    pub verified: Option<Verification>,
}

impl CompilationTrace {
    pub fn new(input: Cnf, vtree: Arc<Vtree>) -> CompilationTrace {
        CompilationTrace {
            input,
            steps: Vec::new(),
            vtrees: vec![vtree],
            aborted: false,
            verified: None,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<&StrDnnf> {
        self.steps.last().map(|s| &s.circuit)
    }

    /// `max_i |Σ_i|`.
    pub fn max_intermediate(&self) -> usize {
        self.steps.iter().map(|s| s.size).max().unwrap_or(0)
    }

    pub fn final_size(&self) -> usize {
        self.steps.last().map_or(0, |s| s.size)
    }

    /// Largest total size of circuits that exist and are still needed, a
    /// circuit being needed until its last use as a parent. The last step
    /// stays live.
    pub fn peak_live(&self) -> usize {
        let n = self.steps.len();
        let mut last_use: Vec<usize> = (0..n).collect();
        for (i, s) in self.steps.iter().enumerate() {
            for p in parents(s.kind) {
                last_use[p] = last_use[p].max(i);
            }
        }
        if n > 0 {
            last_use[n - 1] = n;
        }
        let mut freed: BTreeMap<usize, usize> = BTreeMap::new();
        for (j, &u) in last_use.iter().enumerate() {
            *freed.entry(u).or_default() += self.steps[j].size;
        }
        let (mut live, mut peak) = (0, 0);
        for (i, s) in self.steps.iter().enumerate() {
            live += s.size;
            peak = peak.max(live);
            live -= freed.get(&i).copied().unwrap_or(0);
        }
        peak
    }

    /// True when the last circuit is unsatisfiable.
    pub fn is_refutation(&self) -> bool {
        !self.aborted && self.last().is_some_and(|c| !c.is_satisfiable())
    }

    fn vtree_id(&mut self, vt: &Arc<Vtree>) -> usize {
        if let Some(i) = self.vtrees.iter().position(|v| Arc::ptr_eq(v, vt)) {
            return i;
        }
        self.vtrees.push(vt.clone());
        self.vtrees.len() - 1
    }

    pub fn push_clause(&mut self, idx: usize, vtree: usize) -> Result<usize, CompileError> {
        let c = self.input.clauses().get(idx).ok_or(CompileError::NoSuchClause(idx))?;
        let vt = self.vtrees[vtree].clone();
        let circuit = compile_clause(c, &vt)?;
        Ok(self.push(StepKind::Clause(idx), circuit, vtree, BTreeSet::from([idx])))
    }

    pub fn push_apply(&mut self, j: usize, k: usize, limit: usize) -> Result<usize, CompileError> {
        let n = self.steps.len();
        if j >= n || k >= n {
            return Err(CompileError::NoSuchStep(j.max(k)));
        }
        let (a, b) = (&self.steps[j], &self.steps[k]);
        if a.vtree != b.vtree {
            return Err(CompileError::Circuit(StrDnnfError::VtreeMismatch));
        }
        let circuit = apply_and_limited(&a.circuit, &b.circuit, limit)?;
        let support = a.support.union(&b.support).copied().collect();
        let vt = a.vtree;
        Ok(self.push(StepKind::Apply(j, k), circuit, vt, support))
    }

    /// Re-expresses step `j` over `target`, adding it to the vtree table.
    pub fn push_restructure(&mut self, j: usize, target: &Arc<Vtree>) -> Result<usize, CompileError> {
        let parent = self.steps.get(j).ok_or(CompileError::NoSuchStep(j))?;
        let circuit = restructure(&parent.circuit, target)?;
        let support = parent.support.clone();
        let id = self.vtree_id(target);
        Ok(self.push(StepKind::Restructure(j, id), circuit, id, support))
    }

    fn push(&mut self, kind: StepKind, circuit: StrDnnf, vtree: usize, support: BTreeSet<usize>) -> usize {
        let size = circuit.size();
        self.steps.push(TraceStep {
            kind,
            circuit,
            size,
            vtree,
            support,
        });
        self.steps.len() - 1
    }
}

pub(crate) fn parents(k: StepKind) -> Vec<usize> {
    match k {
        StepKind::Apply(j, k) => vec![j, k],
        StepKind::Restructure(j, _) => vec![j],
        _ => Vec::new(),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("the formula has no clauses")]
    EmptyFormula,
    #[error("the formula has no variables")]
    NoVariables,
    #[error("clause {0} does not exist")]
    NoSuchClause(usize),
    #[error("step {0} does not exist")]
    NoSuchStep(usize),
    #[error(transparent)]
    Vtree(#[from] VtreeError),
    #[error(transparent)]
    Circuit(#[from] StrDnnfError),
    #[error("final circuit differs from the input on {0}")]
    NotEquivalent(Assignment),
    #[error("cannot build instance: {0}")]
    Instance(String),
    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseOrder {
    Input,
    Random(u64),
    /// Smallest compiled clause first.
    GreedyMinSize,
    /// Clauses over the same variable set are conjoined together first.
    GroupByVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApplyOrder {
    Sequential,
    BalancedTree,
    /// Conjoin the two live circuits with the smallest size product.
    GreedyMinPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub shape: Shape,
    pub clause_order: ClauseOrder,
    pub apply_order: ApplyOrder,
}

impl Strategy {
    pub fn new(shape: Shape, clause_order: ClauseOrder, apply_order: ApplyOrder) -> Strategy {
        Strategy {
            shape,
            clause_order,
            apply_order,
        }
    }

    /// The strategies `bench` runs when none are given.
    pub fn default_set() -> Vec<Strategy> {
        use ApplyOrder::*;
        use ClauseOrder::*;
        vec![
            Strategy::new(Shape::Linear, Input, Sequential),
            Strategy::new(Shape::Balanced, Input, BalancedTree),
            Strategy::new(Shape::Balanced, GroupByVertex, GreedyMinPair),
            Strategy::new(Shape::Linear, GreedyMinSize, GreedyMinPair),
            Strategy::new(Shape::Random(1), Random(1), Sequential),
        ]
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::new(Shape::Linear, ClauseOrder::Input, ApplyOrder::Sequential)
    }
}

fn unknown(what: &'static str, name: &str) -> CompileError {
    CompileError::UnknownName {
        what,
        name: name.to_string(),
    }
}

fn seeded(s: &str, prefix: &str) -> Option<Result<u64, ()>> {
    let rest = s.strip_prefix(prefix)?;
    Some(rest.strip_prefix(':').ok_or(()).and_then(|x| x.parse().map_err(|_| ())))
}

/// `linear`, `balanced` or `random:<seed>`.
pub fn parse_shape(s: &str) -> Result<Shape, CompileError> {
    match s {
        "linear" => Ok(Shape::Linear),
        "balanced" => Ok(Shape::Balanced),
        _ => match seeded(s, "random") {
            Some(Ok(seed)) => Ok(Shape::Random(seed)),
            _ => Err(unknown("vtree shape", s)),
        },
    }
}

pub fn shape_name(s: Shape) -> String {
    match s {
        Shape::Linear => "linear".into(),
        Shape::Balanced => "balanced".into(),
        Shape::Random(seed) => format!("random:{seed}"),
    }
}

impl FromStr for ClauseOrder {
    type Err = CompileError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "input" => Ok(ClauseOrder::Input),
            "greedy_min_size" => Ok(ClauseOrder::GreedyMinSize),
            "group_by_vertex" => Ok(ClauseOrder::GroupByVertex),
            _ => match seeded(s, "random") {
                Some(Ok(seed)) => Ok(ClauseOrder::Random(seed)),
                _ => Err(unknown("clause order", s)),
            },
        }
    }
}

impl fmt::Display for ClauseOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseOrder::Input => write!(f, "input"),
            ClauseOrder::Random(seed) => write!(f, "random:{seed}"),
            ClauseOrder::GreedyMinSize => write!(f, "greedy_min_size"),
            ClauseOrder::GroupByVertex => write!(f, "group_by_vertex"),
        }
    }
}

impl FromStr for ApplyOrder {
    type Err = CompileError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(ApplyOrder::Sequential),
            "balanced_tree" => Ok(ApplyOrder::BalancedTree),
            "greedy_min_pair" => Ok(ApplyOrder::GreedyMinPair),
            _ => Err(unknown("apply order", s)),
        }
    }
}

impl fmt::Display for ApplyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApplyOrder::Sequential => "sequential",
            ApplyOrder::BalancedTree => "balanced_tree",
            ApplyOrder::GreedyMinPair => "greedy_min_pair",
        })
    }
}

/// `shape/clause-order/apply-order`, e.g. `linear/input/sequential`.
impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", shape_name(self.shape), self.clause_order, self.apply_order)
    }
}

impl FromStr for Strategy {
    type Err = CompileError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('/').collect();
        let [shape, clauses, apply] = parts[..] else {
            return Err(unknown("strategy", s));
        };
        Ok(Strategy::new(parse_shape(shape)?, clauses.parse()?, apply.parse()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Edge ceiling per apply result.
    pub limit: usize,
    pub samples: usize,
    pub seed: u64,
    /// Skip the final equivalence check.
    pub skip_check: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            limit: DEFAULT_LIMIT,
            samples: FINAL_SAMPLES,
            seed: 0,
            skip_check: false,
        }
    }
}

pub fn compile(f: &Cnf, s: &Strategy) -> Result<CompilationTrace, CompileError> {
    compile_with(f, s, &CompileOptions::default())
}

/// Groups of clause indices; each group is conjoined on its own first.
fn units(f: &Cnf, order: ClauseOrder, vt: &Arc<Vtree>) -> Result<Vec<Vec<usize>>, CompileError> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    Ok(match order {
        ClauseOrder::Input => idx.into_iter().map(|i| vec![i]).collect(),
        ClauseOrder::Random(seed) => {
            idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            idx.into_iter().map(|i| vec![i]).collect()
        }
        ClauseOrder::GreedyMinSize => {
            let mut sizes = Vec::with_capacity(idx.len());
            for c in f.clauses() {
                sizes.push(compile_clause(c, vt)?.size());
            }
            idx.sort_by_key(|&i| sizes[i]);
            idx.into_iter().map(|i| vec![i]).collect()
        }
        ClauseOrder::GroupByVertex => {
            let mut groups: Vec<(BTreeSet<Var>, Vec<usize>)> = Vec::new();
            for (i, c) in f.clauses().iter().enumerate() {
                let vars: BTreeSet<Var> = c.vars().collect();
                match groups.iter_mut().find(|(v, _)| *v == vars) {
                    Some((_, g)) => g.push(i),
                    None => groups.push((vars, vec![i])),
                }
            }
            groups.into_iter().map(|(_, g)| g).collect()
        }
    })
}

fn unit_step(t: &mut CompilationTrace, unit: &[usize], limit: usize) -> Result<usize, CompileError> {
    let mut acc = t.push_clause(unit[0], 0)?;
    for &i in &unit[1..] {
        let c = t.push_clause(i, 0)?;
        acc = t.push_apply(acc, c, limit)?;
    }
    Ok(acc)
}

fn run(t: &mut CompilationTrace, units: &[Vec<usize>], order: ApplyOrder, limit: usize) -> Result<(), CompileError> {
    match order {
        ApplyOrder::Sequential => {
            let mut acc = unit_step(t, &units[0], limit)?;
            for u in &units[1..] {
                let s = unit_step(t, u, limit)?;
                acc = t.push_apply(acc, s, limit)?;
            }
        }
        ApplyOrder::BalancedTree => {
            let mut level = Vec::with_capacity(units.len());
            for u in units {
                level.push(unit_step(t, u, limit)?);
            }
            while level.len() > 1 {
                let mut next = Vec::with_capacity(level.len().div_ceil(2));
                for pair in level.chunks(2) {
                    next.push(match *pair {
                        [a, b] => t.push_apply(a, b, limit)?,
                        [a] => a,
                        _ => unreachable!(),
                    });
                }
                level = next;
            }
        }
        ApplyOrder::GreedyMinPair => {
            let mut live = Vec::with_capacity(units.len());
            for u in units {
                live.push(unit_step(t, u, limit)?);
            }
            while live.len() > 1 {
                let mut best = (usize::MAX, 0, 1);
                for x in 0..live.len() {
                    for y in x + 1..live.len() {
                        let p = t.steps[live[x]].size.max(1).saturating_mul(t.steps[live[y]].size.max(1));
                        if p < best.0 {
                            best = (p, x, y);
                        }
                    }
                }
                let (_, x, y) = best;
                let s = t.push_apply(live[x], live[y], limit)?;
                live.remove(y);
                live[x] = s;
            }
        }
    }
    Ok(())
}

/// Compiles `f` under `s`. Exceeding the edge ceiling is not an error: the
/// partial trace comes back with `aborted` set.
pub fn compile_with(f: &Cnf, s: &Strategy, opts: &CompileOptions) -> Result<CompilationTrace, CompileError> {
    if f.is_empty() {
        return Err(CompileError::EmptyFormula);
    }
    let vars: Vec<Var> = f.universe().iter().copied().collect();
    if vars.is_empty() {
        return Err(CompileError::NoVariables);
    }
    let vt = Arc::new(Vtree::build(&vars, s.shape)?);
    let units = units(f, s.clause_order, &vt)?;
    let mut t = CompilationTrace::new(f.clone(), vt);
    match run(&mut t, &units, s.apply_order, opts.limit) {
        Ok(()) => {}
        Err(CompileError::Circuit(StrDnnfError::LimitExceeded { .. })) => {
            t.aborted = true;
            return Ok(t);
        }
        Err(e) => return Err(e),
    }
    if !opts.skip_check {
        let last = t.last().unwrap();
        if let Some(a) = oracle::agree(last, f, opts.samples, opts.seed) {
            return Err(CompileError::NotEquivalent(a));
        }
        let mut u = f.var_set();
        u.extend(last.vars());
        t.verified = Some(if u.len() <= MAX_VARS {
            Verification::Exact
        } else {
            Verification::Sampled(opts.samples)
        });
    }
    Ok(t)
}
