//! Refutation analysis: reduction to a 2-connected graph and extraction of a
//! satisfiable Tseitin formula from the operands of the critical apply.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{condition_trace, CompilationTrace, StepKind, Verification, FINAL_SAMPLES};
use crate::cnf::{Assignment, Clause, Cnf, Var};
use crate::oracle::{agree, MAX_VARS};
use crate::partition::{treewidth_of, PartitionError};
use crate::strdnnf::{apply_and, compile_parity, StrDnnf, StrDnnfError};
use crate::tseitin::{
    bodlaender_component, condition_charges, incomplete_constraints, is_satisfiable_criterion, present_clauses, solve,
    tseitin_cnf, vertex_clauses, ChargedGraph,
};

/// `c` in `|Σ*| ≤ c·|Σℓ|·|Σr|`.
pub const WITNESS_CONSTANT: usize = 6;
/// Largest cut whose assignments are enumerated.
const MAX_CUT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("not a refutation: {0}")]
    NotARefutation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no assignment to the cut variables works: {0}")]
    NoAssignment(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Circuit(#[from] StrDnnfError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn tseitin_err(e: crate::tseitin::TseitinError) -> WitnessError {
    WitnessError::Verification(e.to_string())
}

#[derive(Debug, Clone)]
pub struct RefutationReport {
    pub trace: CompilationTrace,
    pub max_intermediate: usize,
    /// The first step whose circuit is unsatisfiable.
    pub step: usize,
    pub left: usize,
    pub right: usize,
    pub left_size: usize,
    pub right_size: usize,
}

/// Locates the apply that first produces an unsatisfiable circuit. Its two
/// operands are satisfiable.
pub fn refutation_report(t: &CompilationTrace) -> Result<RefutationReport, WitnessError> {
    if t.aborted {
        return Err(WitnessError::NotARefutation("the trace was aborted".into()));
    }
    if !t.is_refutation() {
        return Err(WitnessError::NotARefutation("the final circuit is satisfiable".into()));
    }
    let step = t.steps.iter().position(|s| !s.circuit.is_satisfiable()).unwrap();
    let StepKind::Apply(left, right) = t.steps[step].kind else {
        return Err(WitnessError::NotARefutation(format!(
            "step {step} is the first unsatisfiable circuit but is not an apply"
        )));
    };
    Ok(RefutationReport {
        trace: t.clone(),
        max_intermediate: t.max_intermediate(),
        step,
        left,
        right,
        left_size: t.steps[left].size,
        right_size: t.steps[right].size,
    })
}

fn clause_set(f: &Cnf) -> BTreeSet<&Clause> {
    f.clauses().iter().collect()
}

fn is_tseitin_of(f: &Cnf, g: &ChargedGraph) -> bool {
    let t = tseitin_cnf(g);
    clause_set(f) == clause_set(&t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    /// The 1-separator, as a vertex of the input graph.
    pub separator: usize,
    /// Vertices cut off, as vertices of the input graph.
    pub removed: BTreeSet<usize>,
    /// Cut edges plus a satisfying assignment of the removed side.
    pub assignment: Assignment,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub graph: ChargedGraph,
    /// Input-graph vertex of each vertex of `graph`.
    pub vertices: Vec<usize>,
    pub trace: CompilationTrace,
    pub steps: Vec<ReductionStep>,
}

/// While the graph has a 1-separator `u`, cut off one component of `G − u`
/// that does not carry the treewidth, fix the cut edges so that the cut-off
/// side is satisfiable, extend by one of its models and condition the
/// trace. The result refutes the Tseitin formula of a 2-connected subgraph
/// with the same treewidth.
pub fn reduce_to_2connected(g: &ChargedGraph, t: &CompilationTrace) -> Result<Reduction, WitnessError> {
    if !g.is_connected() {
        return Err(WitnessError::Precondition("graph is not connected".into()));
    }
    if is_satisfiable_criterion(g) {
        return Err(WitnessError::NotARefutation("the Tseitin formula is satisfiable".into()));
    }
    if !is_tseitin_of(&t.input, g) {
        return Err(WitnessError::NotARefutation("trace input is not the Tseitin formula of the graph".into()));
    }
    if !t.is_refutation() {
        return Err(WitnessError::NotARefutation("the final circuit is satisfiable".into()));
    }
    let mut cur = g.clone();
    let mut ids: Vec<usize> = g.vertices().collect();
    let mut trace = t.clone();
    let mut steps = Vec::new();
    while let Some(&u) = cur.one_separators().first() {
        let keep = bodlaender_component(&cur, u, |s| treewidth_of(&cur, s))
            .map_err(|e| WitnessError::Verification(e.to_string()))?;
        let b = cur
            .components_minus(u)
            .into_iter()
            .find(|c| *c != keep)
            .expect("a separator leaves at least two components");
        let cut = cur.edges_between(&BTreeSet::from([u]), &b);
        let mut a = Assignment::from_pairs(cut.iter().map(|&e| (cur.edge(e).var, false)));
        if b.iter().fold(false, |acc, &v| acc ^ cur.charge(v)) {
            a.set(cur.edge(cut[0]).var, true);
        }
        let cond = condition_charges(&cur, &a).map_err(tseitin_err)?;
        let model = solve(&cond.induced(&b).0)
            .ok_or_else(|| WitnessError::Verification("cut-off side is unsatisfiable".into()))?;
        let full = a.union(&model);
        trace = condition_trace(&trace, &full);
        let rest: BTreeSet<usize> = cur.vertices().filter(|v| !b.contains(v)).collect();
        let (next, old) = cond.induced(&rest);
        steps.push(ReductionStep {
            separator: ids[u],
            removed: b.iter().map(|&v| ids[v]).collect(),
            assignment: full,
        });
        ids = old.iter().map(|&i| ids[i]).collect();
        cur = next;
        if !is_tseitin_of(&trace.input, &cur) || !trace.is_refutation() {
            return Err(WitnessError::Verification("conditioned trace does not refute the reduced formula".into()));
        }
    }
    Ok(Reduction {
        graph: cur,
        vertices: ids,
        trace,
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// One operand misses at most two constraints of `B`.
    One,
    /// Both operands miss at least three constraints of `B`.
    Two,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub side: Side,
    pub case: WitnessCase,
    /// Case 1 applied but no cut assignment made `B` satisfiable, so the
    /// two-operand construction was searched instead.
    pub fallback: bool,
    /// `Σ*`.
    pub circuit: StrDnnf,
    /// `G_side` with the conditioned charges.
    pub graph: ChargedGraph,
    pub vertices: BTreeSet<usize>,
    /// Assignment to the cut variables.
    pub assignment: Assignment,
    /// Constraints of `B` incomplete in each operand.
    pub incomplete_left: BTreeSet<usize>,
    pub incomplete_right: BTreeSet<usize>,
    /// Parity circuits conjoined in Case 1.
    pub parity_conjoins: usize,
    pub left_size: usize,
    pub right_size: usize,
    pub size: usize,
    /// The side is satisfiable according to the parity of the cut
    /// assignment and the side's charges.
    pub predicted_satisfiable: bool,
    pub satisfiable: bool,
    pub verification: Verification,
}

impl Witness {
    pub fn bound(&self) -> usize {
        WITNESS_CONSTANT * self.left_size.max(1) * self.right_size.max(1)
    }
    pub fn within_bound(&self) -> bool {
        self.size <= self.bound()
    }
}

struct Ctx<'a> {
    g: &'a ChargedGraph,
    a: &'a BTreeSet<usize>,
    b: &'a BTreeSet<usize>,
    cut: Vec<Var>,
    vars_a: BTreeSet<Var>,
    vars_b: BTreeSet<Var>,
}

impl Ctx<'_> {
    fn side(&self, s: Side) -> &BTreeSet<usize> {
        match s {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    /// `G_side` with the charges after conditioning on `asg`.
    fn side_graph(&self, asg: &Assignment, s: Side) -> Result<(ChargedGraph, Vec<usize>), WitnessError> {
        Ok(condition_charges(self.g, asg).map_err(tseitin_err)?.induced(self.side(s)))
    }

    fn cut_assignment(&self, bits: u64) -> Assignment {
        Assignment::from_pairs(self.cut.iter().enumerate().map(|(j, &x)| (x, bits >> j & 1 == 1)))
    }

    /// `Σ|asg` further conditioned on a model of its part over `drop`; what
    /// remains represents the other side's subformula.
    fn extract(&self, sigma: &StrDnnf, asg: &Assignment, drop: &BTreeSet<Var>) -> Option<StrDnnf> {
        let s = sigma.condition(asg);
        let m = s.model()?;
        let fix = Assignment::from_pairs(drop.iter().map(|&x| (x, m.get(x).unwrap_or(false))));
        Some(s.condition(&fix))
    }

    fn parity(&self, asg: &Assignment, s: Side) -> bool {
        let ones = asg.iter().filter(|&(_, v)| v).count() % 2 == 1;
        self.side(s).iter().fold(ones, |acc, &v| acc ^ self.g.charge(v))
    }
}

fn missing_clause(g: &ChargedGraph, present: &[BTreeSet<Clause>], v: usize) -> Clause {
    vertex_clauses(g, v)
        .into_iter()
        .find(|c| !present[v].contains(c))
        .expect("vertex constraint is incomplete")
}

/// The falsifying assignment of the part of `c` over `cut`.
fn falsify_on(c: &Clause, cut: &BTreeSet<Var>) -> Assignment {
    Assignment::from_pairs(c.lits().iter().filter(|l| cut.contains(&l.var())).map(|l| (l.var(), !l.is_positive())))
}

/// From a refutation of `T(G)` and a partition `(A, B)` with `G[A]`
/// connected, `G[B]` 2-connected and both of treewidth at least 2, builds a
/// circuit for a satisfiable Tseitin formula on `G_A` or `G_B` from the two
/// operands of the critical apply.
pub fn extract_satisfiable_witness(
    t: &CompilationTrace,
    g: &ChargedGraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
) -> Result<Witness, WitnessError> {
    let pre = |m: &str| Err(WitnessError::Precondition(m.to_string()));
    if !g.is_2connected() {
        return pre("G is not 2-connected");
    }
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b) || a.len() + b.len() != g.num_vertices() || a.iter().chain(b).any(|&v| v >= g.num_vertices()) {
        return pre("(A, B) is not a partition of the vertices into two nonempty sets");
    }
    if !g.induced(a).0.is_connected() {
        return pre("G[A] is not connected");
    }
    if !g.induced(b).0.is_2connected() {
        return pre("G[B] is not 2-connected");
    }
    if treewidth_of(g, a)? < 2 {
        return pre("tw(G[A]) < 2");
    }
    if treewidth_of(g, b)? < 2 {
        return pre("tw(G[B]) < 2");
    }
    if !is_tseitin_of(&t.input, g) {
        return Err(WitnessError::NotARefutation("trace input is not the Tseitin formula of the graph".into()));
    }
    let rep = refutation_report(t)?;
    let (sl, sr) = (&t.steps[rep.left], &t.steps[rep.right]);
    let fl = t.input.select(sl.support.iter().copied());
    let fr = t.input.select(sr.support.iter().copied());
    let inc = |f: &Cnf| -> Result<BTreeSet<usize>, WitnessError> {
        Ok(incomplete_constraints(f, g).map_err(tseitin_err)?.intersection(b).copied().collect())
    };
    let (il, ir) = (inc(&fl)?, inc(&fr)?);
    let cut: Vec<Var> = g.edges_between(a, b).iter().map(|&e| g.edge(e).var).collect();
    if cut.len() > MAX_CUT {
        return Err(WitnessError::Precondition(format!("{} cut edges, limit is {MAX_CUT}", cut.len())));
    }
    let vars_of = |s: &BTreeSet<usize>| -> BTreeSet<Var> { g.induced(s).0.vars() };
    let cx = Ctx {
        g,
        a,
        b,
        cut,
        vars_a: vars_of(a),
        vars_b: vars_of(b),
    };

    let mut built: Option<(Side, WitnessCase, bool, StrDnnf, Assignment, usize)> = None;
    let case1 = il.len() <= 2 || ir.len() <= 2;
    if case1 {
        'ops: for (sigma, missing) in [(&sl.circuit, &il), (&sr.circuit, &ir)] {
            if missing.len() > 2 {
                continue;
            }
            for bits in 0..1u64 << cx.cut.len() {
                let asg = cx.cut_assignment(bits);
                if cx.parity(&asg, Side::B) {
                    continue;
                }
                let Some(mut acc) = cx.extract(sigma, &asg, &cx.vars_a) else {
                    continue;
                };
                let (gb, old) = cx.side_graph(&asg, Side::B)?;
                for &v in missing {
                    let nv = old.iter().position(|&x| x == v).unwrap();
                    let vars: BTreeSet<Var> = gb.incident(nv).iter().map(|&e| gb.edge(e).var).collect();
                    let d = compile_parity(&vars, gb.charge(nv), sigma.vtree())?;
                    acc = apply_and(&acc, &d)?;
                }
                built = Some((Side::B, WitnessCase::One, false, acc, asg, missing.len()));
                break 'ops;
            }
        }
    } else {
        let present_l = present_clauses(&fl, g).map_err(tseitin_err)?;
        let present_r = present_clauses(&fr, g).map_err(tseitin_err)?;
        let u = *ir.first().unwrap();
        let others: Vec<usize> = il.iter().copied().filter(|&x| x != u).take(2).collect();
        let cut_set: BTreeSet<Var> = cx.cut.iter().copied().collect();
        let cu = falsify_on(&missing_clause(g, &present_r, u), &cut_set);
        let mut chosen = None;
        for &v in &others {
            let cv = falsify_on(&missing_clause(g, &present_l, v), &cut_set);
            if cu.domain().union(&cv.domain()).count() < cut_set.len() {
                chosen = Some(cu.union(&cv));
                break;
            }
        }
        let mut asg = chosen.ok_or_else(|| WitnessError::Verification("both pairs of missing clauses cover the cut".into()))?;
        let free: Vec<Var> = cut_set.iter().copied().filter(|&x| asg.get(x).is_none()).collect();
        for &x in &free {
            asg.set(x, false);
        }
        if cx.parity(&asg, Side::A) {
            asg.set(free[0], true);
        }
        let ea = cx.extract(&sl.circuit, &asg, &cx.vars_b);
        let eb = cx.extract(&sr.circuit, &asg, &cx.vars_b);
        let (Some(xl), Some(xr)) = (ea, eb) else {
            return Err(WitnessError::Verification("an operand is unsatisfiable under the chosen assignment".into()));
        };
        built = Some((Side::A, WitnessCase::Two, false, apply_and(&xl, &xr)?, asg, 0));
    }
    if built.is_none() {
        // Case 1 with no usable cut assignment: look for one that keeps both
        // operands and the A side satisfiable
        for bits in 0..1u64 << cx.cut.len() {
            let asg = cx.cut_assignment(bits);
            if cx.parity(&asg, Side::A) {
                continue;
            }
            if let (Some(xl), Some(xr)) = (
                cx.extract(&sl.circuit, &asg, &cx.vars_b),
                cx.extract(&sr.circuit, &asg, &cx.vars_b),
            ) {
                built = Some((Side::A, WitnessCase::One, true, apply_and(&xl, &xr)?, asg, 0));
                break;
            }
        }
    }
    let (side, case, fallback, circuit, assignment, parity_conjoins) = built.ok_or_else(|| {
        WitnessError::NoAssignment(format!(
            "{} and {} constraints of B are incomplete in the operands",
            il.len(),
            ir.len()
        ))
    })?;
    let (graph, _) = cx.side_graph(&assignment, side)?;
    let expected = tseitin_cnf(&graph);
    if let Some(x) = agree(&circuit, &expected, FINAL_SAMPLES, 0) {
        return Err(WitnessError::Verification(format!("witness differs from the side's Tseitin formula at {x}")));
    }
    let mut u = graph.vars();
    u.extend(circuit.vars());
    let verification = if u.len() <= MAX_VARS {
        Verification::Exact
    } else {
        Verification::Sampled(FINAL_SAMPLES)
    };
    let w = Witness {
        side,
        case,
        fallback,
        size: circuit.size(),
        satisfiable: circuit.is_satisfiable(),
        predicted_satisfiable: !cx.parity(&assignment, side),
        circuit,
        graph,
        vertices: cx.side(side).clone(),
        assignment,
        incomplete_left: il,
        incomplete_right: ir,
        parity_conjoins,
        left_size: rep.left_size,
        right_size: rep.right_size,
        verification,
    };
    if !w.satisfiable || !w.predicted_satisfiable {
        return Err(WitnessError::Verification("the side's Tseitin formula is unsatisfiable".into()));
    }
    if !w.within_bound() {
        return Err(WitnessError::Verification(format!(
            "|Σ*| = {} exceeds {}·{}·{}",
            w.size, WITNESS_CONSTANT, w.left_size, w.right_size
        )));
    }
    Ok(w)
}
