use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{CompilationTrace, StepKind, TraceStep, FINAL_SAMPLES};
use crate::cnf::{Assignment, Clause, Cnf};
use crate::oracle::agree;
use crate::strdnnf::{apply_and, validate, StrDnnf};

/// Assignments sampled per step when a check exceeds the oracle limit.
const STEP_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}: {reason}{}", step.map_or("trace".to_string(), |i| format!("step {i}")), counterexample.as_ref().map_or(String::new(), |a| format!(" (at {a})")))]
pub struct TraceViolation {
    pub step: Option<usize>,
    pub reason: String,
    pub counterexample: Option<Assignment>,
}

fn bad(step: usize, reason: impl Into<String>) -> TraceViolation {
    TraceViolation {
        step: Some(step),
        reason: reason.into(),
        counterexample: None,
    }
}

fn differs(step: usize, reason: &str, a: Assignment) -> TraceViolation {
    TraceViolation {
        step: Some(step),
        reason: reason.into(),
        counterexample: Some(a),
    }
}

fn check_step(t: &CompilationTrace, i: usize, s: &TraceStep) -> Result<(), TraceViolation> {
    let vt = t.vtrees.get(s.vtree).ok_or_else(|| bad(i, format!("vtree {} is not in the table", s.vtree)))?;
    if !s.circuit.vtree().same_vtree(vt) {
        return Err(bad(i, "circuit does not use the step's vtree"));
    }
    if s.size != s.circuit.size() {
        return Err(bad(i, format!("recorded size {} but the circuit has {} edges", s.size, s.circuit.size())));
    }
    validate(&s.circuit).map_err(|v| bad(i, format!("not a str-DNNF: {v}")))?;
    let seed = i as u64;
    let expect_support: BTreeSet<usize> = match s.kind {
        StepKind::Clause(idx) => {
            let c = t
                .input
                .clauses()
                .get(idx)
                .ok_or_else(|| bad(i, format!("clause {idx} does not exist")))?;
            if let Some(a) = agree(&s.circuit, c, STEP_SAMPLES, seed) {
                return Err(differs(i, "circuit differs from its clause", a));
            }
            BTreeSet::from([idx])
        }
        StepKind::Satisfied => {
            let top = Cnf::new(BTreeSet::new(), Vec::new()).unwrap();
            if let Some(a) = agree(&s.circuit, &top, STEP_SAMPLES, seed) {
                return Err(differs(i, "satisfied-clause step is not the constant 1", a));
            }
            BTreeSet::new()
        }
        StepKind::Apply(j, k) => {
            if j >= i || k >= i {
                return Err(bad(i, format!("parents {j}, {k} do not precede the step")));
            }
            let (a, b) = (&t.steps[j], &t.steps[k]);
            if !a.circuit.vtree().same_vtree(b.circuit.vtree()) {
                return Err(bad(i, format!("parents {j} and {k} use different vtrees")));
            }
            if !a.circuit.vtree().same_vtree(s.circuit.vtree()) {
                return Err(bad(i, "result vtree differs from the parents'"));
            }
            let r = apply_and(&a.circuit, &b.circuit).map_err(|e| bad(i, e.to_string()))?;
            if let Some(x) = agree(&s.circuit, &r, STEP_SAMPLES, seed) {
                return Err(differs(i, "circuit differs from the conjunction of its parents", x));
            }
            a.support.union(&b.support).copied().collect()
        }
        StepKind::Restructure(j, id) => {
            if j >= i {
                return Err(bad(i, format!("parent {j} does not precede the step")));
            }
            if id != s.vtree {
                return Err(bad(i, format!("names vtree {id} but uses {}", s.vtree)));
            }
            let p = &t.steps[j];
            if p.circuit.vtree().same_vtree(s.circuit.vtree()) {
                return Err(bad(i, "restructure keeps the parent's vtree"));
            }
            if let Some(x) = agree(&s.circuit, &p.circuit, STEP_SAMPLES, seed) {
                return Err(differs(i, "restructure changed the function", x));
            }
            p.support.clone()
        }
    };
    if expect_support != s.support {
        return Err(bad(i, "supporting clause set is inconsistent"));
    }
    Ok(())
}

/// Checks every step against the three rules, then the last circuit
/// against the input. Aborted traces skip the final check.
pub fn validate_trace(t: &CompilationTrace) -> Result<(), TraceViolation> {
    if t.steps.is_empty() {
        return Err(TraceViolation {
            step: None,
            reason: "trace has no steps".into(),
            counterexample: None,
        });
    }
    for (i, s) in t.steps.iter().enumerate() {
        check_step(t, i, s)?;
    }
    if t.aborted {
        return Ok(());
    }
    let last = t.steps.len() - 1;
    if let Some(a) = agree(&t.steps[last].circuit, &t.input, FINAL_SAMPLES, u64::MAX) {
        return Err(TraceViolation {
            step: Some(last),
            reason: "final circuit differs from the input".into(),
            counterexample: Some(a),
        });
    }
    Ok(())
}

/// Conditions every circuit on `a`. The input becomes the clause set of
/// `F|a` in first-occurrence order. A clause step whose clause `a` satisfies
/// becomes a `Satisfied` step and leaves every supporting set.
pub fn condition_trace(t: &CompilationTrace, a: &Assignment) -> CompilationTrace {
    if a.is_empty() {
        return t.clone();
    }
    // clauses that coincide after conditioning share one index
    let mut map = Vec::with_capacity(t.input.len());
    let mut clauses: Vec<Clause> = Vec::new();
    let mut index: HashMap<Clause, usize> = HashMap::new();
    for c in t.input.clauses() {
        map.push(c.condition(a).map(|d| {
            *index.entry(d.clone()).or_insert_with(|| {
                clauses.push(d);
                clauses.len() - 1
            })
        }));
    }
    let universe = t.input.universe().iter().copied().filter(|&v| a.get(v).is_none()).collect();
    let steps = t
        .steps
        .iter()
        .map(|s| {
            let circuit: StrDnnf = s.circuit.condition(a);
            let kind = match s.kind {
                StepKind::Clause(idx) => map[idx].map_or(StepKind::Satisfied, StepKind::Clause),
                k => k,
            };
            TraceStep {
                kind,
                size: circuit.size(),
                circuit,
                vtree: s.vtree,
                support: s.support.iter().filter_map(|&i| map[i]).collect(),
            }
        })
        .collect();
    CompilationTrace {
        input: Cnf::new(universe, clauses).expect("conditioning keeps clauses inside the universe"),
        steps,
        vtrees: t.vtrees.clone(),
        aborted: t.aborted,
        verified: None,
    }
}
