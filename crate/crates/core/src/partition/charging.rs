use std::collections::BTreeSet;

use super::{PartitionError, SplitTrace};
use crate::scalar::Scalar;
use crate::tseitin::ChargedGraph;

/// Per-edge charges after replaying a split trace, indexed by edge position.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeState<S> {
    pub charges: Vec<S>,
    pub total: S,
    /// Sum of `|E(A_Y, B_Y)|` over the trace.
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChargeViolation {
    TotalMismatch { total: String, m: usize },
    Negative { edge: usize },
    InteriorCharged { edge: usize, charge: String },
    AboveBound { edge: usize, charge: String },
}

/// Replays the trace children-first. At a node `Y` split into `(A, B)`,
/// the charges of the cut edges plus one per cut edge are spread evenly
/// over `out(A) ∩ out(Y)`, and the cut edges drop to zero.
pub fn charging<S: Scalar>(trace: &SplitTrace, g: &ChargedGraph, u: &BTreeSet<usize>) -> Result<ChargeState<S>, PartitionError> {
    if trace.root() != u {
        return Err(PartitionError::TraceInconsistent("root is not U".into()));
    }
    if let Some(&v) = u.iter().find(|&&v| v >= g.num_vertices()) {
        return Err(PartitionError::TraceInconsistent(format!("vertex {v} is not in the graph")));
    }
    trace.check()?;
    let mut charges = vec![S::zero(); g.num_edges()];
    let mut m = 0;
    for t in trace.post_order() {
        let (ia, ib) = trace.nodes[t].children.unwrap();
        let (y, a, b) = (&trace.nodes[t].set, &trace.nodes[ia].set, &trace.nodes[ib].set);
        let out_y: BTreeSet<usize> = g.out(y).into_iter().collect();
        let targets: Vec<usize> = g.out(a).into_iter().filter(|e| out_y.contains(e)).collect();
        let cut = g.edges_between(a, b);
        if targets.is_empty() {
            return Err(PartitionError::TraceInconsistent(format!(
                "node {t}: out(A) ∩ out(Y) is empty"
            )));
        }
        let mut pool = S::zero();
        for &e in &cut {
            pool = pool + S::one() + charges[e].clone();
            charges[e] = S::zero();
        }
        let share = pool / S::from_count(targets.len());
        for &e in &targets {
            charges[e] = charges[e].clone() + share.clone();
        }
        m += cut.len();
    }
    let total = charges.iter().fold(S::zero(), |acc, c| acc + c.clone());
    Ok(ChargeState { charges, total, m })
}

impl<S: Scalar> ChargeState<S> {
    /// Total equals `M`, charges are nonnegative, edges outside `out(U)` are
    /// uncharged, and no edge exceeds `9γ`.
    pub fn violations(&self, g: &ChargedGraph, u: &BTreeSet<usize>, gamma: &S) -> Vec<ChargeViolation> {
        let mut out = Vec::new();
        if self.total != S::from_count(self.m) {
            out.push(ChargeViolation::TotalMismatch {
                total: self.total.to_string(),
                m: self.m,
            });
        }
        let boundary: BTreeSet<usize> = g.out(u).into_iter().collect();
        let cap = S::from_count(9) * gamma.clone();
        for (e, c) in self.charges.iter().enumerate() {
            if *c < S::zero() {
                out.push(ChargeViolation::Negative { edge: e });
            }
            if !boundary.contains(&e) && *c != S::zero() {
                out.push(ChargeViolation::InteriorCharged {
                    edge: e,
                    charge: c.to_string(),
                });
            }
            if *c > cap {
                out.push(ChargeViolation::AboveBound {
                    edge: e,
                    charge: c.to_string(),
                });
            }
        }
        out
    }

    pub fn max_charge(&self) -> S {
        self.charges
            .iter()
            .fold(S::zero(), |acc, c| if *c > acc { c.clone() } else { acc })
    }
}
