use std::fmt;

use super::{Node, NodeId, StrDnnf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A child id does not precede its parent.
    Cycle,
    /// `λ` is not a vtree node.
    BadLambda,
    Decomposability,
    ParallelEdges,
    /// `∧` children are not under the two distinct children of `λ`.
    Condition1,
    /// `∨` children are not labelled like the `∨`.
    Condition2,
    /// `var(s) ⊄ var(λ(s))`.
    Condition3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {:?}", self.node, self.kind)
    }
}

impl std::error::Error for Violation {}

/// Checks the circuit and reports the first violating node in topological
/// order.
pub fn validate(s: &StrDnnf) -> Result<(), Violation> {
    let vt = s.vtree();
    let nv = vt.num_vars();
    let words = nv.div_ceil(64).max(1);
    let mut sets: Vec<u64> = Vec::with_capacity(s.node_count() * words);
    let fail = |i: usize, kind| Violation {
        node: i as NodeId,
        kind,
    };
    for (i, n) in s.nodes().iter().enumerate() {
        let lam = s.lambda(i as NodeId);
        if lam >= vt.len() {
            return Err(fail(i, ViolationKind::BadLambda));
        }
        let base = sets.len();
        sets.resize(base + words, 0);
        match *n {
            Node::False | Node::True => {}
            Node::Lit(l) => {
                let Some(rank) = vt.rank(l.var()) else {
                    return Err(fail(i, ViolationKind::Condition3));
                };
                sets[base + rank / 64] |= 1 << (rank % 64);
                let (lo, hi) = vt.rank_range(lam);
                if rank < lo || rank >= hi {
                    return Err(fail(i, ViolationKind::Condition3));
                }
            }
            Node::And(x, y) | Node::Or(x, y) => {
                let (x, y) = (x as usize, y as usize);
                if x >= i || y >= i {
                    return Err(fail(i, ViolationKind::Cycle));
                }
                let is_and = matches!(n, Node::And(..));
                let mut overlap = false;
                for w in 0..words {
                    let (a, b) = (sets[x * words + w], sets[y * words + w]);
                    overlap |= a & b != 0;
                    sets[base + w] = a | b;
                }
                if is_and && overlap {
                    return Err(fail(i, ViolationKind::Decomposability));
                }
                if x == y {
                    return Err(fail(i, ViolationKind::ParallelEdges));
                }
                let (lx, ly) = (s.lambda(x as NodeId), s.lambda(y as NodeId));
                if is_and {
                    let Some((l, r)) = vt.children(lam) else {
                        return Err(fail(i, ViolationKind::Condition1));
                    };
                    let ok = (vt.is_ancestor(l, lx) && vt.is_ancestor(r, ly))
                        || (vt.is_ancestor(r, lx) && vt.is_ancestor(l, ly));
                    if !ok {
                        return Err(fail(i, ViolationKind::Condition1));
                    }
                } else if lx != lam || ly != lam {
                    return Err(fail(i, ViolationKind::Condition2));
                }
                let (lo, hi) = vt.rank_range(lam);
                for w in 0..words {
                    let mut bits = sets[base + w];
                    while bits != 0 {
                        let rank = w * 64 + bits.trailing_zeros() as usize;
                        if rank < lo || rank >= hi {
                            return Err(fail(i, ViolationKind::Condition3));
                        }
                        bits &= bits - 1;
                    }
                }
            }
        }
    }
    Ok(())
}
