use rustc_hash::FxHashMap;

use super::{Builder, Node, NodeId, StrDnnf, StrDnnfError};

/// Upper bound on `nodes(apply_and(a, b))`: at most three new nodes per
/// visited pair, the imported operands, and one constant per vtree node plus
/// `False`.
pub fn apply_node_bound(na: usize, nb: usize, vtree_nodes: usize) -> usize {
    3 * na * nb + na + nb + vtree_nodes + 1
}

pub fn apply_and(a: &StrDnnf, b: &StrDnnf) -> Result<StrDnnf, StrDnnfError> {
    apply_and_limited(a, b, usize::MAX)
}

#[derive(Clone, Copy)]
enum Plan {
    Done(NodeId),
    // ∨ at t of the results of two pairs
    Or((NodeId, NodeId), (NodeId, NodeId), usize),
    // ∧ at t of a pair result and an imported node; `pair_left` tells the side
    Half((NodeId, NodeId), NodeId, bool, usize),
    // ∧ at t of two pair results, left then right
    Both((NodeId, NodeId), (NodeId, NodeId), usize),
}

struct Ctx<'a> {
    a: &'a StrDnnf,
    b: &'a StrDnnf,
    ia: Vec<NodeId>,
    ib: Vec<NodeId>,
    out: Builder,
}

impl Ctx<'_> {
    fn nat(&self, s: &StrDnnf, id: NodeId) -> usize {
        match s.node(id) {
            Node::Lit(l) => s.vtree().leaf(l.var()).unwrap(),
            _ => s.lambda(id),
        }
    }

    /// Children of an ∧ at `t`, left side first.
    fn and_sides(&self, s: &StrDnnf, id: NodeId, t: usize) -> (NodeId, NodeId) {
        let (x, y) = s.node(id).children().unwrap();
        let (l, _) = s.vtree().children(t).unwrap();
        if s.vtree().is_ancestor(l, self.nat(s, x)) || s.vtree().is_ancestor(l, s.lambda(x)) {
            (x, y)
        } else {
            (y, x)
        }
    }

    fn plan(&mut self, u: NodeId, v: NodeId) -> Result<Plan, StrDnnfError> {
        let (a, b) = (self.a, self.b);
        let (nu, nv) = (a.node(u), b.node(v));
        if nu == Node::False || nv == Node::False {
            return Ok(Plan::Done(self.out.zero()));
        }
        if nu == Node::True {
            return Ok(Plan::Done(self.ib[v as usize]));
        }
        if nv == Node::True {
            return Ok(Plan::Done(self.ia[u as usize]));
        }
        let vt = a.vtree().clone();
        let (pu, pv) = (self.nat(a, u), self.nat(b, v));
        if pu == pv {
            let t = pu;
            return Ok(match (nu, nv) {
                (Node::Lit(x), Node::Lit(y)) => {
                    if x == y {
                        Plan::Done(self.out.lit(x, t))
                    } else {
                        Plan::Done(self.out.zero())
                    }
                }
                (Node::Or(u1, u2), _) => Plan::Or((u1, v), (u2, v), t),
                (_, Node::Or(v1, v2)) => Plan::Or((u, v1), (u, v2), t),
                (Node::And(..), Node::And(..)) => {
                    let (ul, ur) = self.and_sides(a, u, t);
                    let (vl, vr) = self.and_sides(b, v, t);
                    Plan::Both((ul, vl), (ur, vr), t)
                }
                _ => unreachable!("literal and ∧ share a position"),
            });
        }
        if vt.is_ancestor(pu, pv) {
            let t = pu;
            return Ok(match nu {
                Node::Or(u1, u2) => Plan::Or((u1, v), (u2, v), t),
                Node::And(..) => {
                    let (ul, ur) = self.and_sides(a, u, t);
                    let (l, _) = vt.children(t).unwrap();
                    if vt.is_ancestor(l, pv) {
                        Plan::Half((ul, v), self.ia[ur as usize], true, t)
                    } else {
                        Plan::Half((ur, v), self.ia[ul as usize], false, t)
                    }
                }
                _ => unreachable!(),
            });
        }
        if vt.is_ancestor(pv, pu) {
            let t = pv;
            return Ok(match nv {
                Node::Or(v1, v2) => Plan::Or((u, v1), (u, v2), t),
                Node::And(..) => {
                    let (vl, vr) = self.and_sides(b, v, t);
                    let (l, _) = vt.children(t).unwrap();
                    if vt.is_ancestor(l, pu) {
                        Plan::Half((u, vl), self.ib[vr as usize], true, t)
                    } else {
                        Plan::Half((u, vr), self.ib[vl as usize], false, t)
                    }
                }
                _ => unreachable!(),
            });
        }
        let t = vt.lca(pu, pv);
        let (l, _) = vt.children(t).unwrap();
        let (x, y) = (self.ia[u as usize], self.ib[v as usize]);
        let r = if vt.is_ancestor(l, pu) {
            self.out.mk_and(x, y, t)?
        } else {
            self.out.mk_and(y, x, t)?
        };
        Ok(Plan::Done(r))
    }
}

/// Conjunction of two circuits over the same vtree, memoized on node pairs.
/// Fails with `LimitExceeded` once more than `limit` edges have been created.
pub fn apply_and_limited(a: &StrDnnf, b: &StrDnnf, limit: usize) -> Result<StrDnnf, StrDnnfError> {
    if !std::sync::Arc::ptr_eq(a.vtree(), b.vtree()) && !a.vtree().same_vtree(b.vtree()) {
        return Err(StrDnnfError::VtreeMismatch);
    }
    let mut out = Builder::with_limit(a.vtree().clone(), limit);
    let ia = out.import(a)?;
    let ib = out.import(b)?;
    let mut cx = Ctx { a, b, ia, ib, out };
    let mut memo: FxHashMap<(NodeId, NodeId), NodeId> = FxHashMap::default();
    let start = (a.root(), b.root());
    let mut stack = vec![start];
    while let Some((u, v)) = stack.last().copied() {
        if memo.contains_key(&(u, v)) {
            stack.pop();
            continue;
        }
        let plan = cx.plan(u, v)?;
        let deps: [Option<(NodeId, NodeId)>; 2] = match plan {
            Plan::Done(_) => [None, None],
            Plan::Or(p, q, _) | Plan::Both(p, q, _) => [Some(p), Some(q)],
            Plan::Half(p, ..) => [Some(p), None],
        };
        let mut missing = false;
        for d in deps.into_iter().flatten() {
            if !memo.contains_key(&d) {
                stack.push(d);
                missing = true;
            }
        }
        if missing {
            continue;
        }
        let get = |p: (NodeId, NodeId)| memo[&p];
        let r = match plan {
            Plan::Done(r) => r,
            Plan::Or(p, q, t) => {
                let (x, y) = (get(p), get(q));
                cx.out.mk_or(x, y, t)?
            }
            Plan::Half(p, other, pair_left, t) => {
                let x = get(p);
                if pair_left {
                    cx.out.mk_and(x, other, t)?
                } else {
                    cx.out.mk_and(other, x, t)?
                }
            }
            Plan::Both(p, q, t) => {
                let (x, y) = (get(p), get(q));
                cx.out.mk_and(x, y, t)?
            }
        };
        memo.insert((u, v), r);
        stack.pop();
    }
    let res = cx.out.finish(memo[&start]);
    debug_assert!(
        res.node_count() <= apply_node_bound(a.node_count(), b.node_count(), a.vtree().len()),
        "apply node bound violated"
    );
    Ok(res)
}
