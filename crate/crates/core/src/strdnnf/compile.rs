use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Builder, NodeId, StrDnnf, StrDnnfError};
use crate::cnf::{Clause, Var};
use crate::vtree::Vtree;

/// A chain of `∨` nodes at the lowest vtree node covering the clause.
pub fn compile_clause(c: &Clause, vtree: &Arc<Vtree>) -> Result<StrDnnf, StrDnnfError> {
    let mut b = Builder::new(vtree.clone());
    let mut leaves = Vec::with_capacity(c.len());
    for l in c.lits() {
        leaves.push(vtree.leaf(l.var()).ok_or(StrDnnfError::VarNotInVtree(l.var()))?);
    }
    let root = match leaves.len() {
        0 => b.zero(),
        1 => b.lit(c.lits()[0], leaves[0]),
        _ => {
            let t = leaves[1..].iter().fold(leaves[0], |acc, &x| vtree.lca(acc, x));
            let mut acc = b.lit(c.lits()[0], t);
            for &l in &c.lits()[1..] {
                let x = b.lit(l, t);
                acc = b.or_raw(acc, x, t)?;
            }
            acc
        }
    };
    Ok(b.finish(root))
}

/// Edge count of `compile_parity` over `k` variables.
pub fn parity_edge_bound(k: usize) -> usize {
    12 * k
}

/// `Σ vars ≡ parity (mod 2)`. Each vtree node where both sides carry
/// variables gets an even/odd pair built from four `∧` and two `∨` nodes.
pub fn compile_parity(
    vars: &BTreeSet<Var>,
    parity: bool,
    vtree: &Arc<Vtree>,
) -> Result<StrDnnf, StrDnnfError> {
    for &v in vars {
        if !vtree.contains_var(v) {
            return Err(StrDnnfError::VarNotInVtree(v));
        }
    }
    let mut b = Builder::new(vtree.clone());
    let root = match pair(&mut b, vtree, vars, vtree.root())? {
        None if parity => b.zero(),
        None => b.one(vtree.root()),
        Some((even, odd)) => {
            if parity {
                odd
            } else {
                even
            }
        }
    };
    let s = b.finish(root);
    debug_assert!(s.size() <= parity_edge_bound(vars.len()));
    Ok(s)
}

fn pair(
    b: &mut Builder,
    vt: &Vtree,
    vars: &BTreeSet<Var>,
    t: usize,
) -> Result<Option<(NodeId, NodeId)>, StrDnnfError> {
    match vt.children(t) {
        None => {
            let v = vt.leaf_var(t).unwrap();
            if vars.contains(&v) {
                Ok(Some((b.lit(v.neg(), t), b.lit(v.pos(), t))))
            } else {
                Ok(None)
            }
        }
        Some((l, r)) => {
            let pl = pair(b, vt, vars, l)?;
            let pr = pair(b, vt, vars, r)?;
            match (pl, pr) {
                (None, x) | (x, None) => Ok(x),
                (Some((el, ol)), Some((er, or))) => {
                    let ee = b.and_raw(el, er, t)?;
                    let oo = b.and_raw(ol, or, t)?;
                    let eo = b.and_raw(el, or, t)?;
                    let oe = b.and_raw(ol, er, t)?;
                    let even = b.or_raw(ee, oo, t)?;
                    let odd = b.or_raw(eo, oe, t)?;
                    Ok(Some((even, odd)))
                }
            }
        }
    }
}
