use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{Builder, NodeId, StrDnnf, StrDnnfError};
use crate::cnf::Var;
use crate::oracle::PATTERNS;
use crate::vtree::Vtree;

/// Largest variable count `restructure` accepts.
pub const RESTRUCTURE_MAX_VARS: usize = 24;

// Truth table over the leaves of one vtree node. The leftmost leaf is the
// most significant index bit, so the table of a node is the concatenation of
// the right-child tables, one per assignment of the left child.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Table {
    m: usize,
    words: Vec<u64>,
}

impl Table {
    fn mask(m: usize) -> u64 {
        if m >= 6 {
            !0
        } else {
            (1u64 << (1 << m)) - 1
        }
    }
    fn zeros(m: usize) -> Table {
        Table {
            m,
            words: vec![0; words_for(m)],
        }
    }
    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    fn is_ones(&self) -> bool {
        let mask = Table::mask(self.m);
        self.words.iter().all(|&w| w == mask)
    }
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    /// The `alpha`-th block of `2^mr` bits.
    fn slice(&self, alpha: usize, mr: usize) -> Table {
        if mr >= 6 {
            let w = 1 << (mr - 6);
            Table {
                m: mr,
                words: self.words[alpha * w..(alpha + 1) * w].to_vec(),
            }
        } else {
            let start = alpha << mr;
            let word = self.words[start / 64] >> (start % 64);
            Table {
                m: mr,
                words: vec![word & Table::mask(mr)],
            }
        }
    }
}

fn words_for(m: usize) -> usize {
    if m >= 6 {
        1 << (m - 6)
    } else {
        1
    }
}

/// Re-expresses `s` over `target` by splitting its truth table along the
/// target vtree and sharing equal sub-functions. Exponential in the number of
/// variables, hence the cap.
pub fn restructure(s: &StrDnnf, target: &Arc<Vtree>) -> Result<StrDnnf, StrDnnfError> {
    let a: BTreeSet<Var> = s.vtree().vars().iter().copied().collect();
    let b: BTreeSet<Var> = target.vars().iter().copied().collect();
    if a != b {
        return Err(StrDnnfError::VarSetMismatch);
    }
    let m = target.num_vars();
    if m > RESTRUCTURE_MAX_VARS {
        return Err(StrDnnfError::TooManyVars {
            vars: m,
            max: RESTRUCTURE_MAX_VARS,
        });
    }
    let order = target.vars();
    let pos: HashMap<Var, usize> = order.iter().enumerate().map(|(j, &v)| (v, j)).collect();
    let mut table = Table::zeros(m);
    let mut scratch = Vec::new();
    let total = 1usize << m;
    for blk in 0..table.words.len() {
        let word = |v: Var| -> u64 {
            let p = m - 1 - pos[&v];
            if p < 6 {
                PATTERNS[p]
            } else if (blk >> (p - 6)) & 1 == 1 {
                !0
            } else {
                0
            }
        };
        let w = s.eval_block(&word, &mut scratch);
        table.words[blk] = if total < 64 { w & Table::mask(m) } else { w };
    }
    let mut cx = Rebuild {
        vt: target.clone(),
        b: Builder::new(target.clone()),
        memo: FxHashMap::default(),
    };
    let root = cx.build(target.root(), &table)?;
    Ok(cx.b.finish(root))
}

struct Rebuild {
    vt: Arc<Vtree>,
    b: Builder,
    memo: FxHashMap<(usize, Table), NodeId>,
}

impl Rebuild {
    fn build(&mut self, t: usize, f: &Table) -> Result<NodeId, StrDnnfError> {
        if f.is_zero() {
            return Ok(self.b.zero());
        }
        if f.is_ones() {
            return Ok(self.b.one(t));
        }
        if let Some(&id) = self.memo.get(&(t, f.clone())) {
            return Ok(id);
        }
        let id = match self.vt.children(t) {
            None => {
                let v = self.vt.leaf_var(t).unwrap();
                // index 0 is v = 0, index 1 is v = 1
                if f.get(1) {
                    self.b.lit(v.pos(), t)
                } else {
                    self.b.lit(v.neg(), t)
                }
            }
            Some((l, r)) => {
                let ml = self.vt.vars_below(l).len();
                let mr = self.vt.vars_below(r).len();
                let mut groups: Vec<(Table, Table)> = Vec::new();
                let mut index: FxHashMap<Table, usize> = FxHashMap::default();
                for alpha in 0..1usize << ml {
                    let sub = f.slice(alpha, mr);
                    if sub.is_zero() {
                        continue;
                    }
                    let g = match index.get(&sub) {
                        Some(&g) => g,
                        None => {
                            index.insert(sub.clone(), groups.len());
                            groups.push((Table::zeros(ml), sub));
                            groups.len() - 1
                        }
                    };
                    groups[g].0.set(alpha);
                }
                let mut acc = self.b.zero();
                for (prime, sub) in &groups {
                    let p = self.build(l, prime)?;
                    let q = self.build(r, sub)?;
                    let term = if self.b.is_one(q) {
                        p
                    } else if self.b.is_one(p) {
                        q
                    } else {
                        self.b.mk_and(p, q, t)?
                    };
                    acc = self.b.mk_or(acc, term, t)?;
                }
                acc
            }
        };
        self.memo.insert((t, f.clone()), id);
        Ok(id)
    }
}
