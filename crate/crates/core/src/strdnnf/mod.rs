//! Structured DNNF circuits.
//!
//! A circuit owns a topologically ordered node array (children before
//! parents, root last), a vtree shared through an `Arc`, and a label `λ` per
//! node. Nodes have fan-in 2. Size is the number of edges.

mod apply;
mod builder;
mod compile;
mod condition;
mod io;
mod restructure;
mod validate;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::cnf::{Assignment, Lit, Var};
use crate::vtree::Vtree;

pub use apply::{apply_and, apply_and_limited, apply_node_bound};
pub use compile::{compile_clause, compile_parity, parity_edge_bound};
pub use io::{nnf_vtree_path, parse_nnf, write_nnf};
pub use restructure::{restructure, RESTRUCTURE_MAX_VARS};
pub use validate::{validate, Violation, ViolationKind};

pub(crate) use builder::Builder;

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    False,
    True,
    Lit(Lit),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
}

impl Node {
    pub fn children(self) -> Option<(NodeId, NodeId)> {
        match self {
            Node::And(a, b) | Node::Or(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrDnnfError {
    #[error("operands respect different vtrees")]
    VtreeMismatch,
    #[error("variable {0} is not a leaf of the vtree")]
    VarNotInVtree(Var),
    #[error("edge limit {limit} exceeded")]
    LimitExceeded { limit: usize },
    #[error("{vars} variables exceed the limit of {max}")]
    TooManyVars { vars: usize, max: usize },
    #[error("target vtree has a different variable set")]
    VarSetMismatch,
    #[error("variable {0} is unassigned")]
    Unassigned(Var),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone)]
pub struct StrDnnf {
    vtree: Arc<Vtree>,
    nodes: Vec<Node>,
    lambda: Vec<u32>,
}

impl PartialEq for StrDnnf {
    /// Same DAG, same labels, same vtree.
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.lambda == other.lambda && self.vtree == other.vtree
    }
}

impl StrDnnf {
    pub(crate) fn from_parts(vtree: Arc<Vtree>, nodes: Vec<Node>, lambda: Vec<u32>) -> StrDnnf {
        debug_assert!(!nodes.is_empty() && nodes.len() == lambda.len());
        StrDnnf { vtree, nodes, lambda }
    }

    pub fn constant(vtree: &Arc<Vtree>, value: bool) -> StrDnnf {
        let n = if value { Node::True } else { Node::False };
        StrDnnf::from_parts(vtree.clone(), vec![n], vec![Vtree::ROOT as u32])
    }

    /// A literal labelled by its leaf.
    pub fn literal(vtree: &Arc<Vtree>, l: Lit) -> Result<StrDnnf, StrDnnfError> {
        let leaf = vtree.leaf(l.var()).ok_or(StrDnnfError::VarNotInVtree(l.var()))?;
        Ok(StrDnnf::from_parts(vtree.clone(), vec![Node::Lit(l)], vec![leaf as u32]))
    }

    pub fn vtree(&self) -> &Arc<Vtree> {
        &self.vtree
    }
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }
    pub fn lambda(&self, id: NodeId) -> usize {
        self.lambda[id as usize] as usize
    }
    pub fn lambdas(&self) -> &[u32] {
        &self.lambda
    }
    pub fn root(&self) -> NodeId {
        (self.nodes.len() - 1) as NodeId
    }
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `|Σ|`, the number of edges.
    pub fn size(&self) -> usize {
        self.nodes.iter().filter(|n| n.children().is_some()).count() * 2
    }

    pub fn is_const(&self) -> Option<bool> {
        match self.nodes[self.root() as usize] {
            Node::False => Some(false),
            Node::True => Some(true),
            _ => None,
        }
    }

    pub fn is_false(&self) -> bool {
        self.is_const() == Some(false)
    }

    /// Variables occurring in the circuit.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Lit(l) => Some(l.var()),
                _ => None,
            })
            .collect()
    }

    /// Bottom-up marking; exact by decomposability.
    pub fn is_satisfiable(&self) -> bool {
        *self.sat_marks().last().unwrap()
    }

    fn sat_marks(&self) -> Vec<bool> {
        let mut sat = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let s = match *n {
                Node::False => false,
                Node::True | Node::Lit(_) => true,
                Node::And(a, b) => sat[a as usize] && sat[b as usize],
                Node::Or(a, b) => sat[a as usize] || sat[b as usize],
            };
            sat.push(s);
        }
        sat
    }

    /// A partial model covering the literals on one satisfied path, or
    /// `None` when unsatisfiable.
    pub fn model(&self) -> Option<Assignment> {
        let sat = self.sat_marks();
        if !sat[self.root() as usize] {
            return None;
        }
        let mut a = Assignment::new();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id as usize], true) {
                continue;
            }
            match self.nodes[id as usize] {
                Node::Lit(l) => a.set(l.var(), l.is_positive()),
                Node::And(x, y) => {
                    stack.push(x);
                    stack.push(y);
                }
                Node::Or(x, y) => stack.push(if sat[x as usize] { x } else { y }),
                _ => {}
            }
        }
        Some(a)
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<bool, StrDnnfError> {
        let mut val = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match *n {
                Node::False => false,
                Node::True => true,
                Node::Lit(l) => l.eval(a.get(l.var()).ok_or(StrDnnfError::Unassigned(l.var()))?),
                Node::And(x, y) => val[x as usize] && val[y as usize],
                Node::Or(x, y) => val[x as usize] || val[y as usize],
            };
            val.push(v);
        }
        Ok(*val.last().unwrap())
    }

    /// Evaluates 64 assignments at once; `value(v)` gives the bit pattern of `v`.
    pub fn eval_block(&self, value: &dyn Fn(Var) -> u64, scratch: &mut Vec<u64>) -> u64 {
        scratch.clear();
        for n in &self.nodes {
            let w = match *n {
                Node::False => 0,
                Node::True => !0,
                Node::Lit(l) => {
                    let x = value(l.var());
                    if l.is_positive() {
                        x
                    } else {
                        !x
                    }
                }
                Node::And(x, y) => scratch[x as usize] & scratch[y as usize],
                Node::Or(x, y) => scratch[x as usize] | scratch[y as usize],
            };
            scratch.push(w);
        }
        *scratch.last().unwrap()
    }

    /// All models over `universe`, lowest variable id varying fastest.
    pub fn enumerate_models(&self, universe: &BTreeSet<Var>) -> Result<Vec<Assignment>, StrDnnfError> {
        const MAX: usize = 24;
        if universe.len() > MAX {
            return Err(StrDnnfError::TooManyVars {
                vars: universe.len(),
                max: MAX,
            });
        }
        if let Some(v) = self.vars().into_iter().find(|v| !universe.contains(v)) {
            return Err(StrDnnfError::Unassigned(v));
        }
        let vars: Vec<Var> = universe.iter().copied().collect();
        let n = vars.len();
        let total = 1u64 << n;
        let mut out = Vec::new();
        let mut scratch = Vec::new();
        let blocks = total.div_ceil(64);
        for b in 0..blocks {
            let word = |v: Var| -> u64 {
                let j = vars.binary_search(&v).unwrap();
                crate::oracle::var_word(j, b)
            };
            let w = self.eval_block(&word, &mut scratch);
            for k in 0..64u64 {
                let i = b * 64 + k;
                if i >= total {
                    break;
                }
                if w >> k & 1 == 1 {
                    out.push(Assignment::from_pairs(
                        vars.iter().enumerate().map(|(j, &v)| (v, i >> j & 1 == 1)),
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Replaces the vtree handle with an equal one (used when traces share
    /// one `Arc` per distinct vtree).
    pub fn with_vtree(mut self, vtree: Arc<Vtree>) -> Result<StrDnnf, StrDnnfError> {
        if !vtree.same_vtree(&self.vtree) {
            return Err(StrDnnfError::VtreeMismatch);
        }
        self.vtree = vtree;
        Ok(self)
    }
}

#[cfg(test)]
mod tests;
