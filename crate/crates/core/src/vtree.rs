//! Variable trees.
//!
//! Node ids are preorder indices, so the root is 0, the left child of an
//! internal node `i` is `i + 1`, and the subtree of `i` is the id interval
//! `i..end(i)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VNode {
    Leaf(Var),
    Internal(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Linear,
    Balanced,
    Random(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VtreeError {
    #[error("a vtree needs at least one variable")]
    Empty,
    #[error("variable {0} appears twice")]
    Duplicate(Var),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node ids are not a preorder numbering rooted at 0")]
    NotPreorder,
}

#[derive(Debug, Clone)]
pub struct Vtree {
    nodes: Vec<VNode>,
    parent: Vec<Option<usize>>,
    end: Vec<usize>,
    depth: Vec<usize>,
    // Leaves under a node occupy the rank interval `leaf_lo..leaf_hi`.
    leaf_lo: Vec<usize>,
    leaf_hi: Vec<usize>,
    leaves: Vec<usize>,
    order: Vec<Var>,
    leaf_of: HashMap<Var, usize>,
}

impl PartialEq for Vtree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}
impl Eq for Vtree {}

enum Tmp {
    Leaf(Var),
    Node(Box<Tmp>, Box<Tmp>),
}

impl Vtree {
    pub fn build(vars: &[Var], shape: Shape) -> Result<Vtree, VtreeError> {
        if vars.is_empty() {
            return Err(VtreeError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &v in vars {
            if !seen.insert(v) {
                return Err(VtreeError::Duplicate(v));
            }
        }
        let tmp = match shape {
            Shape::Linear => linear(vars),
            Shape::Balanced => balanced(vars),
            Shape::Random(seed) => random(vars, seed),
        };
        let mut nodes = Vec::with_capacity(2 * vars.len() - 1);
        flatten(&tmp, &mut nodes);
        Ok(Vtree::from_nodes(nodes))
    }

    fn from_nodes(nodes: Vec<VNode>) -> Vtree {
        let n = nodes.len();
        let mut parent = vec![None; n];
        let mut end = vec![0; n];
        let mut depth = vec![0; n];
        let mut leaf_lo = vec![0; n];
        let mut leaf_hi = vec![0; n];
        let mut leaves = Vec::new();
        let mut order = Vec::new();
        let mut leaf_of = HashMap::new();
        for i in 0..n {
            if let VNode::Internal(l, r) = nodes[i] {
                parent[l] = Some(i);
                parent[r] = Some(i);
                depth[l] = depth[i] + 1;
                depth[r] = depth[i] + 1;
            }
        }
        for i in (0..n).rev() {
            match nodes[i] {
                VNode::Leaf(_) => end[i] = i + 1,
                VNode::Internal(_, r) => end[i] = end[r],
            }
        }
        for (i, node) in nodes.iter().enumerate() {
            if let VNode::Leaf(v) = *node {
                leaf_lo[i] = leaves.len();
                leaf_hi[i] = leaves.len() + 1;
                leaf_of.insert(v, i);
                leaves.push(i);
                order.push(v);
            }
        }
        for i in (0..n).rev() {
            if let VNode::Internal(l, r) = nodes[i] {
                leaf_lo[i] = leaf_lo[l];
                leaf_hi[i] = leaf_hi[r];
            }
        }
        Vtree {
            nodes,
            parent,
            end,
            depth,
            leaf_lo,
            leaf_hi,
            leaves,
            order,
            leaf_of,
        }
    }

    pub const ROOT: usize = 0;

    pub fn root(&self) -> usize {
        0
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn node(&self, t: usize) -> VNode {
        self.nodes[t]
    }
    pub fn nodes(&self) -> &[VNode] {
        &self.nodes
    }
    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }
    pub fn depth(&self, t: usize) -> usize {
        self.depth[t]
    }
    pub fn is_leaf(&self, t: usize) -> bool {
        matches!(self.nodes[t], VNode::Leaf(_))
    }
    pub fn children(&self, t: usize) -> Option<(usize, usize)> {
        match self.nodes[t] {
            VNode::Internal(l, r) => Some((l, r)),
            VNode::Leaf(_) => None,
        }
    }
    pub fn leaf_var(&self, t: usize) -> Option<Var> {
        match self.nodes[t] {
            VNode::Leaf(v) => Some(v),
            VNode::Internal(..) => None,
        }
    }
    pub fn leaf(&self, v: Var) -> Option<usize> {
        self.leaf_of.get(&v).copied()
    }
    pub fn contains_var(&self, v: Var) -> bool {
        self.leaf_of.contains_key(&v)
    }
    pub fn num_vars(&self) -> usize {
        self.order.len()
    }

    /// Variables in left-to-right leaf order.
    pub fn vars(&self) -> &[Var] {
        &self.order
    }

    /// `var(t)` in left-to-right leaf order.
    pub fn vars_below(&self, t: usize) -> &[Var] {
        &self.order[self.leaf_lo[t]..self.leaf_hi[t]]
    }

    /// Position of `v` in left-to-right leaf order.
    pub fn rank(&self, v: Var) -> Option<usize> {
        self.leaf(v).map(|t| self.leaf_lo[t])
    }

    pub fn rank_range(&self, t: usize) -> (usize, usize) {
        (self.leaf_lo[t], self.leaf_hi[t])
    }

    pub fn leaf_nodes(&self) -> &[usize] {
        &self.leaves
    }

    /// `a` is `b` or an ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        a <= b && b < self.end[a]
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// For `a` strictly above `b`: the child of `a` on the way to `b`,
    /// together with the other child.
    pub fn side_of(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (l, r) = self.children(a)?;
        if self.is_ancestor(l, b) {
            Some((l, r))
        } else if self.is_ancestor(r, b) {
            Some((r, l))
        } else {
            None
        }
    }

    pub fn same_vtree(&self, other: &Vtree) -> bool {
        self == other
    }

    /// Text form: `vtree N`, then one line per node in postorder so the
    /// root (id 0) comes last.
    pub fn to_text(&self) -> String {
        let mut s = format!("vtree {}\n", self.nodes.len());
        let mut stack = vec![(0usize, false)];
        while let Some((t, done)) = stack.pop() {
            match self.nodes[t] {
                VNode::Leaf(v) => {
                    let _ = writeln!(s, "L {} {}", t, v.0);
                }
                VNode::Internal(l, r) => {
                    if done {
                        let _ = writeln!(s, "I {} {} {}", t, l, r);
                    } else {
                        stack.push((t, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Vtree, VtreeError> {
        let mut count: Option<usize> = None;
        let mut slots: Vec<Option<VNode>> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('c') {
                continue;
            }
            let err = |msg: &str| VtreeError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = t.split_whitespace().collect();
            let num = |i: usize| -> Result<usize, VtreeError> {
                parts
                    .get(i)
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| err("expected a number"))
            };
            match parts[0] {
                "vtree" => {
                    if count.is_some() {
                        return Err(err("duplicate header"));
                    }
                    let n = num(1)?;
                    count = Some(n);
                    slots = vec![None; n];
                }
                "L" | "I" => {
                    let n = count.ok_or_else(|| err("node before header"))?;
                    let id = num(1)?;
                    if id >= n {
                        return Err(err("node id out of range"));
                    }
                    if slots[id].is_some() {
                        return Err(err("node id repeated"));
                    }
                    let node = if parts[0] == "L" {
                        if parts.len() != 3 {
                            return Err(err("expected `L <id> <var>`"));
                        }
                        let v = num(2)?;
                        if v == 0 || v > u32::MAX as usize {
                            return Err(err("variable ids are positive"));
                        }
                        VNode::Leaf(Var(v as u32))
                    } else {
                        if parts.len() != 4 {
                            return Err(err("expected `I <id> <left> <right>`"));
                        }
                        let (l, r) = (num(2)?, num(3)?);
                        if l >= n || r >= n {
                            return Err(err("child id out of range"));
                        }
                        VNode::Internal(l, r)
                    };
                    slots[id] = Some(node);
                }
                _ => return Err(err("unknown line")),
            }
        }
        let n = count.ok_or(VtreeError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if n == 0 {
            return Err(VtreeError::Empty);
        }
        let mut nodes = Vec::with_capacity(n);
        for (i, s) in slots.into_iter().enumerate() {
            nodes.push(s.ok_or(VtreeError::Parse {
                line: 0,
                msg: format!("node {i} missing"),
            })?);
        }
        // Preorder check: walking from 0 must visit ids 0,1,2,... in order.
        let mut expect = 0usize;
        let mut stack = vec![0usize];
        let mut vars = BTreeSet::new();
        while let Some(t) = stack.pop() {
            if t != expect {
                return Err(VtreeError::NotPreorder);
            }
            expect += 1;
            match nodes[t] {
                VNode::Leaf(v) => {
                    if !vars.insert(v) {
                        return Err(VtreeError::Duplicate(v));
                    }
                }
                VNode::Internal(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
            if expect > n {
                return Err(VtreeError::NotPreorder);
            }
        }
        if expect != n {
            return Err(VtreeError::NotPreorder);
        }
        Ok(Vtree::from_nodes(nodes))
    }
}

fn linear(vars: &[Var]) -> Tmp {
    let mut t = Tmp::Leaf(vars[vars.len() - 1]);
    for &v in vars[..vars.len() - 1].iter().rev() {
        t = Tmp::Node(Box::new(Tmp::Leaf(v)), Box::new(t));
    }
    t
}

fn balanced(vars: &[Var]) -> Tmp {
    if vars.len() == 1 {
        return Tmp::Leaf(vars[0]);
    }
    let mid = vars.len().div_ceil(2);
    Tmp::Node(Box::new(balanced(&vars[..mid])), Box::new(balanced(&vars[mid..])))
}

// Rémy's algorithm: uniform over binary tree shapes with `vars.len()` leaves.
fn random(vars: &[Var], seed: u64) -> Tmp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // node k: children[k] = Some((l, r)) for internal nodes
    let mut children: Vec<Option<(usize, usize)>> = vec![None];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut root = 0usize;
    for _ in 1..vars.len() {
        let x = rng.gen_range(0..children.len());
        let leaf = children.len();
        children.push(None);
        parent.push(None);
        let inner = children.len();
        let pair = if rng.gen_bool(0.5) { (x, leaf) } else { (leaf, x) };
        children.push(Some(pair));
        parent.push(parent[x]);
        match parent[x] {
            Some(p) => {
                let (l, r) = children[p].unwrap();
                children[p] = Some(if l == x { (inner, r) } else { (l, inner) });
            }
            None => root = inner,
        }
        parent[x] = Some(inner);
        parent[leaf] = Some(inner);
    }
    let mut next = 0usize;
    fn rebuild(k: usize, ch: &[Option<(usize, usize)>], vars: &[Var], next: &mut usize) -> Tmp {
        match ch[k] {
            None => {
                let v = vars[*next];
                *next += 1;
                Tmp::Leaf(v)
            }
            Some((l, r)) => {
                let a = rebuild(l, ch, vars, next);
                let b = rebuild(r, ch, vars, next);
                Tmp::Node(Box::new(a), Box::new(b))
            }
        }
    }
    rebuild(root, &children, vars, &mut next)
}

fn flatten(t: &Tmp, out: &mut Vec<VNode>) -> usize {
    let id = out.len();
    match t {
        Tmp::Leaf(v) => out.push(VNode::Leaf(*v)),
        Tmp::Node(l, r) => {
            out.push(VNode::Internal(0, 0));
            let li = flatten(l, out);
            let ri = flatten(r, out);
            out[id] = VNode::Internal(li, ri);
        }
    }
    id
}
