use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{Node, NodeId, StrDnnf, StrDnnfError};
use crate::cnf::Lit;
use crate::vtree::Vtree;

/// Hash-consing arena. Nodes are keyed on `(node, λ)`.
///
/// Every node other than `False` built here is satisfiable, so an
/// unsatisfiable result is exactly the `False` node.
pub(crate) struct Builder {
    pub vtree: Arc<Vtree>,
    nodes: Vec<Node>,
    lambda: Vec<u32>,
    table: FxHashMap<(Node, u32), NodeId>,
    edges: usize,
    limit: usize,
}

impl Builder {
    pub fn new(vtree: Arc<Vtree>) -> Builder {
        Builder::with_limit(vtree, usize::MAX)
    }

    pub fn with_limit(vtree: Arc<Vtree>, limit: usize) -> Builder {
        Builder {
            vtree,
            nodes: Vec::new(),
            lambda: Vec::new(),
            table: FxHashMap::default(),
            edges: 0,
            limit,
        }
    }

    fn intern(&mut self, node: Node, lam: usize) -> Result<NodeId, StrDnnfError> {
        let key = (node, lam as u32);
        if let Some(&id) = self.table.get(&key) {
            return Ok(id);
        }
        if node.children().is_some() {
            self.edges += 2;
            if self.edges > self.limit {
                return Err(StrDnnfError::LimitExceeded { limit: self.limit });
            }
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.lambda.push(lam as u32);
        self.table.insert(key, id);
        Ok(id)
    }

    pub fn lambda(&self, id: NodeId) -> usize {
        self.lambda[id as usize] as usize
    }

    pub fn zero(&mut self) -> NodeId {
        self.intern(Node::False, Vtree::ROOT).unwrap()
    }
    pub fn one(&mut self, t: usize) -> NodeId {
        self.intern(Node::True, t).unwrap()
    }
    pub fn is_zero(&self, id: NodeId) -> bool {
        self.nodes[id as usize] == Node::False
    }
    pub fn is_one(&self, id: NodeId) -> bool {
        self.nodes[id as usize] == Node::True
    }
    pub fn lit(&mut self, l: Lit, t: usize) -> NodeId {
        self.intern(Node::Lit(l), t).unwrap()
    }

    /// `∧` at `t` with children already placed under distinct children of
    /// `t`; the child under the left side is stored first.
    pub fn and_raw(&mut self, a: NodeId, b: NodeId, t: usize) -> Result<NodeId, StrDnnfError> {
        let (l, _) = self.vtree.children(t).expect("∧ at a leaf");
        let (a, b) = if self.vtree.is_ancestor(l, self.lambda(a)) {
            (a, b)
        } else {
            (b, a)
        };
        self.intern(Node::And(a, b), t)
    }

    /// `∨` at `t`; children must already be labelled `t`.
    pub fn or_raw(&mut self, a: NodeId, b: NodeId, t: usize) -> Result<NodeId, StrDnnfError> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.intern(Node::Or(a, b), t)
    }

    /// Relabels `r` (with `λ(r)` under `t`) to exactly `t`. Literals and
    /// constants are relabelled in place, other nodes get a pad `∧(r, 1)`.
    pub fn lift(&mut self, r: NodeId, t: usize) -> Result<NodeId, StrDnnfError> {
        if self.lambda(r) == t {
            return Ok(r);
        }
        match self.nodes[r as usize] {
            Node::False => Ok(r),
            Node::True => Ok(self.one(t)),
            Node::Lit(l) => Ok(self.lit(l, t)),
            _ => {
                let (_, other) = self
                    .vtree
                    .side_of(t, self.lambda(r))
                    .expect("lift target is not above the node");
                let one = self.one(other);
                self.and_raw(r, one, t)
            }
        }
    }

    fn to_leaf(&mut self, id: NodeId) -> NodeId {
        match self.nodes[id as usize] {
            Node::Lit(l) => {
                let leaf = self.vtree.leaf(l.var()).unwrap();
                self.lit(l, leaf)
            }
            _ => id,
        }
    }

    /// Disjunction at `t` of two nodes positioned under `t`.
    pub fn mk_or(&mut self, a: NodeId, b: NodeId, t: usize) -> Result<NodeId, StrDnnfError> {
        if self.is_zero(a) || a == b {
            return Ok(b);
        }
        if self.is_zero(b) {
            return Ok(a);
        }
        if self.is_one(a) || self.is_one(b) {
            return Ok(self.one(t));
        }
        let la = self.lift(a, t)?;
        let lb = self.lift(b, t)?;
        if la == lb {
            return Ok(la);
        }
        self.or_raw(la, lb, t)
    }

    /// Conjunction at `t` of `a` (under the left child) and `b` (under the
    /// right child). Constants are relabelled to the matching child.
    pub fn mk_and(&mut self, a: NodeId, b: NodeId, t: usize) -> Result<NodeId, StrDnnfError> {
        if self.is_zero(a) || self.is_zero(b) {
            return Ok(self.zero());
        }
        let (l, r) = self.vtree.children(t).expect("∧ at a leaf");
        let (a, b) = (self.to_leaf(a), self.to_leaf(b));
        match (self.is_one(a), self.is_one(b)) {
            (true, true) => Ok(self.one(t)),
            (true, false) => {
                let a = self.one(l);
                self.and_raw(a, b, t)
            }
            (false, true) => {
                let b = self.one(r);
                self.and_raw(a, b, t)
            }
            (false, false) => self.and_raw(a, b, t),
        }
    }

    /// Copies every node of `s` into the arena; returns the id map.
    pub fn import(&mut self, s: &StrDnnf) -> Result<Vec<NodeId>, StrDnnfError> {
        let mut map = Vec::with_capacity(s.node_count());
        for (i, n) in s.nodes().iter().enumerate() {
            let lam = s.lambda(i as NodeId);
            let id = match *n {
                Node::False => self.zero(),
                Node::True => self.one(lam),
                Node::Lit(l) => self.lit(l, lam),
                Node::And(a, b) => self.intern(Node::And(map[a as usize], map[b as usize]), lam)?,
                Node::Or(a, b) => {
                    let (a, b) = (map[a as usize], map[b as usize]);
                    self.or_raw(a, b, lam)?
                }
            };
            map.push(id);
        }
        Ok(map)
    }

    fn strip(&self, mut id: NodeId) -> NodeId {
        loop {
            match self.nodes[id as usize] {
                Node::And(a, b) if self.is_one(b) => id = a,
                Node::And(a, b) if self.is_one(a) => id = b,
                _ => return id,
            }
        }
    }

    /// Extracts the circuit rooted at `root`: unreachable nodes are dropped,
    /// pads under `∧` parents (and at the root) are bypassed, and the result
    /// is hash-consed again. Never adds edges.
    pub fn finish(&self, root: NodeId) -> StrDnnf {
        let root = self.strip(root);
        let mut out = Builder::new(self.vtree.clone());
        match self.nodes[root as usize] {
            Node::False => return StrDnnf::constant(&self.vtree, false),
            Node::True => return StrDnnf::constant(&self.vtree, true),
            _ => {}
        }
        const UNSET: NodeId = NodeId::MAX;
        let mut map = vec![UNSET; self.nodes.len()];
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if map[id as usize] != UNSET {
                continue;
            }
            let node = self.nodes[id as usize];
            let lam = self.lambda(id);
            let kids = match node {
                Node::And(a, b) => Some((self.strip(a), self.strip(b))),
                Node::Or(a, b) => Some((a, b)),
                _ => None,
            };
            if let Some((a, b)) = kids {
                if !expanded {
                    stack.push((id, true));
                    if map[b as usize] == UNSET {
                        stack.push((b, false));
                    }
                    if map[a as usize] == UNSET {
                        stack.push((a, false));
                    }
                    continue;
                }
                let (na, nb) = (map[a as usize], map[b as usize]);
                map[id as usize] = match node {
                    Node::And(..) => out.and_raw(na, nb, lam).unwrap(),
                    // distinct pads can collapse to the same node
                    _ if na == nb => na,
                    _ => out.or_raw(na, nb, lam).unwrap(),
                };
            } else {
                map[id as usize] = out.intern(node, lam).unwrap();
            }
        }
        let new_root = map[root as usize];
        // `out` only holds reachable nodes; the root is the last one created.
        debug_assert_eq!(new_root as usize, out.nodes.len() - 1);
        StrDnnf::from_parts(self.vtree.clone(), out.nodes, out.lambda)
    }
}
