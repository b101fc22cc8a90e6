use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use super::TseitinError;
use crate::cnf::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub var: Var,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph on vertices `0..n` with a parity charge per vertex
/// and a distinct variable per edge. Edges are addressed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargedGraph {
    charge: Vec<bool>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl ChargedGraph {
    pub fn new(charge: Vec<bool>, edges: Vec<Edge>) -> Result<ChargedGraph, TseitinError> {
        let n = charge.len();
        let mut vars = HashSet::new();
        let mut ids = HashSet::new();
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(TseitinError::UnknownVertex(e.u.max(e.v)));
            }
            if e.u == e.v {
                return Err(TseitinError::SelfLoop(e.u));
            }
            if !vars.insert(e.var) {
                return Err(TseitinError::DuplicateVar(e.var));
            }
            if !ids.insert(e.id) {
                return Err(TseitinError::DuplicateEdgeId(e.id));
            }
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        Ok(ChargedGraph {
            charge,
            edges,
            incident,
        })
    }

    /// Edges given as `(u, v)` pairs get ids `0..` and variables `1..`.
    pub fn from_pairs(charge: Vec<bool>, pairs: &[(usize, usize)]) -> Result<ChargedGraph, TseitinError> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| Edge {
                id: i,
                u,
                v,
                var: Var(i as u32 + 1),
            })
            .collect();
        ChargedGraph::new(charge, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.charge.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.charge.len()
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }
    pub fn charge(&self, v: usize) -> bool {
        self.charge[v]
    }
    pub fn charges(&self) -> &[bool] {
        &self.charge
    }
    /// `E(v)` as edge positions.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }
    /// `Δ`.
    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }
    pub fn vars(&self) -> BTreeSet<Var> {
        self.edges.iter().map(|e| e.var).collect()
    }
    pub fn edge_of_var(&self, x: Var) -> Option<usize> {
        self.edges.iter().position(|e| e.var == x)
    }
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&i| self.edges[i].other(v))
    }
    pub fn total_charge(&self) -> bool {
        self.charge.iter().fold(false, |a, &c| a ^ c)
    }
    pub fn with_charges(&self, charge: Vec<bool>) -> ChargedGraph {
        assert_eq!(charge.len(), self.charge.len());
        ChargedGraph {
            charge,
            ..self.clone()
        }
    }

    /// `E(A, B)`.
    pub fn edges_between(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                (a.contains(&e.u) && b.contains(&e.v)) || (a.contains(&e.v) && b.contains(&e.u))
            })
            .collect()
    }

    /// `out(S)`: edges with exactly one endpoint in `S`.
    pub fn out(&self, s: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| s.contains(&self.edges[i].u) != s.contains(&self.edges[i].v))
            .collect()
    }

    /// `G[S]` with vertices renumbered in increasing order; edge ids,
    /// variables and charges are kept. Returns the old id of each new vertex.
    pub fn induced(&self, s: &BTreeSet<usize>) -> (ChargedGraph, Vec<usize>) {
        let old: Vec<usize> = s.iter().copied().collect();
        let mut new = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in old.iter().enumerate() {
            new[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| s.contains(&e.u) && s.contains(&e.v))
            .map(|e| Edge {
                u: new[e.u],
                v: new[e.v],
                ..*e
            })
            .collect();
        let charge = old.iter().map(|&v| self.charge[v]).collect();
        (ChargedGraph::new(charge, edges).unwrap(), old)
    }

    /// Drops the edges at the given positions.
    pub fn remove_edges(&self, drop: &BTreeSet<usize>) -> ChargedGraph {
        let edges = (0..self.edges.len())
            .filter(|i| !drop.contains(i))
            .map(|i| self.edges[i])
            .collect();
        ChargedGraph::new(self.charge.clone(), edges).unwrap()
    }

    fn components_without(&self, skip: Option<usize>) -> Vec<BTreeSet<usize>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        if let Some(s) = skip {
            seen[s] = true;
        }
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        self.components_without(None)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Vertices whose removal increases the number of components.
    pub fn one_separators(&self) -> Vec<usize> {
        let base = self.components().len();
        self.vertices()
            .filter(|&v| self.components_without(Some(v)).len() > base)
            .collect()
    }

    /// Connected, at least two vertices, and no 1-separator (so `K2` counts).
    pub fn is_2connected(&self) -> bool {
        self.num_vertices() >= 2 && self.is_connected() && self.one_separators().is_empty()
    }

    /// Components of `G − u`.
    pub fn components_minus(&self, u: usize) -> Vec<BTreeSet<usize>> {
        self.components_without(Some(u))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {} {}", self.num_vertices(), self.num_edges());
        for (v, &c) in self.charge.iter().enumerate() {
            let _ = writeln!(out, "v {v} {}", c as u8);
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {} {}", e.id, e.u, e.v, e.var.0);
        }
        out
    }

    pub fn parse(text: &str) -> Result<ChargedGraph, TseitinError> {
        let mut header: Option<(usize, usize)> = None;
        let mut charge: Vec<bool> = Vec::new();
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('c') {
                continue;
            }
            let err = |msg: &str| TseitinError::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = t.split_whitespace().collect();
            let nums: Vec<usize> = parts[1..]
                .iter()
                .map(|p| p.parse().map_err(|_| err("expected a non-negative integer")))
                .collect::<Result<_, _>>()?;
            match (parts[0], nums.len()) {
                ("graph", 2) if header.is_none() => header = Some((nums[0], nums[1])),
                ("v", 2) if header.is_some() => {
                    if nums[0] != charge.len() {
                        return Err(err("vertex ids must be 0, 1, ... in order"));
                    }
                    if nums[1] > 1 {
                        return Err(err("charge must be 0 or 1"));
                    }
                    charge.push(nums[1] == 1);
                }
                ("e", 4) if header.is_some() => {
                    if nums[3] == 0 || nums[3] > u32::MAX as usize {
                        return Err(err("edge variable out of range"));
                    }
                    edges.push(Edge {
                        id: nums[0],
                        u: nums[1],
                        v: nums[2],
                        var: Var(nums[3] as u32),
                    });
                }
                _ => return Err(err("unexpected line")),
            }
        }
        let (n, m) = header.ok_or(TseitinError::Parse {
            line: 0,
            msg: "missing `graph` header".into(),
        })?;
        if charge.len() != n || edges.len() != m {
            return Err(TseitinError::Parse {
                line: 0,
                msg: format!(
                    "header declares {n} vertices and {m} edges, found {} and {}",
                    charge.len(),
                    edges.len()
                ),
            });
        }
        ChargedGraph::new(charge, edges)
    }
}
