//! Charged multigraphs and their Tseitin formulas.

mod generate;
mod graph;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cnf::{Assignment, Clause, Cnf, Lit, Var};

pub use generate::{complete, cycle, grid, path, random_regular, Charges};
pub use graph::{ChargedGraph, Edge};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TseitinError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("variable {0} labels two edges")]
    DuplicateVar(Var),
    #[error("edge id {0} used twice")]
    DuplicateEdgeId(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("clause {0} belongs to no vertex constraint")]
    ForeignClause(Clause),
    #[error("variable {0} is not an edge variable")]
    NotAnEdgeVar(Var),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The clauses of `χ_{v,c}` in a fixed order: the falsifying assignments of
/// `E(v)` counted in binary, first incident edge least significant.
pub fn vertex_clauses(g: &ChargedGraph, v: usize) -> Vec<Clause> {
    let vars: Vec<Var> = g.incident(v).iter().map(|&i| g.edge(i).var).collect();
    let d = vars.len();
    let mut out = Vec::with_capacity(1 << d.saturating_sub(1));
    for bits in 0u64..1 << d {
        if (bits.count_ones() % 2 == 1) != g.charge(v) {
            // falsified exactly by `bits`: x where bits says 0, ¬x where 1
            let lits = vars
                .iter()
                .enumerate()
                .map(|(j, &x)| Lit::new(x, bits >> j & 1 == 0));
            out.push(Clause::new(lits).expect("edge variables are distinct"));
        }
    }
    out
}

/// `T(G, c)` over the edge variables, vertex by vertex.
pub fn tseitin_cnf(g: &ChargedGraph) -> Cnf {
    let clauses = g.vertices().flat_map(|v| vertex_clauses(g, v)).collect();
    Cnf::new(g.vars(), clauses).unwrap()
}

/// Satisfiable iff every connected component has even charge.
pub fn is_satisfiable_criterion(g: &ChargedGraph) -> bool {
    g.components()
        .iter()
        .all(|c| !c.iter().fold(false, |acc, &v| acc ^ g.charge(v)))
}

/// Removes the assigned edges; every edge set to 1 flips both endpoints.
pub fn condition_charges(g: &ChargedGraph, a: &Assignment) -> Result<ChargedGraph, TseitinError> {
    let mut charge = g.charges().to_vec();
    let mut drop = BTreeSet::new();
    for (x, val) in a.iter() {
        let i = g.edge_of_var(x).ok_or(TseitinError::NotAnEdgeVar(x))?;
        drop.insert(i);
        if val {
            let e = g.edge(i);
            charge[e.u] ^= true;
            charge[e.v] ^= true;
        }
    }
    Ok(g.with_charges(charge).remove_edges(&drop))
}

/// Vertices whose constraint has at least one clause missing from `f`.
pub fn incomplete_constraints(f: &Cnf, g: &ChargedGraph) -> Result<BTreeSet<usize>, TseitinError> {
    let present = present_clauses(f, g)?;
    Ok(g.vertices()
        .filter(|&v| present[v].len() < constraint_size(g, v))
        .collect())
}

/// Number of clauses of `χ_v`.
pub fn constraint_size(g: &ChargedGraph, v: usize) -> usize {
    match g.degree(v) {
        0 => g.charge(v) as usize,
        d => 1 << (d - 1),
    }
}

/// For every vertex, the distinct clauses of `f` that belong to `χ_v`.
pub fn present_clauses(f: &Cnf, g: &ChargedGraph) -> Result<Vec<BTreeSet<Clause>>, TseitinError> {
    let mut by_vars: HashMap<Vec<Var>, Vec<usize>> = HashMap::new();
    for v in g.vertices() {
        let mut vars: Vec<Var> = g.incident(v).iter().map(|&i| g.edge(i).var).collect();
        vars.sort();
        by_vars.entry(vars).or_default().push(v);
    }
    let mut present = vec![BTreeSet::new(); g.num_vertices()];
    for c in f.clauses() {
        let vars: Vec<Var> = c.vars().collect();
        let negs = c.lits().iter().filter(|l| !l.is_positive()).count();
        let mut owned = false;
        for &v in by_vars.get(&vars).map(Vec::as_slice).unwrap_or(&[]) {
            if (negs % 2 == 1) != g.charge(v) {
                present[v].insert(c.clone());
                owned = true;
            }
        }
        if !owned {
            return Err(TseitinError::ForeignClause(c.clone()));
        }
    }
    Ok(present)
}

/// A satisfying assignment of `T(G, c)` over all edge variables, built on a
/// spanning forest (non-tree edges are 0), or `None` when unsatisfiable.
pub fn solve(g: &ChargedGraph) -> Option<Assignment> {
    if !is_satisfiable_criterion(g) {
        return None;
    }
    let n = g.num_vertices();
    let mut value = vec![false; g.num_edges()];
    let mut need = g.charges().to_vec();
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        // DFS order with the tree edge to each vertex's parent
        let mut order = vec![(root, usize::MAX)];
        let mut k = 0;
        while k < order.len() {
            let x = order[k].0;
            k += 1;
            for &i in g.incident(x) {
                let y = g.edge(i).other(x);
                if !seen[y] {
                    seen[y] = true;
                    order.push((y, i));
                }
            }
        }
        for &(x, up) in order.iter().skip(1).rev() {
            if need[x] {
                value[up] = true;
                need[x] = false;
                let p = g.edge(up).other(x);
                need[p] ^= true;
            }
        }
        debug_assert!(!need[root]);
    }
    Some(Assignment::from_pairs(
        g.edges().iter().zip(value).map(|(e, b)| (e.var, b)),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodlaenderError<E> {
    NotASeparator(usize),
    /// No component keeps the treewidth of the whole graph.
    NoComponent,
    Oracle(E),
}

impl<E: fmt::Display> fmt::Display for BodlaenderError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodlaenderError::NotASeparator(u) => write!(f, "vertex {u} is not a 1-separator"),
            BodlaenderError::NoComponent => write!(f, "no component attains the treewidth of the graph"),
            BodlaenderError::Oracle(e) => write!(f, "treewidth oracle: {e}"),
        }
    }
}

impl<E: fmt::Debug + fmt::Display> std::error::Error for BodlaenderError<E> {}

/// A component `V′` of `G − u` with `tw(G[V′ ∪ {u}]) = tw(G)`. `tw` returns
/// the treewidth of the subgraph induced by a vertex set; components are
/// tried in order of their smallest vertex.
pub fn bodlaender_component<E>(
    g: &ChargedGraph,
    u: usize,
    mut tw: impl FnMut(&BTreeSet<usize>) -> Result<usize, E>,
) -> Result<BTreeSet<usize>, BodlaenderError<E>> {
    if !g.one_separators().contains(&u) {
        return Err(BodlaenderError::NotASeparator(u));
    }
    let all: BTreeSet<usize> = g.vertices().collect();
    let target = tw(&all).map_err(BodlaenderError::Oracle)?;
    for comp in g.components_minus(u) {
        let mut with_u = comp.clone();
        with_u.insert(u);
        if tw(&with_u).map_err(BodlaenderError::Oracle)? == target {
            return Ok(comp);
        }
    }
    Err(BodlaenderError::NoComponent)
}
