#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdnnf::tseitin::tseitin_cnf;
use sdnnf::{ChargedGraph, Clause, Cnf, Lit, Var};

/// The triangle with edge variables x1 = {0,1}, x2 = {0,2}, x3 = {1,2} and
/// the odd charge on vertex 1.
pub fn triangle() -> ChargedGraph {
    ChargedGraph::from_pairs(vec![false, true, false], &[(0, 1), (0, 2), (1, 2)]).unwrap()
}

pub fn clause(lits: &[i64]) -> Clause {
    Clause::from_dimacs(lits).unwrap()
}

pub fn clause_set(f: &Cnf) -> BTreeSet<Clause> {
    f.clauses().iter().cloned().collect()
}

/// Clauses of width 1 to 3 over `x1..xn`; tautologies are redrawn.
pub fn random_cnf(rng: &mut ChaCha8Rng, n: u32, m: usize) -> Cnf {
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let k = rng.gen_range(1..=3);
        let lits: Vec<i64> = (0..k)
            .map(|_| {
                let v = rng.gen_range(1..=n) as i64;
                if rng.gen() {
                    v
                } else {
                    -v
                }
            })
            .collect();
        if let Ok(c) = Clause::from_dimacs(&lits) {
            clauses.push(c);
        }
    }
    Cnf::with_vars(n, clauses).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `T(G)` with a fresh variable `x` added positively to every clause.
pub fn augmented(g: &ChargedGraph) -> (Cnf, Var) {
    let t = tseitin_cnf(g);
    let x = Var(g.num_edges() as u32 + 1);
    let clauses = t
        .clauses()
        .iter()
        .map(|c| {
            let mut lits = c.lits().to_vec();
            lits.push(Lit::new(x, true));
            Clause::new(lits).unwrap()
        })
        .collect();
    let mut u = t.universe().clone();
    u.insert(x);
    (Cnf::new(u, clauses).unwrap(), x)
}

/// Every simple graph on `n` labelled vertices with at most `max_edges`
/// edges, as edge lists.
pub fn simple_graphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << slots.len() {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        out.push((0..slots.len()).filter(|&i| mask >> i & 1 == 1).map(|i| slots[i]).collect());
    }
    out
}

pub fn graph(n: usize, pairs: &[(usize, usize)]) -> ChargedGraph {
    ChargedGraph::from_pairs(vec![false; n], pairs).unwrap()
}

/// All `2^|V|` charge functions on `g`.
pub fn all_charges(g: &ChargedGraph) -> impl Iterator<Item = ChargedGraph> + '_ {
    let n = g.num_vertices();
    (0u32..1 << n).map(move |bits| g.with_charges((0..n).map(|v| bits >> v & 1 == 1).collect()))
}

/// Labelled trees on `n ≥ 2` vertices from Prüfer sequences.
pub fn all_trees(n: usize) -> Vec<ChargedGraph> {
    assert!(n >= 2);
    if n == 2 {
        return vec![graph(2, &[(0, 1)])];
    }
    let mut out = Vec::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        out.push(graph(n, &prufer_edges(n, &seq)));
    }
    out
}

fn prufer_edges(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
