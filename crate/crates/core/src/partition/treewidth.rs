//! Exact treewidth by dynamic programming over eliminated vertex sets.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use rustc_hash::FxHashMap;

use super::PartitionError;
use crate::tseitin::ChargedGraph;

/// Largest component handed to the subset DP.
pub const DEFAULT_TW_LIMIT: usize = 20;
const HARD_LIMIT: usize = 31;
/// Permutation search stops here.
pub const BRUTE_FORCE_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    pub tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag minus one; 0 when there are no bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "td {} {}", self.bags.len(), self.width());
        for (i, b) in self.bags.iter().enumerate() {
            let _ = writeln!(out, "b {i} {}", b.iter().join(" "));
        }
        for &(i, j) in &self.tree {
            let _ = writeln!(out, "t {i} {j}");
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Treewidth {
    pub width: usize,
    pub order: Vec<usize>,
    pub decomposition: TreeDecomposition,
}

/// Simple adjacency; parallel edges collapse.
fn adjacency(g: &ChargedGraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.num_vertices()];
    for e in g.edges() {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    adj
}

pub fn treewidth_exact(g: &ChargedGraph) -> Result<Treewidth, PartitionError> {
    treewidth_with_limit(g, DEFAULT_TW_LIMIT)
}

/// Components are solved separately. The DP runs only when the min-fill
/// upper bound and the contraction lower bound disagree, so the limit applies
/// to those components alone.
pub fn treewidth_with_limit(g: &ChargedGraph, limit: usize) -> Result<Treewidth, PartitionError> {
    let limit = limit.min(HARD_LIMIT);
    let adj = adjacency(g);
    let mut order = Vec::with_capacity(g.num_vertices());
    let mut width = 0;
    for comp in g.components() {
        let local: Vec<usize> = comp.iter().copied().collect();
        let index = |v: usize| local.binary_search(&v).unwrap();
        let ladj: Vec<BTreeSet<usize>> = local
            .iter()
            .map(|&v| adj[v].iter().map(|&w| index(w)).collect())
            .collect();
        let (ub_order, ub) = min_fill(&ladj);
        let lb = contraction_degeneracy(&ladj);
        let (w, lorder) = if lb >= ub {
            (ub, ub_order)
        } else {
            if local.len() > limit {
                return Err(PartitionError::TooLarge {
                    what: "treewidth component",
                    size: local.len(),
                    limit,
                });
            }
            let masks: Vec<u32> = ladj
                .iter()
                .map(|s| s.iter().fold(0u32, |m, &w| m | 1 << w))
                .collect();
            subset_dp(&masks, lb, ub, ub_order)
        };
        width = width.max(w);
        order.extend(lorder.into_iter().map(|i| local[i]));
    }
    let decomposition = decomposition_from_order(&adj, &order);
    debug_assert_eq!(decomposition.width(), width);
    Ok(Treewidth {
        width,
        order,
        decomposition,
    })
}

/// `tw(G[S])`.
pub fn treewidth_of(g: &ChargedGraph, s: &BTreeSet<usize>) -> Result<usize, PartitionError> {
    Ok(treewidth_exact(&g.induced(s).0)?.width)
}

/// Greedy min-fill ordering; ties by degree, then id.
fn min_fill(adj: &[BTreeSet<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut h = adj.to_vec();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut width = 0;
    for _ in 0..n {
        let fill = |v: usize| {
            let nb: Vec<usize> = h[v].iter().copied().collect();
            let mut f = 0;
            for (i, &a) in nb.iter().enumerate() {
                f += nb[i + 1..].iter().filter(|&&b| !h[a].contains(&b)).count();
            }
            f
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill(v), h[v].len(), v))
            .unwrap();
        width = width.max(h[v].len());
        eliminate(&mut h, v);
        alive[v] = false;
        order.push(v);
    }
    (order, width)
}

fn eliminate(h: &mut [BTreeSet<usize>], v: usize) {
    let nb: Vec<usize> = std::mem::take(&mut h[v]).into_iter().collect();
    for &a in &nb {
        h[a].remove(&v);
        for &b in &nb {
            if a != b {
                h[a].insert(b);
            }
        }
    }
}

/// Minimum degree along min-degree contractions; a minor-monotone lower bound.
fn contraction_degeneracy(adj: &[BTreeSet<usize>]) -> usize {
    let n = adj.len();
    let mut h = adj.to_vec();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut lb = 0;
    while alive.len() >= 2 {
        let v = *alive.iter().min_by_key(|&&v| (h[v].len(), v)).unwrap();
        lb = lb.max(h[v].len());
        alive.remove(&v);
        let Some(&u) = h[v].iter().min_by_key(|&&u| (h[u].len(), u)) else {
            continue;
        };
        for w in std::mem::take(&mut h[v]) {
            h[w].remove(&v);
            if w != u {
                h[w].insert(u);
                h[u].insert(w);
            }
        }
    }
    lb
}

/// Number of vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut frontier = 1u32 << v;
    let mut seen = frontier;
    let mut out = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x] & !seen;
        seen |= nb;
        frontier |= nb & s;
        out |= nb & !s;
    }
    out.count_ones()
}

/// `TW(S) = min_v max(TW(S − v), Q(S − v, v))`, level by level, keeping only
/// sets below the best width known so far.
fn subset_dp(adj: &[u32], lb: usize, ub: usize, ub_order: Vec<usize>) -> (usize, Vec<usize>) {
    let n = adj.len();
    let mut best = ub;
    let mut best_at: Option<(usize, u32)> = None;
    let mut levels: Vec<FxHashMap<u32, (u32, u8)>> = vec![FxHashMap::default(); n + 1];
    levels[0].insert(0, (0, u8::MAX));
    for l in 0..n {
        if best <= lb {
            break;
        }
        let current = std::mem::take(&mut levels[l]);
        let mut next = FxHashMap::default();
        for (&s, &(r, _)) in &current {
            let finish = (r as usize).max(n - l - 1);
            if finish < best {
                best = finish;
                best_at = Some((l, s));
            }
            for v in 0..n {
                if s >> v & 1 == 1 {
                    continue;
                }
                let r2 = r.max(q(adj, s, v));
                if (r2 as usize) < best {
                    let slot = next.entry(s | 1 << v).or_insert((u32::MAX, 0));
                    if r2 < slot.0 {
                        *slot = (r2, v as u8);
                    }
                }
            }
        }
        levels[l] = current;
        levels[l + 1] = next;
    }
    let Some((l, mut s)) = best_at else {
        return (best, ub_order);
    };
    let mut prefix = Vec::with_capacity(n);
    for lvl in (1..=l).rev() {
        let v = levels[lvl][&s].1 as usize;
        prefix.push(v);
        s &= !(1 << v);
    }
    prefix.reverse();
    let taken: u32 = prefix.iter().fold(0, |m, &v| m | 1 << v);
    prefix.extend((0..n).filter(|&v| taken >> v & 1 == 0));
    (best, prefix)
}

/// One bag per vertex: the vertex and its later neighbours in the filled
/// graph. A bag hangs below the bag of its earliest later neighbour; the
/// roots of different components are chained.
pub fn decomposition_from_order(adj: &[BTreeSet<usize>], order: &[usize]) -> TreeDecomposition {
    let n = adj.len();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut h = adj.to_vec();
    let mut bags = Vec::with_capacity(n);
    let mut tree = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut bag = h[v].clone();
        match bag.iter().min_by_key(|&&u| pos[u]) {
            Some(&u) => tree.push((i, pos[u])),
            None => roots.push(i),
        }
        bag.insert(v);
        bags.push(bag);
        eliminate(&mut h, v);
    }
    tree.extend(roots.windows(2).map(|w| (w[0], w[1])));
    TreeDecomposition { bags, tree }
}

/// Width of the elimination ordering: the largest set of later neighbours.
pub fn elimination_width(g: &ChargedGraph, order: &[usize]) -> usize {
    let mut h = adjacency(g);
    let mut width = 0;
    for &v in order {
        width = width.max(h[v].len());
        eliminate(&mut h, v);
    }
    width
}

/// Minimum elimination width over all orderings.
pub fn treewidth_brute_force(g: &ChargedGraph) -> Result<usize, PartitionError> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(PartitionError::TooLarge {
            what: "permutation search",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|p| elimination_width(g, &p))
        .min()
        .unwrap_or(0))
}

/// Coverage of vertices and edges, connected occurrence sets, tree shape and
/// the claimed width.
pub fn verify_decomposition(g: &ChargedGraph, td: &TreeDecomposition, claimed: usize) -> Result<(), PartitionError> {
    let fail = |m: String| Err(PartitionError::Verification(m));
    let nb = td.bags.len();
    if td.width() != claimed {
        return fail(format!("width {} differs from claimed {claimed}", td.width()));
    }
    if nb == 0 {
        return if g.num_vertices() == 0 {
            Ok(())
        } else {
            fail("no bags for a nonempty graph".into())
        };
    }
    let mut tadj = vec![Vec::new(); nb];
    for &(i, j) in &td.tree {
        if i >= nb || j >= nb || i == j {
            return fail(format!("bad tree edge ({i},{j})"));
        }
        tadj[i].push(j);
        tadj[j].push(i);
    }
    let all: BTreeSet<usize> = (0..nb).collect();
    if td.tree.len() != nb - 1 || !connected_within(&tadj, &all) {
        return fail("bags do not form a tree".into());
    }
    for b in &td.bags {
        if let Some(&v) = b.iter().find(|&&v| v >= g.num_vertices()) {
            return fail(format!("bag holds unknown vertex {v}"));
        }
    }
    for v in g.vertices() {
        let occ: BTreeSet<usize> = (0..nb).filter(|&i| td.bags[i].contains(&v)).collect();
        if occ.is_empty() {
            return fail(format!("vertex {v} is in no bag"));
        }
        if !connected_within(&tadj, &occ) {
            return fail(format!("bags holding vertex {v} are not connected"));
        }
    }
    for e in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)) {
            return fail(format!("edge {} ({},{}) is in no bag", e.id, e.u, e.v));
        }
    }
    Ok(())
}

fn connected_within(adj: &[Vec<usize>], s: &BTreeSet<usize>) -> bool {
    let Some(&start) = s.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if s.contains(&y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len() == s.len()
}
