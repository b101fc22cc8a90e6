use std::collections::BTreeSet;

use super::{
    acceptability, better_partition, treewidth_exact, treewidth_of, tripartition, well_linked_set, ContractedGraph,
    PartitionError, PartitionParams,
};
use crate::scalar::Scalar;
use crate::tseitin::{bodlaender_component, ChargedGraph};

/// Largest graph for the exhaustive bipartition search.
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Extension checks allowed when searching for the well-linked set.
pub const WL_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    /// Tripartition rounds of the acceptable-partition loop.
    Improvement { rounds: usize, edge_counts: Vec<usize> },
    /// Connected bipartition maximizing the smaller treewidth.
    Exhaustive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub tw_a: usize,
    pub tw_b: usize,
    /// `tw(G)`.
    pub tw: usize,
    /// `⌊α·tw(G)/Δ²⌋`.
    pub bound: usize,
    pub route: Route,
}

fn masks(g: &ChargedGraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.num_vertices()];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    adj
}

fn connected_mask(adj: &[u32], s: u32) -> bool {
    if s == 0 {
        return false;
    }
    let mut seen = s & s.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x] & s & !seen;
        seen |= nb;
        frontier |= nb;
    }
    seen == s
}

fn to_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Among bipartitions with both sides nonempty and connected: the largest
/// smaller treewidth, then the smallest size difference, then the smallest
/// mask of `A` (the last vertex is always in `B`).
pub fn best_connected_bipartition(
    g: &ChargedGraph,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>, usize, usize), PartitionError> {
    let n = g.num_vertices();
    if n > EXHAUSTIVE_LIMIT {
        return Err(PartitionError::TooLarge {
            what: "exhaustive bipartition",
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if n < 2 {
        return Err(PartitionError::Precondition("need at least two vertices".into()));
    }
    let adj = masks(g);
    let full = (1u32 << n) - 1;
    let mut best: Option<((usize, std::cmp::Reverse<usize>), u32, usize, usize)> = None;
    for mask in 1..1u32 << (n - 1) {
        let other = full & !mask;
        if !connected_mask(&adj, mask) || !connected_mask(&adj, other) {
            continue;
        }
        let (na, nb) = (mask.count_ones() as usize, other.count_ones() as usize);
        let imbalance = na.abs_diff(nb);
        if let Some(((m, std::cmp::Reverse(imb)), ..)) = best {
            // the smaller side caps the smaller treewidth
            if na.min(nb) - 1 < m || (na.min(nb) - 1 == m && imbalance >= imb) {
                continue;
            }
        }
        let tw_a = treewidth_of(g, &to_set(mask))?;
        let tw_b = treewidth_of(g, &to_set(other))?;
        let key = (tw_a.min(tw_b), std::cmp::Reverse(imbalance));
        if best.as_ref().map_or(true, |b| key > b.0) {
            best = Some((key, mask, tw_a, tw_b));
        }
    }
    let (_, mask, tw_a, tw_b) =
        best.ok_or_else(|| PartitionError::Precondition("graph has no connected bipartition".into()))?;
    Ok((to_set(mask), to_set(full & !mask), tw_a, tw_b))
}

enum Outcome {
    Done(BTreeSet<usize>, BTreeSet<usize>, usize, Vec<usize>),
    GaveUp(String),
}

/// Start from the singleton partition; tripartition the contracted graph and
/// either return a split meeting the bound or refine the weakest part.
fn improve<S: Scalar>(g: &ChargedGraph, p: &PartitionParams<S>, seed: u64, bound: usize) -> Result<Outcome, PartitionError> {
    let delta = g.max_degree();
    let wl = well_linked_set(g, WL_BUDGET);
    let k = wl.set.len();
    let th = p.thresholds(k, delta);
    let mut c = ContractedGraph::singletons(g);
    if !acceptability(&c, &wl.set, p, k).acceptable {
        return Ok(Outcome::GaveUp("singleton partition is not acceptable".into()));
    }
    let mut counts = vec![c.num_edges()];
    for round in 0.. {
        let tri = match tripartition(&c, seed.wrapping_add(round as u64)) {
            Ok(t) => t,
            Err(e) => return Ok(Outcome::GaveUp(e.to_string())),
        };
        let sets: Vec<BTreeSet<usize>> = tri.parts.iter().map(|p| c.uncontract(p)).collect();
        let mut tws = Vec::with_capacity(3);
        for s in &sets {
            tws.push(treewidth_of(g, s)?);
        }
        let mut rank = [0usize, 1, 2];
        rank.sort_by_key(|&i| std::cmp::Reverse(tws[i]));
        if tws[rank[1]] >= bound && !sets[rank[0]].is_empty() {
            let b: BTreeSet<usize> = sets[rank[1]].union(&sets[rank[2]]).copied().collect();
            if !b.is_empty() {
                return Ok(Outcome::Done(sets[rank[0]].clone(), b, round + 1, counts));
            }
        }
        let Some(&j) = [rank[2], rank[1]]
            .iter()
            .find(|&&j| 2 * sets[j].intersection(&wl.set).count() <= k)
        else {
            return Ok(Outcome::GaveUp("no low-treewidth part meets the k/2 bound".into()));
        };
        let refined = match better_partition(g, &sets[j], &th) {
            Ok(bp) => bp,
            Err(e) => return Ok(Outcome::GaveUp(e.to_string())),
        };
        let next = c.replace(g, &tri.parts[j], refined.parts)?;
        if next.num_edges() >= c.num_edges() || !acceptability(&next, &wl.set, p, k).acceptable {
            return Ok(Outcome::GaveUp(format!(
                "round {} did not shrink the contracted graph ({} -> {} edges)",
                round + 1,
                c.num_edges(),
                next.num_edges()
            )));
        }
        c = next;
        counts.push(c.num_edges());
    }
    unreachable!()
}

/// Both sides with treewidth at least `⌊α·tw(G)/Δ²⌋`. The improvement loop
/// runs when the bound is positive; otherwise, or when the loop cannot
/// proceed on this instance, the exhaustive search decides.
pub fn theorem4_partition<S: Scalar>(g: &ChargedGraph, p: &PartitionParams<S>, seed: u64) -> Result<Bipartition, PartitionError> {
    if g.num_vertices() < 2 || !g.is_connected() {
        return Err(PartitionError::Precondition("graph must be connected with at least two vertices".into()));
    }
    let tw = treewidth_exact(g)?.width;
    let bound = p.tw_bound(tw, g.max_degree());
    let reason = if bound == 0 {
        "bound is 0".to_string()
    } else {
        match improve(g, p, seed, bound)? {
            Outcome::Done(a, b, rounds, edge_counts) => {
                let (tw_a, tw_b) = (treewidth_of(g, &a)?, treewidth_of(g, &b)?);
                return Ok(Bipartition {
                    a,
                    b,
                    tw_a,
                    tw_b,
                    tw,
                    bound,
                    route: Route::Improvement { rounds, edge_counts },
                });
            }
            Outcome::GaveUp(r) => r,
        }
    };
    let (a, b, tw_a, tw_b) = best_connected_bipartition(g)?;
    if tw_a.min(tw_b) < bound {
        return Err(PartitionError::BoundNotMet { bound, tw_a, tw_b });
    }
    Ok(Bipartition {
        a,
        b,
        tw_a,
        tw_b,
        tw,
        bound,
        route: Route::Exhaustive { reason },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma4 {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub tw_a: usize,
    pub tw_b: usize,
    pub bound: usize,
    pub start: Bipartition,
    /// 1-separators of `G[B]` used, in order.
    pub separators: Vec<usize>,
}

/// While `G[B]` has a 1-separator, keep only the part of `B` that carries
/// its treewidth. Returns the final `B` and the separators used.
pub fn shrink_to_2connected(g: &ChargedGraph, b: &BTreeSet<usize>) -> Result<(BTreeSet<usize>, Vec<usize>), PartitionError> {
    let mut b = b.clone();
    let mut separators = Vec::new();
    loop {
        let (gb, old) = g.induced(&b);
        if !gb.is_connected() {
            return Err(PartitionError::Precondition("G[B] is not connected".into()));
        }
        let Some(&sep) = gb.one_separators().first() else {
            return Ok((b, separators));
        };
        let keep = bodlaender_component(&gb, sep, |s| treewidth_of(&gb, s))
            .map_err(|e| PartitionError::Oracle(e.to_string()))?;
        b = keep.iter().map(|&i| old[i]).collect();
        b.insert(old[sep]);
        separators.push(old[sep]);
    }
}

/// `G[A]` connected, `G[B]` 2-connected, both treewidths at least the bound.
pub fn lemma4_partition<S: Scalar>(g: &ChargedGraph, p: &PartitionParams<S>, seed: u64) -> Result<Lemma4, PartitionError> {
    if !g.is_2connected() {
        return Err(PartitionError::Precondition("graph must be 2-connected".into()));
    }
    let mut start = theorem4_partition(g, p, seed)?;
    let connected = |s: &BTreeSet<usize>| g.induced(s).0.is_connected();
    if !connected(&start.a) || !connected(&start.b) {
        let (a, b, tw_a, tw_b) = best_connected_bipartition(g)?;
        start = Bipartition {
            a,
            b,
            tw_a,
            tw_b,
            route: Route::Exhaustive {
                reason: "bipartition sides are not both connected".into(),
            },
            ..start
        };
    }
    let (b, separators) = shrink_to_2connected(g, &start.b)?;
    let a: BTreeSet<usize> = g.vertices().filter(|v| !b.contains(v)).collect();
    let (tw_a, tw_b) = (treewidth_of(g, &a)?, treewidth_of(g, &b)?);
    if !connected(&a) {
        return Err(PartitionError::Verification("G[A] is not connected".into()));
    }
    if !g.induced(&b).0.is_2connected() {
        return Err(PartitionError::Verification("G[B] is not 2-connected".into()));
    }
    if tw_a.min(tw_b) < start.bound {
        return Err(PartitionError::BoundNotMet {
            bound: start.bound,
            tw_a,
            tw_b,
        });
    }
    Ok(Lemma4 {
        a,
        b,
        tw_a,
        tw_b,
        bound: start.bound,
        start,
        separators,
    })
}
