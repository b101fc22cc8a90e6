use std::collections::BTreeSet;

use super::{PartitionError, Thresholds};
use crate::scalar::Scalar;
use crate::tseitin::ChargedGraph;

/// Largest `Y` searched exhaustively by `split`.
pub const SPLIT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// The endpoint set the cut is measured against.
    pub s: BTreeSet<usize>,
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    /// `|E(A, B)|`.
    pub cut: usize,
    pub out_y: usize,
    pub out_a: usize,
    pub out_b: usize,
}

/// `Y` in local numbering with per-vertex counts of `out(Y)` edges.
struct Local {
    verts: Vec<usize>,
    dout: Vec<usize>,
    inner: Vec<(usize, usize)>,
}

impl Local {
    fn new(g: &ChargedGraph, y: &BTreeSet<usize>) -> Local {
        let verts: Vec<usize> = y.iter().copied().collect();
        let index = |v: usize| verts.binary_search(&v).ok();
        let mut dout = vec![0; verts.len()];
        let mut inner = Vec::new();
        for e in g.edges() {
            match (index(e.u), index(e.v)) {
                (Some(i), Some(j)) => inner.push((i, j)),
                (Some(i), None) | (None, Some(i)) => dout[i] += 1,
                (None, None) => {}
            }
        }
        Local { verts, dout, inner }
    }

    fn set(&self, mask: u32) -> BTreeSet<usize> {
        (0..self.verts.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.verts[i])
            .collect()
    }
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            let stop = go(n, k, i + 1, cur, f);
            cur.pop();
            if stop {
                return true;
            }
        }
        false
    }
    k <= n && go(n, k, 0, &mut Vec::new(), f)
}

/// Smallest set of endpoints of `out(Y)` edges in `Y` carrying at least `Δ′`
/// of them; lexicographically first among those of that size.
pub fn minimal_endpoint_set<S: Scalar>(g: &ChargedGraph, y: &BTreeSet<usize>, delta_prime: &S) -> Option<BTreeSet<usize>> {
    let l = Local::new(g, y);
    minimal_local(&l, delta_prime).map(|idx| idx.iter().map(|&i| l.verts[i]).collect())
}

fn minimal_local<S: Scalar>(l: &Local, delta_prime: &S) -> Option<Vec<usize>> {
    let cand: Vec<usize> = (0..l.verts.len()).filter(|&i| l.dout[i] > 0).collect();
    let mut by_weight: Vec<usize> = cand.iter().map(|&i| l.dout[i]).collect();
    by_weight.sort_unstable_by(|a, b| b.cmp(a));
    let mut sum = 0;
    let size = by_weight.iter().position(|&w| {
        sum += w;
        S::from_count(sum) >= *delta_prime
    })? + 1;
    let mut found = None;
    combinations(cand.len(), size, &mut |c| {
        let w: usize = c.iter().map(|&j| l.dout[cand[j]]).sum();
        if S::from_count(w) >= *delta_prime {
            found = Some(c.iter().map(|&j| cand[j]).collect());
            true
        } else {
            false
        }
    });
    found
}

/// First bipartition of `Y` (in increasing order of the mask of `A`, the
/// last vertex always in `B`) with `|E(A,B)| < γ·min(|S∩A|, |S∩B|)`,
/// oriented so that `|out(A)| ≤ |out(B)|`. The bounds that follow from the
/// choice of `S` are checked before returning.
pub fn split<S: Scalar>(g: &ChargedGraph, y: &BTreeSet<usize>, th: &Thresholds<S>) -> Result<Split, PartitionError> {
    let n = y.len();
    if n > SPLIT_LIMIT {
        return Err(PartitionError::TooLarge {
            what: "split set",
            size: n,
            limit: SPLIT_LIMIT,
        });
    }
    if n == 0 || th.delta_prime <= S::zero() {
        return Err(PartitionError::Precondition("split needs a nonempty Y and Δ′ > 0".into()));
    }
    let l = Local::new(g, y);
    let out_y: usize = l.dout.iter().sum();
    if S::from_count(out_y) < th.delta_prime {
        return Err(PartitionError::Precondition(format!(
            "|out(Y)| = {out_y} is below Δ′ = {}",
            th.delta_prime
        )));
    }
    let s_idx = minimal_local(&l, &th.delta_prime).expect("out(Y) reaches Δ′");
    let smask: u32 = s_idx.iter().fold(0, |m, &i| m | 1 << i);
    let ssize = s_idx.len() as u32;
    let gamma = &th.gamma;
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut chosen = None;
    for mask in 1..1u32 << (n - 1) {
        let sa = (mask & smask).count_ones();
        let sb = ssize - sa;
        if sa == 0 || sb == 0 {
            continue;
        }
        let bound = gamma.clone() * S::from_count(sa.min(sb) as usize);
        let mut cut = 0;
        for &(i, j) in &l.inner {
            if (mask >> i & 1) != (mask >> j & 1) {
                cut += 1;
            }
        }
        if S::from_count(cut) < bound {
            chosen = Some((mask, cut));
            break;
        }
    }
    let Some((mut mask, cut)) = chosen else {
        return Err(PartitionError::TreewidthTooLarge { size: n });
    };
    let side_out = |m: u32| -> usize { (0..n).filter(|&i| m >> i & 1 == 1).map(|i| l.dout[i]).sum() };
    if side_out(mask) + cut > side_out(full & !mask) + cut {
        mask = full & !mask;
    }
    let (ya, yb) = (side_out(mask), side_out(full & !mask));
    let sp = Split {
        s: s_idx.iter().map(|&i| l.verts[i]).collect(),
        a: l.set(mask),
        b: l.set(full & !mask),
        cut,
        out_y,
        out_a: ya + cut,
        out_b: yb + cut,
    };
    check_split_bounds(&sp, ya, yb, th)?;
    Ok(sp)
}

fn check_split_bounds<S: Scalar>(sp: &Split, ya: usize, yb: usize, th: &Thresholds<S>) -> Result<(), PartitionError> {
    let gamma = &th.gamma;
    let cut = S::from_count(sp.cut);
    let fail = |m: String| Err(PartitionError::SplitBound(m));
    if cut >= gamma.clone() * th.delta_prime.clone() {
        return fail(format!("|E(A,B)| = {} is not below γΔ′", sp.cut));
    }
    if cut >= gamma.clone() * S::from_count(ya.min(yb)) {
        return fail(format!(
            "|E(A,B)| = {} is not below γ·min({ya}, {yb})",
            sp.cut
        ));
    }
    let two = S::from_count(2);
    if two * (S::one() - gamma.clone()) * S::from_count(sp.out_a) > S::from_count(sp.out_y) {
        return fail(format!(
            "|out(A)| = {} exceeds |out(Y)|/(2(1−γ)) with |out(Y)| = {}",
            sp.out_a, sp.out_y
        ));
    }
    if sp.out_b > sp.out_y {
        return fail(format!("|out(B)| = {} exceeds |out(Y)| = {}", sp.out_b, sp.out_y));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub set: BTreeSet<usize>,
    /// `(A, B)` node indices.
    pub children: Option<(usize, usize)>,
}

/// Binary tree of splits; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTrace {
    pub nodes: Vec<TraceNode>,
}

impl SplitTrace {
    pub fn new(root: BTreeSet<usize>) -> SplitTrace {
        SplitTrace {
            nodes: vec![TraceNode {
                set: root,
                children: None,
            }],
        }
    }

    pub fn root(&self) -> &BTreeSet<usize> {
        &self.nodes[0].set
    }

    pub fn num_splits(&self) -> usize {
        self.nodes.iter().filter(|t| t.children.is_some()).count()
    }

    /// Internal nodes, children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(0, false)];
        while let Some((t, done)) = stack.pop() {
            if let Some((a, b)) = self.nodes[t].children {
                if done {
                    out.push(t);
                } else {
                    stack.push((t, true));
                    stack.push((b, false));
                    stack.push((a, false));
                }
            }
        }
        out
    }

    /// Every node's children partition it.
    pub fn check(&self) -> Result<(), PartitionError> {
        for (t, node) in self.nodes.iter().enumerate() {
            if let Some((a, b)) = node.children {
                let (sa, sb) = (&self.nodes[a].set, &self.nodes[b].set);
                let union: BTreeSet<usize> = sa.union(sb).copied().collect();
                if sa.is_empty() || sb.is_empty() || !sa.is_disjoint(sb) || union != node.set {
                    return Err(PartitionError::TraceInconsistent(format!(
                        "children of node {t} do not partition it"
                    )));
                }
            }
        }
        Ok(())
    }

    fn push_split(&mut self, t: usize, a: BTreeSet<usize>, b: BTreeSet<usize>) -> (usize, usize) {
        let ia = self.nodes.len();
        self.nodes.push(TraceNode { set: a, children: None });
        self.nodes.push(TraceNode { set: b, children: None });
        self.nodes[t].children = Some((ia, ia + 1));
        (ia, ia + 1)
    }
}

#[derive(Debug, Clone)]
pub struct BetterPartition {
    /// Connected pieces of the final leaves, in leaf order.
    pub parts: Vec<BTreeSet<usize>>,
    pub trace: SplitTrace,
    /// One entry per internal trace node, keyed by node index.
    pub splits: Vec<(usize, Split)>,
    /// `M`: total number of cut edges.
    pub m: usize,
}

/// Splits the first part with `|out(Y)| ≥ Δ′` until none is left, then
/// breaks every part into its connected components.
pub fn better_partition<S: Scalar>(
    g: &ChargedGraph,
    u: &BTreeSet<usize>,
    th: &Thresholds<S>,
) -> Result<BetterPartition, PartitionError> {
    let mut trace = SplitTrace::new(u.clone());
    let mut leaves = vec![0];
    let mut splits = Vec::new();
    let mut m = 0;
    let heavy = |s: &BTreeSet<usize>| S::from_count(g.out(s).len()) >= th.delta_prime;
    while let Some(pos) = leaves.iter().position(|&t| heavy(&trace.nodes[t].set)) {
        let t = leaves[pos];
        let sp = split(g, &trace.nodes[t].set, th)?;
        m += sp.cut;
        let (ia, ib) = trace.push_split(t, sp.a.clone(), sp.b.clone());
        leaves.splice(pos..=pos, [ia, ib]);
        splits.push((t, sp));
    }
    let mut parts = Vec::new();
    for &t in &leaves {
        let (sub, old) = g.induced(&trace.nodes[t].set);
        for comp in sub.components() {
            let part: BTreeSet<usize> = comp.iter().map(|&i| old[i]).collect();
            if heavy(&part) {
                return Err(PartitionError::Verification(format!(
                    "final block {part:?} still has |out| ≥ Δ′"
                )));
            }
            parts.push(part);
        }
    }
    Ok(BetterPartition {
        parts,
        trace,
        splits,
        m,
    })
}
