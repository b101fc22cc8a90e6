//! Well-linked vertex sets, checked with Menger's theorem.

use std::collections::{BTreeSet, VecDeque};

use super::treewidth::treewidth_exact;
use super::PartitionError;
use crate::tseitin::ChargedGraph;

/// Unit-capacity flow network with every vertex split into in/out halves.
struct VertexFlow {
    head: Vec<usize>,
    cap: Vec<u8>,
    adj: Vec<Vec<usize>>,
}

impl VertexFlow {
    fn new(g: &ChargedGraph) -> VertexFlow {
        let n = g.num_vertices();
        let mut f = VertexFlow {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); 2 * n + 2],
        };
        for v in 0..n {
            f.arc(2 * v, 2 * v + 1);
        }
        for e in g.edges() {
            f.arc(2 * e.u + 1, 2 * e.v);
            f.arc(2 * e.v + 1, 2 * e.u);
        }
        f
    }

    fn arc(&mut self, a: usize, b: usize) {
        self.adj[a].push(self.head.len());
        self.head.push(b);
        self.cap.push(1);
        self.adj[b].push(self.head.len());
        self.head.push(a);
        self.cap.push(0);
    }

    /// Maximum number of vertex-disjoint `x`–`y` paths; a vertex in both
    /// sets is a path of length zero.
    fn paths(&self, x: &[usize], y: &[usize]) -> usize {
        let n2 = self.adj.len() - 2;
        let (src, dst) = (n2, n2 + 1);
        let mut head = self.head.clone();
        let mut cap = self.cap.clone();
        let mut adj = self.adj.clone();
        let mut arc = |a: usize, b: usize| {
            adj[a].push(head.len());
            head.push(b);
            cap.push(1);
            adj[b].push(head.len());
            head.push(a);
            cap.push(0);
        };
        for &v in x {
            arc(src, 2 * v);
        }
        for &v in y {
            arc(2 * v + 1, dst);
        }
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; adj.len()];
            let mut queue = VecDeque::from([src]);
            via[src] = usize::MAX - 1;
            while let Some(a) = queue.pop_front() {
                for &i in &adj[a] {
                    let b = head[i];
                    if cap[i] > 0 && via[b] == usize::MAX {
                        via[b] = i;
                        queue.push_back(b);
                    }
                }
            }
            if via[dst] == usize::MAX {
                return flow;
            }
            let mut b = dst;
            while b != src {
                let i = via[b];
                cap[i] -= 1;
                cap[i ^ 1] += 1;
                b = head[i ^ 1];
            }
            flow += 1;
        }
    }
}

fn subsets_of_size(items: &[usize], k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            let ok = go(items, k, i + 1, cur, f);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// Every pair `X, Y ⊆ S` with `|X| = |Y|` (overlap allowed) is joined by
/// `|X|` vertex-disjoint paths.
pub fn is_well_linked(g: &ChargedGraph, s: &BTreeSet<usize>) -> bool {
    let flow = VertexFlow::new(g);
    let items: Vec<usize> = s.iter().copied().collect();
    (1..=items.len()).all(|k| {
        subsets_of_size(&items, k, &mut |x| {
            let x = x.to_vec();
            subsets_of_size(&items, k, &mut |y| flow.paths(&x, y) == k)
        })
    })
}

/// Only the pairs with `w ∈ X`; the rest were checked for `S − w`, and the
/// condition is symmetric in `X` and `Y`.
fn extends_well_linked(flow: &VertexFlow, items: &[usize], w: usize) -> bool {
    let rest: Vec<usize> = items.iter().copied().filter(|&v| v != w).collect();
    (1..=items.len()).all(|k| {
        subsets_of_size(&rest, k - 1, &mut |xr| {
            let mut x = xr.to_vec();
            x.push(w);
            subsets_of_size(items, k, &mut |y| flow.paths(&x, y) == k)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellLinked {
    pub set: BTreeSet<usize>,
    /// `false` when the budget ran out before the search finished.
    pub complete: bool,
    pub checked: usize,
}

/// Largest well-linked set, lexicographically first among the largest.
/// Well-linkedness is closed under subsets, so the search only extends sets
/// that already pass. `budget` caps the number of extension checks.
pub fn well_linked_set(g: &ChargedGraph, budget: usize) -> WellLinked {
    struct Search {
        flow: VertexFlow,
        n: usize,
        budget: usize,
        checked: usize,
        best: Vec<usize>,
        cur: Vec<usize>,
    }
    impl Search {
        fn go(&mut self, from: usize) -> bool {
            for w in from..self.n {
                if self.checked >= self.budget {
                    return false;
                }
                self.checked += 1;
                self.cur.push(w);
                if extends_well_linked(&self.flow, &self.cur, w) {
                    if self.cur.len() > self.best.len() {
                        self.best = self.cur.clone();
                    }
                    if !self.go(w + 1) {
                        self.cur.pop();
                        return false;
                    }
                }
                self.cur.pop();
            }
            true
        }
    }
    let mut s = Search {
        flow: VertexFlow::new(g),
        n: g.num_vertices(),
        budget,
        checked: 0,
        best: Vec::new(),
        cur: Vec::new(),
    };
    let complete = s.go(0);
    WellLinked {
        set: s.best.into_iter().collect(),
        complete,
        checked: s.checked,
    }
}

/// `tw(G) ≤ |S| + 1 ≤ 3·tw(G)` for a complete search; vacuous when
/// `tw(G) = 0` or the search was cut short.
pub fn check_wl_bounds(g: &ChargedGraph, wl: &WellLinked) -> Result<(), PartitionError> {
    if !wl.complete {
        return Ok(());
    }
    let tw = treewidth_exact(g)?.width;
    let k = wl.set.len();
    if tw >= 1 && !(tw <= k + 1 && k + 1 <= 3 * tw) {
        return Err(PartitionError::Verification(format!(
            "well-linked number {k} is outside the range allowed by treewidth {tw}"
        )));
    }
    Ok(())
}

/// `|E(A, B)| ≥ min(|A ∩ S|, |B ∩ S|)`.
pub fn check_separator_property(g: &ChargedGraph, s: &BTreeSet<usize>, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    let cut = g.edges_between(a, b).len();
    cut >= a.intersection(s).count().min(b.intersection(s).count())
}
