use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::tseitin::{complete, cycle, grid, path, Charges};
use crate::ChargedGraph;

type Q = BigRational;

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn graph(n: usize, pairs: &[(usize, usize)]) -> ChargedGraph {
    ChargedGraph::from_pairs(vec![false; n], pairs).unwrap()
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> ChargedGraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    graph(n, &pairs)
}

fn relaxed(dp: usize) -> PartitionParams<Q> {
    PartitionParams::relaxed(Q::ratio(1, 3), Q::from_count(dp))
}

use crate::Scalar;

fn checked_tw(g: &ChargedGraph) -> usize {
    let t = treewidth_exact(g).unwrap();
    verify_decomposition(g, &t.decomposition, t.width).unwrap();
    assert_eq!(elimination_width(g, &t.order), t.width);
    t.width
}

#[test]
fn treewidth_small_families() {
    assert_eq!(checked_tw(&path(7, Charges::AllZero).unwrap()), 1);
    assert_eq!(checked_tw(&complete(4, Charges::AllZero).unwrap()), 3);
    assert_eq!(checked_tw(&cycle(4, Charges::AllZero).unwrap()), 2);
    assert_eq!(checked_tw(&grid(3, 3, Charges::AllZero).unwrap()), 3);
    assert_eq!(checked_tw(&grid(4, 4, Charges::AllZero).unwrap()), 4);
    assert_eq!(checked_tw(&graph(1, &[])), 0);
    assert_eq!(checked_tw(&graph(0, &[])), 0);
    // K4 next to a path: the larger component decides
    let g = graph(7, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (5, 6)]);
    assert_eq!(checked_tw(&g), 3);
}

#[test]
fn treewidth_star_and_multiedges() {
    let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    assert_eq!(checked_tw(&star), 1);
    let multi = graph(2, &[(0, 1), (0, 1), (1, 0)]);
    assert_eq!(checked_tw(&multi), 1);
}

#[test]
fn treewidth_limit_applies_to_dp_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut refused = 0;
    for _ in 0..40 {
        let g = random_graph(12, 0.4, &mut rng);
        match treewidth_with_limit(&g, 5) {
            Ok(t) => assert_eq!(t.width, treewidth_exact(&g).unwrap().width),
            Err(PartitionError::TooLarge { limit: 5, .. }) => refused += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert!(refused > 0);
    // a long path needs no DP
    let p = path(60, Charges::AllZero).unwrap();
    assert_eq!(treewidth_with_limit(&p, 10).unwrap().width, 1);
}

#[test]
fn treewidth_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(n, rng.gen_range(0.2..0.8), &mut rng);
        assert_eq!(checked_tw(&g), treewidth_brute_force(&g).unwrap(), "{}", g.to_text());
    }
}

#[test]
fn verifier_rejects_broken_decompositions() {
    let g = cycle(4, Charges::AllZero).unwrap();
    let t = treewidth_exact(&g).unwrap();
    assert!(verify_decomposition(&g, &t.decomposition, 1).is_err());
    let mut missing_edge = t.decomposition.clone();
    missing_edge.bags = vec![set(&[0, 1, 2]), set(&[0, 2])];
    missing_edge.tree = vec![(0, 1)];
    assert!(verify_decomposition(&g, &missing_edge, 2).is_err());
    let split_occurrence = TreeDecomposition {
        bags: vec![set(&[0, 1]), set(&[1, 2]), set(&[2, 3]), set(&[3, 0])],
        tree: vec![(0, 1), (1, 2), (2, 3)],
    };
    assert!(verify_decomposition(&g, &split_occurrence, 1).is_err());
    let not_a_tree = TreeDecomposition {
        bags: vec![set(&[0, 1, 2]), set(&[0, 2, 3])],
        tree: vec![],
    };
    assert!(verify_decomposition(&g, &not_a_tree, 2).is_err());
    let good = TreeDecomposition { tree: vec![(0, 1)], ..not_a_tree };
    assert!(verify_decomposition(&g, &good, 2).is_ok());
}

#[test]
fn decomposition_text_lists_bags() {
    let t = treewidth_exact(&path(3, Charges::AllZero).unwrap()).unwrap();
    let text = t.decomposition.to_text();
    assert!(text.starts_with("td 3 1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("t ")).count(), 2);
}

#[test]
fn well_linked_examples() {
    let k2 = graph(2, &[(0, 1)]);
    assert_eq!(well_linked_set(&k2, 1000).set, set(&[0, 1]));
    let k4 = complete(4, Charges::AllZero).unwrap();
    let wl = well_linked_set(&k4, 1000);
    assert!(wl.complete);
    assert_eq!(wl.set.len(), 4);
    let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
    // all three leaves: any two pairs of leaves share a leaf
    let wl = well_linked_set(&star, 1000);
    assert_eq!(wl.set, set(&[1, 2, 3]));
    assert!(check_wl_bounds(&star, &wl).is_err(), "|S|+1 = 4 > 3·tw");
    let p3 = path(3, Charges::AllZero).unwrap();
    assert!(!is_well_linked(&p3, &set(&[0, 1, 2])));
    assert!(is_well_linked(&p3, &set(&[0, 2])));
}

#[test]
fn well_linked_budget_marks_incomplete() {
    let g = grid(3, 3, Charges::AllZero).unwrap();
    let wl = well_linked_set(&g, 3);
    assert!(!wl.complete);
    assert_eq!(wl.checked, 3);
    assert!(is_well_linked(&g, &wl.set));
}

#[test]
fn well_linked_search_agrees_with_direct_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let n = rng.gen_range(2..=7);
        let g = random_graph(n, 0.5, &mut rng);
        let wl = well_linked_set(&g, 1 << 20);
        assert!(wl.complete);
        assert!(is_well_linked(&g, &wl.set));
        // no well-linked set is larger
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize > wl.set.len() {
                let s: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                assert!(!is_well_linked(&g, &s));
            }
        }
        check_wl_bounds(&g, &wl).unwrap();
    }
}

#[test]
fn separator_property_examples() {
    let k4 = complete(4, Charges::AllZero).unwrap();
    let all = set(&[0, 1, 2, 3]);
    assert!(check_separator_property(&k4, &all, &all, &BTreeSet::new()));
    assert!(check_separator_property(&k4, &all, &set(&[0, 1]), &set(&[2, 3])));
    let p = path(4, Charges::AllZero).unwrap();
    assert!(!check_separator_property(&p, &all, &set(&[0, 1]), &set(&[2, 3])));
}

#[test]
fn separator_property_holds_for_well_linked_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.gen_range(2..=8);
        let g = random_graph(n, 0.45, &mut rng);
        let s = well_linked_set(&g, 1 << 20).set;
        for mask in 0u32..1 << n {
            let a: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let b: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
            assert!(check_separator_property(&g, &s, &a, &b));
        }
    }
}

#[test]
fn params_standard_constants() {
    let p = ExactParamsLocal::standard();
    assert_eq!(p.gamma, Q::ratio(1, 2000));
    assert_eq!(p.beta, Q::from_count(12000));
    assert_eq!(p.alpha.clone() * p.beta.clone(), Q::ratio(1, 200));
    assert_eq!(p.delta_prime(300, 4), Q::from_count(3));
    assert_eq!(p.r(100, 2), Q::ratio(2 * 100, 200 * 12000 * 4));
    assert_eq!(p.tw_bound(1000, 4), 0);
    let loose = p.clone().with_alpha(Q::from_count(1));
    assert_eq!(loose.tw_bound(9, 3), 1);
    let f = PartitionParams::<f64>::standard();
    assert!((f.alpha * f.beta - 0.005).abs() < 1e-15);
}

type ExactParamsLocal = PartitionParams<Q>;

#[test]
fn contracted_graph_counts() {
    let g = grid(2, 3, Charges::SingleOne(0)).unwrap();
    let c = ContractedGraph::new(&g, vec![set(&[0, 1]), set(&[2, 5]), set(&[3, 4])]).unwrap();
    assert_eq!(c.num_blocks(), 3);
    // 7 edges, three inside blocks
    assert_eq!(c.num_edges(), 4);
    assert!(c.graph().edges().iter().all(|e| e.u != e.v));
    assert!(c.graph().charge(0));
    assert_eq!(c.edges_within(&set(&[0, 2])), 2);
    assert_eq!(c.uncontract(&set(&[1])), set(&[2, 5]));
    for i in 0..c.num_edges() {
        let src = g.edge(c.source_edge(i));
        assert_ne!(c.block_of(src.u), c.block_of(src.v));
    }
    assert!(ContractedGraph::new(&g, vec![set(&[0, 1]), set(&[1, 2, 3, 4, 5])]).is_err());
    assert!(ContractedGraph::new(&g, vec![set(&[0, 1])]).is_err());
    let r = c.replace(&g, &set(&[0, 2]), vec![set(&[0, 1, 3, 4])]).unwrap();
    assert_eq!(r.blocks()[0], set(&[2, 5]));
    assert_eq!(r.num_edges(), 2);
    assert!(c.replace(&g, &set(&[0]), vec![set(&[0])]).is_err());
}

#[test]
fn acceptability_examples() {
    let g = grid(3, 3, Charges::AllZero).unwrap();
    let s_star = set(&[0, 2, 6, 8]);
    let single = ContractedGraph::singletons(&g);
    let p = relaxed(4);
    let a = acceptability(&single, &s_star, &p, 4);
    assert!(a.acceptable && a.max_degree_ok && a.enough_edges);
    let hog = ContractedGraph::new(&g, vec![set(&[0, 1, 2, 3, 5, 6, 7, 8]), set(&[4])]).unwrap();
    assert!(!is_acceptable(&hog, &s_star, &p, 4));
    // the middle vertex has out-degree 4 = Δ′ + 1 under Δ′ = 3
    assert!(!is_acceptable(&single, &s_star, &relaxed(3), 4));
    // standard constants give Δ′ = k/100, below Δ on any small graph
    assert!(!is_acceptable(&single, &s_star, &PartitionParams::<Q>::standard(), 4));
}

/// Two `K4`s joined by one edge, every vertex with one pendant edge.
fn two_k4() -> (ChargedGraph, BTreeSet<usize>) {
    let mut pairs = Vec::new();
    for base in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                pairs.push((base + i, base + j));
            }
        }
    }
    pairs.push((0, 4));
    for v in 0..8 {
        pairs.push((v, 8 + v));
    }
    (graph(16, &pairs), (0..8).collect())
}

#[test]
fn split_cuts_the_bridge() {
    let (g, y) = two_k4();
    let th = relaxed(8).thresholds(0, g.max_degree());
    let sp = split(&g, &y, &th).unwrap();
    assert_eq!(sp.a, set(&[0, 1, 2, 3]));
    assert_eq!(sp.b, set(&[4, 5, 6, 7]));
    assert_eq!(sp.cut, 1);
    assert_eq!((sp.out_y, sp.out_a, sp.out_b), (8, 5, 5));
    assert_eq!(sp.s, y);
}

#[test]
fn split_on_dense_set_signals_large_treewidth() {
    let mut pairs = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            pairs.push((i, j));
        }
        pairs.push((i, 8 + i));
    }
    let g = graph(16, &pairs);
    let th = relaxed(8).thresholds(0, 8);
    assert_eq!(
        split(&g, &(0..8).collect(), &th),
        Err(PartitionError::TreewidthTooLarge { size: 8 })
    );
}

#[test]
fn split_requires_heavy_boundary() {
    let (g, y) = two_k4();
    let th = relaxed(9).thresholds(0, 5);
    assert!(matches!(split(&g, &y, &th), Err(PartitionError::Precondition(_))));
}

#[test]
fn minimal_endpoint_set_is_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let g = random_graph(12, 0.3, &mut rng);
        let y: BTreeSet<usize> = (0..7).collect();
        let out_y: BTreeSet<usize> = g.out(&y).into_iter().collect();
        let weight = |s: &BTreeSet<usize>| g.out(s).iter().filter(|e| out_y.contains(e)).count();
        let dp = rng.gen_range(1..=4);
        let Some(s) = minimal_endpoint_set(&g, &y, &Q::from_count(dp)) else {
            assert!(out_y.len() < dp);
            continue;
        };
        assert!(weight(&s) >= dp);
        for mask in 0u32..1 << 7 {
            let t: BTreeSet<usize> = (0..7).filter(|&i| mask >> i & 1 == 1).collect();
            if t.len() < s.len() {
                assert!(weight(&t) < dp);
            }
            if t.len() == s.len() && weight(&t) >= dp {
                assert!(s <= t, "lexicographic tie-break");
            }
        }
    }
}

#[test]
fn better_partition_without_heavy_set() {
    let (g, _) = two_k4();
    let th = relaxed(8).thresholds(0, 5);
    let u = set(&[0, 1, 2, 3]);
    let bp = better_partition(&g, &u, &th).unwrap();
    assert_eq!(bp.parts, vec![u.clone()]);
    assert_eq!(bp.trace.num_splits(), 0);
    let two = set(&[1, 2, 5, 6]);
    let bp = better_partition(&g, &two, &th).unwrap();
    assert_eq!(bp.parts, vec![set(&[1, 2]), set(&[5, 6])]);
    assert_eq!(bp.m, 0);
}

#[test]
fn better_partition_one_forced_split() {
    let (g, u) = two_k4();
    let p = relaxed(8);
    let th = p.thresholds(0, g.max_degree());
    let bp = better_partition(&g, &u, &th).unwrap();
    assert_eq!(bp.trace.num_splits(), 1);
    assert_eq!(bp.trace.nodes.len(), 3);
    assert_eq!(bp.parts, vec![set(&[0, 1, 2, 3]), set(&[4, 5, 6, 7])]);
    let c = ContractedGraph::singletons(&g);
    let parts: BTreeSet<usize> = u.iter().map(|&v| c.block_of(v)).collect();
    let next = c.replace(&g, &parts, bp.parts.clone()).unwrap();
    assert!(next.num_edges() < c.num_edges());
    assert_eq!(eq3_residual(&c, &parts, &next, bp.m), 0);
}

#[test]
fn charging_empty_trace() {
    let (g, _) = two_k4();
    let u = set(&[0, 1, 2, 3]);
    let st: ChargeState<Q> = charging(&SplitTrace::new(u.clone()), &g, &u).unwrap();
    assert_eq!(st.m, 0);
    assert!(st.charges.iter().all(|c| *c == Q::from_count(0)));
}

#[test]
fn charging_one_split() {
    let (g, u) = two_k4();
    let bp = better_partition(&g, &u, &relaxed(8).thresholds(0, 5)).unwrap();
    let st: ChargeState<Q> = charging(&bp.trace, &g, &u).unwrap();
    assert_eq!(st.total, Q::from_count(1));
    for v in 0..4 {
        let pendant = g.edge_of_var(crate::Var(13 + v as u32 + 1)).unwrap();
        assert_eq!(g.edge(pendant).u, v);
        assert_eq!(st.charges[pendant], Q::ratio(1, 4));
    }
    assert!(st.violations(&g, &u, &Q::ratio(1, 3)).is_empty());
}

#[test]
fn charging_rejects_foreign_trace() {
    let (g, u) = two_k4();
    let bp = better_partition(&g, &u, &relaxed(8).thresholds(0, 5)).unwrap();
    let other = set(&[0, 1]);
    assert!(matches!(
        charging::<Q>(&bp.trace, &g, &other),
        Err(PartitionError::TraceInconsistent(_))
    ));
    let mut bad = bp.trace.clone();
    bad.nodes[1].set.insert(9);
    assert!(charging::<Q>(&bad, &g, &u).is_err());
}

#[test]
fn charging_multi_split_invariants() {
    let mut runs = 0;
    for seed in 0..40 {
        let inst = clustered_instance(3 + seed as usize % 2, 5, seed % 3 != 0, seed).unwrap();
        let g = &inst.graph;
        let th = relaxed(10).thresholds(0, g.max_degree());
        let Ok(bp) = better_partition(g, &inst.u, &th) else {
            continue;
        };
        runs += 1;
        let st: ChargeState<Q> = charging(&bp.trace, g, &inst.u).unwrap();
        let recomputed: usize = bp
            .trace
            .nodes
            .iter()
            .filter_map(|t| t.children)
            .map(|(a, b)| g.edges_between(&bp.trace.nodes[a].set, &bp.trace.nodes[b].set).len())
            .sum();
        assert_eq!(st.m, recomputed);
        assert_eq!(bp.m, recomputed);
        assert!(st.violations(g, &inst.u, &th.gamma).is_empty());
        // floats agree up to rounding
        let fl: ChargeState<f64> = charging(&bp.trace, g, &inst.u).unwrap();
        assert!((fl.total - st.total.to_f64()).abs() < 1e-9);
    }
    assert!(runs >= 30, "{runs}");
}

#[test]
fn tripartition_examples() {
    let mut pairs = Vec::new();
    for _ in 0..10 {
        pairs.extend([(0, 1), (1, 2), (0, 2)]);
    }
    let tri = graph(3, &pairs);
    assert_eq!(
        tripartition_graph(&tri, 0, DEFAULT_TRIALS),
        Err(PartitionError::TripartitionPrecondition {
            edges: 30,
            max_degree: 20
        })
    );
    let matching: Vec<(usize, usize)> = (0..50).map(|i| (2 * i, 2 * i + 1)).collect();
    let h = graph(100, &matching);
    let t = tripartition_graph(&h, 7, DEFAULT_TRIALS).unwrap();
    assert!(t.internal.iter().all(|&k| k >= 1));
    let covered: usize = t.parts.iter().map(BTreeSet::len).sum();
    assert_eq!(covered, 100);
}

#[test]
fn tripartition_of_contracted_grid() {
    let g = grid(6, 6, Charges::AllZero).unwrap();
    // 2×2 blocks: Δ(G_C) = 4, |E(G_C)| = 24 < 100, so use a long cycle of blocks
    let c = ContractedGraph::new(&g, (0..36).map(|v| set(&[v])).collect()).unwrap();
    assert!(tripartition(&c, 1).is_err());
    let ring = cycle(150, Charges::AllZero).unwrap();
    let blocks: Vec<BTreeSet<usize>> = (0..50).map(|i| set(&[3 * i, 3 * i + 1, 3 * i + 2])).collect();
    let c = ContractedGraph::new(&ring, blocks).unwrap();
    let t = tripartition(&c, 4).unwrap();
    for (part, &k) in t.parts.iter().zip(&t.internal) {
        assert_eq!(c.edges_within(part), k);
        assert!(180 * k >= c.num_edges());
    }
}

#[test]
fn tripartition_exhaustive_fallback() {
    let matching: Vec<(usize, usize)> = (0..5).map(|i| (2 * i, 2 * i + 1)).collect();
    let h = graph(10, &matching);
    assert!(tripartition_graph(&h, 0, 0).is_err());
    let t = tripartition_unchecked(&h, 0, 0).unwrap();
    assert!(t.exhaustive);
    assert!(t.internal.iter().all(|&k| k >= 1));
}

#[test]
fn bipartition_grid_halves() {
    let g = grid(4, 4, Charges::AllZero).unwrap();
    let r = theorem4_partition(&g, &PartitionParams::<Q>::standard(), 0).unwrap();
    assert_eq!(r.tw, 4);
    assert_eq!(r.bound, 0);
    assert_eq!(r.a, (0..8).collect());
    assert_eq!(r.b, (8..16).collect());
    assert_eq!((r.tw_a, r.tw_b), (2, 2));
    assert!(matches!(r.route, Route::Exhaustive { .. }));
}

#[test]
fn bipartition_cycle_gives_paths() {
    let g = cycle(6, Charges::AllZero).unwrap();
    let r = theorem4_partition(&g, &PartitionParams::<Q>::standard(), 0).unwrap();
    assert_eq!((r.a.len(), r.b.len()), (3, 3));
    assert_eq!((r.tw_a, r.tw_b), (1, 1));
}

#[test]
fn bipartition_tree_has_zero_bound() {
    let g = graph(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    let r = theorem4_partition(&g, &PartitionParams::<f64>::standard(), 0).unwrap();
    assert_eq!(r.bound, 0);
    assert!(g.induced(&r.a).0.is_connected() && g.induced(&r.b).0.is_connected());
}

#[test]
fn bipartition_improvement_route() {
    let g = cycle(120, Charges::AllZero).unwrap();
    let p = relaxed(4).with_alpha(Q::from_count(2));
    let r = theorem4_partition(&g, &p, 9).unwrap();
    assert_eq!(r.bound, 1);
    assert!(matches!(r.route, Route::Improvement { rounds: 1, .. }), "{:?}", r.route);
    assert!(r.tw_a >= 1 && r.tw_b >= 1);
    assert_eq!(r.a.len() + r.b.len(), 120);
}

#[test]
fn bipartition_rejects_disconnected() {
    let g = graph(4, &[(0, 1), (2, 3)]);
    assert!(theorem4_partition(&g, &PartitionParams::<Q>::standard(), 0).is_err());
}

#[test]
fn two_connected_side_grid_end_to_end() {
    let g = grid(4, 4, Charges::AllZero).unwrap();
    let r = lemma4_partition(&g, &PartitionParams::<Q>::standard(), 0).unwrap();
    assert!(g.induced(&r.a).0.is_connected());
    assert!(g.induced(&r.b).0.is_2connected());
    assert!(r.separators.is_empty(), "the 2×4 half is already 2-connected");
    assert_eq!(r.b, r.start.b);
}

#[test]
fn two_connected_side_grid_4x3() {
    let g = grid(4, 3, Charges::AllZero).unwrap();
    let r = lemma4_partition(&g, &PartitionParams::<Q>::standard(), 0).unwrap();
    assert!(r.tw_a >= 2 && r.tw_b >= 2);
    assert!(g.induced(&r.a).0.is_connected());
    assert!(g.induced(&r.b).0.is_2connected());
}

#[test]
fn shrinking_a_path_leaves_an_edge() {
    let g = cycle(6, Charges::AllZero).unwrap();
    let (b, seps) = shrink_to_2connected(&g, &set(&[0, 1, 2])).unwrap();
    assert_eq!(seps, vec![1]);
    assert_eq!(b, set(&[0, 1]));
    assert!(g.induced(&b).0.is_2connected());
}

#[test]
fn shrinking_keeps_the_high_treewidth_block() {
    // K4 on 0..3 and a triangle 4,5,6 sharing vertex 3 with it
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 0)];
    let g = graph(7, &pairs);
    assert!(g.is_2connected());
    let (b, seps) = shrink_to_2connected(&g, &set(&[0, 1, 2, 3, 4, 5])).unwrap();
    assert_eq!(seps, vec![3]);
    assert_eq!(b, set(&[0, 1, 2, 3]));
    let (same, none) = shrink_to_2connected(&g, &b).unwrap();
    assert_eq!((same, none.len()), (b, 0));
}

#[test]
fn two_connected_side_rejects_non_2connected() {
    let g = path(4, Charges::AllZero).unwrap();
    assert!(matches!(
        lemma4_partition(&g, &PartitionParams::<Q>::standard(), 0),
        Err(PartitionError::Precondition(_))
    ));
}
