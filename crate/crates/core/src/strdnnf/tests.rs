use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cnf::{Assignment, Clause, Cnf, Var};
use crate::oracle::{self, count_models, equivalent};
use crate::vtree::{Shape, Vtree};

fn vt(ids: &[u32], shape: Shape) -> Arc<Vtree> {
    let vars: Vec<Var> = ids.iter().map(|&i| Var(i)).collect();
    Arc::new(Vtree::build(&vars, shape).unwrap())
}

fn set(ids: &[u32]) -> BTreeSet<Var> {
    ids.iter().map(|&i| Var(i)).collect()
}

fn clause(lits: &[i64]) -> Clause {
    Clause::from_dimacs(lits).unwrap()
}

fn cnf_circuit(c: &Cnf, t: &Arc<Vtree>) -> StrDnnf {
    let mut acc = StrDnnf::constant(t, true);
    for cl in c.clauses() {
        acc = apply_and(&acc, &compile_clause(cl, t).unwrap()).unwrap();
        validate(&acc).unwrap();
    }
    acc
}

fn random_cnf(rng: &mut ChaCha8Rng, n: u32, m: usize) -> Cnf {
    let mut clauses = Vec::new();
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

fn shapes() -> [Shape; 4] {
    [Shape::Linear, Shape::Balanced, Shape::Random(3), Shape::Random(11)]
}

#[test]
fn validate_literal_ok() {
    let t = vt(&[1, 2], Shape::Balanced);
    let x = StrDnnf::literal(&t, Var(1).pos()).unwrap();
    assert_eq!(validate(&x), Ok(()));
}

#[test]
fn validate_flags_shared_variable() {
    let t = vt(&[1, 2], Shape::Balanced);
    let leaf = t.leaf(Var(1)).unwrap() as u32;
    let s = StrDnnf::from_parts(
        t.clone(),
        vec![Node::Lit(Var(1).pos()), Node::Lit(Var(1).neg()), Node::And(0, 1)],
        vec![leaf, leaf, 0],
    );
    assert_eq!(validate(&s).unwrap_err().kind, ViolationKind::Decomposability);
}

#[test]
fn validate_flags_condition2() {
    let t = vt(&[1, 2], Shape::Balanced);
    let (l1, l2) = (t.leaf(Var(1)).unwrap() as u32, t.leaf(Var(2)).unwrap() as u32);
    let s = StrDnnf::from_parts(
        t.clone(),
        vec![Node::Lit(Var(1).pos()), Node::Lit(Var(2).pos()), Node::Or(0, 1)],
        vec![l1, l2, 0],
    );
    let v = validate(&s).unwrap_err();
    assert_eq!((v.node, v.kind), (2, ViolationKind::Condition2));
}

#[test]
fn validate_flags_condition1_and_3() {
    let t = vt(&[1, 2, 3], Shape::Linear);
    // ∧ at the root with both children under the right child
    let (l2, l3) = (t.leaf(Var(2)).unwrap() as u32, t.leaf(Var(3)).unwrap() as u32);
    let s = StrDnnf::from_parts(
        t.clone(),
        vec![Node::Lit(Var(2).pos()), Node::Lit(Var(3).pos()), Node::And(0, 1)],
        vec![l2, l3, 0],
    );
    assert_eq!(validate(&s).unwrap_err().kind, ViolationKind::Condition1);
    let s = StrDnnf::from_parts(t.clone(), vec![Node::Lit(Var(1).pos())], vec![l2]);
    assert_eq!(validate(&s).unwrap_err().kind, ViolationKind::Condition3);
}

#[test]
fn clause_single_literal() {
    let t = vt(&[1, 2], Shape::Balanced);
    let s = compile_clause(&clause(&[1]), &t).unwrap();
    validate(&s).unwrap();
    assert_eq!(s.vars(), set(&[1]));
    assert_eq!(count_models(&s, &set(&[1, 2])).unwrap(), 2);
    assert!(s.evaluate(&Assignment::from_pairs([(Var(1), true)])).unwrap());
}

#[test]
fn empty_clause_is_false() {
    let t = vt(&[1, 2], Shape::Balanced);
    assert!(compile_clause(&Clause::empty(), &t).unwrap().is_false());
}

#[test]
fn clause_x_or_not_y() {
    let t = vt(&[1, 2], Shape::Balanced);
    let c = clause(&[1, -2]);
    let s = compile_clause(&c, &t).unwrap();
    validate(&s).unwrap();
    assert_eq!(count_models(&s, &set(&[1, 2])).unwrap(), 3);
    assert!(equivalent(&s, &c, &set(&[1, 2])).unwrap());
}

#[test]
fn clause_size_is_linear() {
    for shape in shapes() {
        let ids: Vec<u32> = (1..=10).collect();
        let t = vt(&ids, shape);
        let c = clause(&[1, -4, 7, -10]);
        let s = compile_clause(&c, &t).unwrap();
        validate(&s).unwrap();
        assert!(s.size() <= 2 * t.num_vars());
        assert!(equivalent(&s, &c, &set(&ids)).unwrap());
    }
}

#[test]
fn clause_var_outside_vtree() {
    let t = vt(&[1, 2], Shape::Balanced);
    assert_eq!(
        compile_clause(&clause(&[3]), &t),
        Err(StrDnnfError::VarNotInVtree(Var(3)))
    );
}

#[test]
fn parity_single_var_is_literal() {
    let t = vt(&[1, 2, 3], Shape::Random(5));
    let s = compile_parity(&set(&[2]), true, &t).unwrap();
    assert_eq!(s.node_count(), 1);
    assert_eq!(s.node(s.root()), Node::Lit(Var(2).pos()));
}

#[test]
fn parity_xnor() {
    let t = vt(&[1, 2], Shape::Balanced);
    let s = compile_parity(&set(&[1, 2]), false, &t).unwrap();
    validate(&s).unwrap();
    let models = s.enumerate_models(&set(&[1, 2])).unwrap();
    let bits: Vec<(bool, bool)> = models
        .iter()
        .map(|a| (a.get(Var(1)).unwrap(), a.get(Var(2)).unwrap()))
        .collect();
    assert_eq!(bits, vec![(false, false), (true, true)]);
}

#[test]
fn parity_eight_vars_count() {
    let ids: Vec<u32> = (1..=8).collect();
    let t = vt(&ids, Shape::Balanced);
    let s = compile_parity(&set(&ids), true, &t).unwrap();
    validate(&s).unwrap();
    assert_eq!(count_models(&s, &set(&ids)).unwrap(), 128);
}

#[test]
fn parity_size_bound_all_shapes() {
    let ids: Vec<u32> = (1..=12).collect();
    for shape in shapes() {
        let t = vt(&ids, shape);
        for k in 0..=12usize {
            let vars: BTreeSet<Var> = ids.iter().take(k).map(|&i| Var(i)).collect();
            for parity in [false, true] {
                let s = compile_parity(&vars, parity, &t).unwrap();
                validate(&s).unwrap();
                assert!(s.size() <= parity_edge_bound(vars.len()));
                assert!(s.node_count() <= 8 * vars.len().max(1));
                assert!(s.size() <= 12 * t.num_vars());
                let want = if k == 0 {
                    if parity { 0 } else { 1 << 12 }
                } else {
                    1u64 << 11
                };
                assert_eq!(count_models(&s, &set(&ids)).unwrap(), want);
            }
        }
    }
}

#[test]
fn apply_identity() {
    let t = vt(&[1, 2, 3], Shape::Balanced);
    let s = compile_parity(&set(&[1, 2, 3]), true, &t).unwrap();
    let r = apply_and(&s, &StrDnnf::constant(&t, true)).unwrap();
    assert!(equivalent(&r, &s, &set(&[1, 2, 3])).unwrap());
    let r = apply_and(&StrDnnf::constant(&t, true), &s).unwrap();
    assert_eq!(r, s);
}

#[test]
fn apply_resolves_to_y() {
    let t = vt(&[1, 2], Shape::Balanced);
    let a = compile_clause(&clause(&[1, 2]), &t).unwrap();
    let b = compile_clause(&clause(&[-1, 2]), &t).unwrap();
    let r = apply_and(&a, &b).unwrap();
    validate(&r).unwrap();
    assert!(equivalent(&r, &clause(&[2]), &set(&[1, 2])).unwrap());
}

#[test]
fn apply_two_parities() {
    let t = vt(&[1, 2, 3], Shape::Balanced);
    let a = compile_parity(&set(&[1, 2]), false, &t).unwrap();
    let b = compile_parity(&set(&[2, 3]), false, &t).unwrap();
    let r = apply_and(&a, &b).unwrap();
    validate(&r).unwrap();
    let models = r.enumerate_models(&set(&[1, 2, 3])).unwrap();
    assert_eq!(models.len(), 2);
    for m in models {
        let v: Vec<bool> = m.iter().map(|(_, b)| b).collect();
        assert!(v == [false; 3] || v == [true; 3]);
    }
}

#[test]
fn apply_contradiction_is_false() {
    let t = vt(&[1, 2], Shape::Linear);
    let x = StrDnnf::literal(&t, Var(1).pos()).unwrap();
    let nx = StrDnnf::literal(&t, Var(1).neg()).unwrap();
    let r = apply_and(&x, &nx).unwrap();
    assert!(!r.is_satisfiable());
    assert!(r.is_false());
}

#[test]
fn apply_vtree_mismatch() {
    let a = StrDnnf::constant(&vt(&[1, 2, 3], Shape::Linear), true);
    let b = StrDnnf::constant(&vt(&[1, 2, 3], Shape::Balanced), true);
    assert_eq!(apply_and(&a, &b), Err(StrDnnfError::VtreeMismatch));
}

#[test]
fn apply_limit() {
    let ids: Vec<u32> = (1..=8).collect();
    let t = vt(&ids, Shape::Balanced);
    let a = compile_parity(&set(&ids), true, &t).unwrap();
    let b = compile_clause(&clause(&[1, 5, -8]), &t).unwrap();
    assert!(matches!(
        apply_and_limited(&a, &b, 4),
        Err(StrDnnfError::LimitExceeded { limit: 4 })
    ));
}

#[test]
fn random_cnfs_compile_correctly() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..60 {
        let n = rng.gen_range(2..=9);
        let m = rng.gen_range(1..=12);
        let f = random_cnf(&mut rng, n, m);
        let ids: Vec<u32> = (1..=n).collect();
        let t = vt(&ids, shapes()[round % 4]);
        let s = cnf_circuit(&f, &t);
        assert!(equivalent(&s, &f, &set(&ids)).unwrap(), "round {round}");
        assert_eq!(s.is_satisfiable(), count_models(&f, &set(&ids)).unwrap() > 0);
        if let Some(m) = s.model() {
            let mut total = m.clone();
            for &v in &ids {
                if total.get(Var(v)).is_none() {
                    total.set(Var(v), false);
                }
            }
            assert_eq!(f.evaluate(&total), Some(true));
        }
    }
}

#[test]
fn random_apply_node_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for round in 0..60 {
        let n = rng.gen_range(3..=8);
        let ids: Vec<u32> = (1..=n).collect();
        let t = vt(&ids, shapes()[round % 4]);
        let a = cnf_circuit(&random_cnf(&mut rng, n, 4), &t);
        let b = cnf_circuit(&random_cnf(&mut rng, n, 4), &t);
        let r = apply_and(&a, &b).unwrap();
        validate(&r).unwrap();
        assert!(
            r.node_count() <= apply_node_bound(a.node_count(), b.node_count(), t.len()),
            "round {round}"
        );
        let mut u = a.vars();
        u.extend(b.vars());
        let want = oracle::table_of(&a, &set(&ids))
            .unwrap()
            .to_bit_string()
            .chars()
            .zip(oracle::table_of(&b, &set(&ids)).unwrap().to_bit_string().chars())
            .map(|(x, y)| if x == '1' && y == '1' { '1' } else { '0' })
            .collect::<String>();
        assert_eq!(oracle::table_of(&r, &set(&ids)).unwrap().to_bit_string(), want);
    }
}

#[test]
fn condition_empty_is_identity() {
    let t = vt(&[1, 2, 3], Shape::Balanced);
    let s = compile_parity(&set(&[1, 2, 3]), true, &t).unwrap();
    assert_eq!(s.condition(&Assignment::new()), s);
}

#[test]
fn condition_literal_to_false() {
    let t = vt(&[1, 2], Shape::Balanced);
    let x = StrDnnf::literal(&t, Var(1).pos()).unwrap();
    let r = x.condition(&Assignment::from_pairs([(Var(1), false)]));
    assert!(r.is_false());
}

#[test]
fn condition_parity() {
    let t = vt(&[1, 2, 3], Shape::Balanced);
    let s = compile_parity(&set(&[1, 2, 3]), true, &t).unwrap();
    let r = s.condition(&Assignment::from_pairs([(Var(1), true)]));
    validate(&r).unwrap();
    assert!(Arc::ptr_eq(r.vtree(), s.vtree()));
    assert!(r.size() <= s.size());
    let want = compile_parity(&set(&[2, 3]), false, &t).unwrap();
    assert!(equivalent(&r, &want, &set(&[1, 2, 3])).unwrap());
    assert!(!r.vars().contains(&Var(1)));
}

#[test]
fn random_condition_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for round in 0..60 {
        let n = rng.gen_range(2..=9);
        let ids: Vec<u32> = (1..=n).collect();
        let t = vt(&ids, shapes()[round % 4]);
        let m = rng.gen_range(1..=8);
        let f = random_cnf(&mut rng, n, m);
        let s = cnf_circuit(&f, &t);
        let mut a = Assignment::new();
        for &v in &ids {
            if rng.gen_bool(0.4) {
                a.set(Var(v), rng.gen());
            }
        }
        let r = s.condition(&a);
        validate(&r).unwrap();
        assert!(r.size() <= s.size(), "round {round}");
        assert!(equivalent(&r, &f.condition(&a), &set(&ids)).unwrap(), "round {round}");
    }
}

#[test]
fn restructure_same_vtree() {
    let t = vt(&[1, 2, 3, 4], Shape::Balanced);
    let f = Cnf::with_vars(4, vec![clause(&[1, -2]), clause(&[3, 4]), clause(&[-1, -4])]).unwrap();
    let s = cnf_circuit(&f, &t);
    let r = restructure(&s, &t).unwrap();
    validate(&r).unwrap();
    assert!(equivalent(&r, &s, &set(&[1, 2, 3, 4])).unwrap());
}

#[test]
fn restructure_to_reversed_linear() {
    let t = vt(&[1, 2, 3, 4], Shape::Balanced);
    let t2 = vt(&[4, 3, 2, 1], Shape::Linear);
    let f = Cnf::with_vars(4, vec![clause(&[1, 2, -3]), clause(&[-2, 4]), clause(&[3, -4, 1])]).unwrap();
    let s = cnf_circuit(&f, &t);
    let r = restructure(&s, &t2).unwrap();
    validate(&r).unwrap();
    assert!(r.vtree().same_vtree(&t2));
    assert!(equivalent(&r, &f, &set(&[1, 2, 3, 4])).unwrap());
}

#[test]
fn restructure_parity_stays_linear() {
    let ids: Vec<u32> = (1..=10).collect();
    let t = vt(&ids, Shape::Balanced);
    let s = compile_parity(&set(&ids), false, &t).unwrap();
    for shape in shapes() {
        let mut rev = ids.clone();
        rev.reverse();
        let t2 = vt(&rev, shape);
        let r = restructure(&s, &t2).unwrap();
        validate(&r).unwrap();
        assert!(r.size() <= parity_edge_bound(ids.len()), "{shape:?}: {}", r.size());
        assert!(equivalent(&r, &s, &set(&ids)).unwrap());
    }
}

#[test]
fn restructure_errors() {
    let t = vt(&[1, 2], Shape::Balanced);
    let s = StrDnnf::constant(&t, true);
    assert_eq!(
        restructure(&s, &vt(&[1, 3], Shape::Balanced)),
        Err(StrDnnfError::VarSetMismatch)
    );
    let ids: Vec<u32> = (1..=25).collect();
    let big = vt(&ids, Shape::Balanced);
    assert!(matches!(
        restructure(&StrDnnf::constant(&big, true), &big),
        Err(StrDnnfError::TooManyVars { .. })
    ));
}

#[test]
fn satisfiability_basics() {
    let t = vt(&[1, 2], Shape::Balanced);
    assert!(!StrDnnf::constant(&t, false).is_satisfiable());
    assert!(StrDnnf::literal(&t, Var(2).neg()).unwrap().is_satisfiable());
}

#[test]
fn evaluate_basics() {
    let t = vt(&[1, 2], Shape::Balanced);
    assert!(StrDnnf::constant(&t, true).evaluate(&Assignment::new()).unwrap());
    let x = StrDnnf::literal(&t, Var(1).pos()).unwrap();
    let y = StrDnnf::literal(&t, Var(2).pos()).unwrap();
    let xy = apply_and(&x, &y).unwrap();
    assert_eq!(xy.node_count(), 3);
    let a = Assignment::from_pairs([(Var(1), true), (Var(2), false)]);
    assert!(!xy.evaluate(&a).unwrap());
    assert_eq!(
        xy.evaluate(&Assignment::from_pairs([(Var(1), true)])),
        Err(StrDnnfError::Unassigned(Var(2)))
    );
}

#[test]
fn enumerate_xor() {
    let t = vt(&[1, 2], Shape::Balanced);
    let s = compile_parity(&set(&[1, 2]), true, &t).unwrap();
    let models = s.enumerate_models(&set(&[1, 2])).unwrap();
    let bits: Vec<(bool, bool)> = models
        .iter()
        .map(|a| (a.get(Var(1)).unwrap(), a.get(Var(2)).unwrap()))
        .collect();
    assert_eq!(bits, vec![(true, false), (false, true)]);
    let big: BTreeSet<Var> = (1..=25).map(Var).collect();
    assert!(matches!(s.enumerate_models(&big), Err(StrDnnfError::TooManyVars { .. })));
}

#[test]
fn nnf_round_trip() {
    let ids: Vec<u32> = (1..=6).collect();
    let t = vt(&ids, Shape::Random(2));
    let f = Cnf::with_vars(6, vec![clause(&[1, -3, 5]), clause(&[2, 6]), clause(&[-1, -6])]).unwrap();
    let s = cnf_circuit(&f, &t);
    let text = write_nnf(&s, Some("f.vtree"));
    assert_eq!(nnf_vtree_path(&text).as_deref(), Some("f.vtree"));
    let back = parse_nnf(&text, &t).unwrap();
    assert_eq!(back, s);
    assert_eq!(write_nnf(&back, Some("f.vtree")), text);
    let one = StrDnnf::constant(&t, true);
    assert_eq!(parse_nnf(&write_nnf(&one, None), &t).unwrap(), one);
}

#[test]
fn nnf_parse_errors() {
    let t = vt(&[1, 2], Shape::Balanced);
    assert!(parse_nnf("L 1\n", &t).is_err());
    assert!(parse_nnf("nnf 1 0 2\nA 0 0 0\n", &t).is_err());
    assert!(parse_nnf("nnf 2 0 2\nL 1\n", &t).is_err());
    assert!(parse_nnf("nnf 1 0 3\nC 1\n", &t).is_err());
    assert!(parse_nnf("nnf 1 0 2\nL 7\n", &t).is_err());
}
