//! Brute-force ground truth over small universes.
//!
//! Assignment order: bit `j` of a table index is the value of the `j`-th
//! smallest variable of the universe, so the lowest id is least significant.

use std::collections::BTreeSet;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Assignment, Clause, Cnf, Var};
use crate::strdnnf::StrDnnf;

pub const MAX_VARS: usize = 20;

/// Bit patterns of the six low index bits inside a 64-bit block.
pub const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Values of index bit `j` over block `block` (indices `64·block..64·block+63`).
pub fn var_word(j: usize, block: u64) -> u64 {
    if j < 6 {
        PATTERNS[j]
    } else if (block >> (j - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} variables exceed the oracle limit of {MAX_VARS}")]
    TooLarge(usize),
    #[error("variable {0} is outside the universe")]
    OutsideUniverse(Var),
}

/// Anything that can be evaluated on 64 assignments at once.
pub trait BlockEval {
    fn eval_vars(&self) -> BTreeSet<Var>;
    fn eval_words(&self, value: &dyn Fn(Var) -> u64, scratch: &mut Vec<u64>) -> u64;
}

impl BlockEval for Cnf {
    fn eval_vars(&self) -> BTreeSet<Var> {
        self.var_set()
    }
    fn eval_words(&self, value: &dyn Fn(Var) -> u64, _: &mut Vec<u64>) -> u64 {
        let mut acc = !0u64;
        for c in self.clauses() {
            acc &= clause_word(c, value);
            if acc == 0 {
                break;
            }
        }
        acc
    }
}

impl BlockEval for Clause {
    fn eval_vars(&self) -> BTreeSet<Var> {
        self.vars().collect()
    }
    fn eval_words(&self, value: &dyn Fn(Var) -> u64, _: &mut Vec<u64>) -> u64 {
        clause_word(self, value)
    }
}

fn clause_word(c: &Clause, value: &dyn Fn(Var) -> u64) -> u64 {
    let mut w = 0u64;
    for l in c.lits() {
        let x = value(l.var());
        w |= if l.is_positive() { x } else { !x };
    }
    w
}

impl BlockEval for StrDnnf {
    fn eval_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
    fn eval_words(&self, value: &dyn Fn(Var) -> u64, scratch: &mut Vec<u64>) -> u64 {
        self.eval_block(value, scratch)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    universe: Vec<Var>,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn universe(&self) -> &[Var] {
        &self.universe
    }
    pub fn len(&self) -> usize {
        1 << self.universe.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn get(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }
    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
    pub fn assignment(&self, index: usize) -> Assignment {
        Assignment::from_pairs(
            self.universe
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, index >> j & 1 == 1)),
        )
    }
    /// `0`/`1` string, index 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len()).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

fn check_universe(x: &dyn BlockEval, universe: &BTreeSet<Var>) -> Result<Vec<Var>, OracleError> {
    if universe.len() > MAX_VARS {
        return Err(OracleError::TooLarge(universe.len()));
    }
    if let Some(v) = x.eval_vars().into_iter().find(|v| !universe.contains(v)) {
        return Err(OracleError::OutsideUniverse(v));
    }
    Ok(universe.iter().copied().collect())
}

fn blocks(n: usize) -> u64 {
    (1u64 << n).div_ceil(64)
}

fn valid_mask(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1 << n)) - 1
    }
}

pub fn table_of(x: &dyn BlockEval, universe: &BTreeSet<Var>) -> Result<TruthTable, OracleError> {
    let vars = check_universe(x, universe)?;
    let n = vars.len();
    let mut bits = Vec::with_capacity(blocks(n) as usize);
    let mut scratch = Vec::new();
    for b in 0..blocks(n) {
        let word = |v: Var| var_word(vars.binary_search(&v).unwrap(), b);
        bits.push(x.eval_words(&word, &mut scratch) & valid_mask(n));
    }
    Ok(TruthTable {
        universe: vars,
        bits,
    })
}

/// `None` when equivalent over `universe`, otherwise the first differing
/// assignment in table order.
pub fn counterexample(
    a: &dyn BlockEval,
    b: &dyn BlockEval,
    universe: &BTreeSet<Var>,
) -> Result<Option<Assignment>, OracleError> {
    let vars = check_universe(a, universe)?;
    check_universe(b, universe)?;
    let n = vars.len();
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    for blk in 0..blocks(n) {
        let word = |v: Var| var_word(vars.binary_search(&v).unwrap(), blk);
        let diff = (a.eval_words(&word, &mut sa) ^ b.eval_words(&word, &mut sb)) & valid_mask(n);
        if diff != 0 {
            let i = blk * 64 + diff.trailing_zeros() as u64;
            return Ok(Some(Assignment::from_pairs(
                vars.iter().enumerate().map(|(j, &v)| (v, i >> j & 1 == 1)),
            )));
        }
    }
    Ok(None)
}

pub fn equivalent(a: &dyn BlockEval, b: &dyn BlockEval, universe: &BTreeSet<Var>) -> Result<bool, OracleError> {
    Ok(counterexample(a, b, universe)?.is_none())
}

pub fn count_models(x: &dyn BlockEval, universe: &BTreeSet<Var>) -> Result<u64, OracleError> {
    Ok(table_of(x, universe)?.count_ones())
}

pub fn is_satisfiable(x: &dyn BlockEval) -> Result<bool, OracleError> {
    let u = x.eval_vars();
    Ok(table_of(x, &u)?.count_ones() > 0)
}

/// Random-assignment agreement check for universes beyond the oracle limit.
/// Returns a disagreeing assignment if one is sampled.
pub fn sample_counterexample(
    a: &dyn BlockEval,
    b: &dyn BlockEval,
    samples: usize,
    seed: u64,
) -> Option<Assignment> {
    let mut vars: BTreeSet<Var> = a.eval_vars();
    vars.extend(b.eval_vars());
    let vars: Vec<Var> = vars.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sa, mut sb) = (Vec::new(), Vec::new());
    for _ in 0..samples.div_ceil(64) {
        let words: Vec<u64> = vars.iter().map(|_| rng.next_u64()).collect();
        let word = |v: Var| words[vars.binary_search(&v).unwrap()];
        let diff = a.eval_words(&word, &mut sa) ^ b.eval_words(&word, &mut sb);
        if diff != 0 {
            let k = diff.trailing_zeros();
            return Some(Assignment::from_pairs(
                vars.iter().zip(&words).map(|(&v, w)| (v, w >> k & 1 == 1)),
            ));
        }
    }
    None
}

/// Exact check when the union of variables fits the oracle, sampling beyond.
pub fn agree(a: &dyn BlockEval, b: &dyn BlockEval, samples: usize, seed: u64) -> Option<Assignment> {
    let mut u = a.eval_vars();
    u.extend(b.eval_vars());
    if u.len() <= MAX_VARS {
        counterexample(a, b, &u).expect("universe checked")
    } else {
        sample_counterexample(a, b, samples, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Clause, Lit};
    use crate::strdnnf::StrDnnf;
    use crate::vtree::{Shape, Vtree};
    use std::sync::Arc;

    fn u(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| Var(i)).collect()
    }

    #[test]
    fn constant_one_table() {
        let vt = Arc::new(Vtree::build(&[Var(1), Var(2)], Shape::Balanced).unwrap());
        let t = table_of(&StrDnnf::constant(&vt, true), &u(&[1, 2])).unwrap();
        assert_eq!(t.to_bit_string(), "1111");
        assert_eq!(count_models(&StrDnnf::constant(&vt, false), &u(&[1, 2])).unwrap(), 0);
    }

    #[test]
    fn clause_table_order() {
        // index = x1 + 2·x2: (0,0) is the only falsifier
        let c = Clause::from_dimacs(&[1, 2]).unwrap();
        let t = table_of(&c, &u(&[1, 2])).unwrap();
        assert_eq!(t.to_bit_string(), "0111");
        assert_eq!(t.assignment(2).get(Var(2)), Some(true));
    }

    #[test]
    fn counterexample_for_negation() {
        let x = Clause::new([Lit::new(Var(1), true)]).unwrap();
        let nx = Clause::new([Lit::new(Var(1), false)]).unwrap();
        let cex = counterexample(&x, &nx, &u(&[1])).unwrap().unwrap();
        assert_eq!(cex.get(Var(1)), Some(false));
        assert!(equivalent(&x, &x.clone(), &u(&[1])).unwrap());
    }

    #[test]
    fn limits() {
        let big: BTreeSet<Var> = (1..=21).map(Var).collect();
        let c = Clause::from_dimacs(&[1]).unwrap();
        assert_eq!(table_of(&c, &big), Err(OracleError::TooLarge(21)));
        assert_eq!(table_of(&c, &u(&[2])), Err(OracleError::OutsideUniverse(Var(1))));
    }

    #[test]
    fn wide_tables_use_block_bits() {
        let c = Clause::from_dimacs(&[8]).unwrap();
        let univ: BTreeSet<Var> = (1..=8).map(Var).collect();
        let t = table_of(&c, &univ).unwrap();
        assert_eq!(t.count_ones(), 128);
        assert!(!t.get(127) && t.get(128));
    }

    #[test]
    fn sampling_finds_difference() {
        let a = Clause::from_dimacs(&(1..=30).collect::<Vec<_>>()).unwrap();
        let b = Clause::from_dimacs(&(1..=29).collect::<Vec<_>>()).unwrap();
        assert!(sample_counterexample(&a, &a.clone(), 1000, 1).is_none());
        // differ only when x1..x29 are all 0 and x30 = 1: too rare to sample
        assert!(sample_counterexample(&a, &b, 1000, 1).is_none());
        let c = Clause::from_dimacs(&[1, 2]).unwrap();
        let d = Clause::from_dimacs(&[1, 3]).unwrap();
        assert!(sample_counterexample(&c, &d, 1000, 1).is_some());
    }
}
