//! CNF formulas, partial assignments, conditioning and DIMACS I/O.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn id(self) -> u32 {
        self.0
    }
    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Ordered by variable first, negative before positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    var: Var,
    positive: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit { var, positive }
    }

    /// `None` for 0.
    pub fn from_dimacs(n: i64) -> Option<Lit> {
        if n == 0 || n.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Lit::new(Var(n.unsigned_abs() as u32), n > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var.0 as i64
        } else {
            -(self.var.0 as i64)
        }
    }

    pub fn var(self) -> Var {
        self.var
    }
    pub fn is_positive(self) -> bool {
        self.positive
    }
    pub fn negate(self) -> Lit {
        Lit::new(self.var, !self.positive)
    }

    /// Value of the literal under `value` for its variable.
    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause contains both polarities of {0}")]
    Tautology(Var),
    #[error("variable {0} is not in the universe")]
    VarNotInUniverse(Var),
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: variable {var} exceeds declared count {n}")]
    VarOutOfRange { line: usize, var: u32, n: u32 },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

/// A set of literals over distinct variables, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I) -> Result<Clause, CnfError> {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        for w in v.windows(2) {
            if w[0].var == w[1].var {
                return Err(CnfError::Tautology(w[0].var));
            }
        }
        Ok(Clause(v))
    }

    pub fn from_dimacs(lits: &[i64]) -> Result<Clause, CnfError> {
        Clause::new(lits.iter().filter_map(|&l| Lit::from_dimacs(l)))
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var)
    }

    pub fn lit_of(&self, var: Var) -> Option<Lit> {
        self.0
            .binary_search_by(|l| l.var.cmp(&var))
            .ok()
            .map(|i| self.0[i])
    }

    /// `Some(true)` when satisfied, `Some(false)` when falsified, `None` otherwise.
    pub fn eval(&self, a: &Assignment) -> Option<bool> {
        let mut open = false;
        for l in &self.0 {
            match a.get(l.var) {
                Some(v) if l.eval(v) => return Some(true),
                Some(_) => {}
                None => open = true,
            }
        }
        if open {
            None
        } else {
            Some(false)
        }
    }

    /// The clause under `a`, or `None` when `a` satisfies it.
    pub fn condition(&self, a: &Assignment) -> Option<Clause> {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match a.get(l.var) {
                Some(v) if l.eval(v) => return None,
                Some(_) => {}
                None => out.push(l),
            }
        }
        Some(Clause(out))
    }

    /// The unique assignment to the clause variables that falsifies it.
    pub fn falsifier(&self) -> Assignment {
        Assignment::from_pairs(self.0.iter().map(|l| (l.var, !l.positive)))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Partial map from variables to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Assignment {
        Assignment(pairs.into_iter().collect())
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(&v).copied()
    }
    pub fn set(&mut self, v: Var, value: bool) {
        self.0.insert(v, value);
    }
    pub fn remove(&mut self, v: Var) -> Option<bool> {
        self.0.remove(&v)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn domain(&self) -> BTreeSet<Var> {
        self.0.keys().copied().collect()
    }
    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// Values from `other` win on overlap.
    pub fn union(&self, other: &Assignment) -> Assignment {
        let mut m = self.0.clone();
        m.extend(other.0.iter().map(|(&v, &b)| (v, b)));
        Assignment(m)
    }

    pub fn restrict<'a, I: IntoIterator<Item = &'a Var>>(&self, vars: I) -> Assignment {
        Assignment(
            vars.into_iter()
                .filter_map(|&v| self.get(v).map(|b| (v, b)))
                .collect(),
        )
    }

    /// Number of variables mapped to 1.
    pub fn ones(&self) -> usize {
        self.0.values().filter(|&&b| b).count()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, b)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", v, *b as u8)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subformula {
    Proper,
    Equal,
    No,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    universe: BTreeSet<Var>,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(universe: BTreeSet<Var>, clauses: Vec<Clause>) -> Result<Cnf, CnfError> {
        for c in &clauses {
            for v in c.vars() {
                if !universe.contains(&v) {
                    return Err(CnfError::VarNotInUniverse(v));
                }
            }
        }
        Ok(Cnf { universe, clauses })
    }

    /// Universe `{1..n}`.
    pub fn with_vars(n: u32, clauses: Vec<Clause>) -> Result<Cnf, CnfError> {
        Cnf::new((1..=n).map(Var).collect(), clauses)
    }

    pub fn universe(&self) -> &BTreeSet<Var> {
        &self.universe
    }
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }
    pub fn len(&self) -> usize {
        self.clauses.len()
    }
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// `clause(F)`.
    pub fn clause_set(&self) -> BTreeSet<&Clause> {
        self.clauses.iter().collect()
    }

    /// `var(F)`: variables that occur in some clause.
    pub fn var_set(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    /// `F|a`. Satisfied clauses disappear, falsified literals are deleted and
    /// an emptied clause stays in place.
    pub fn condition(&self, a: &Assignment) -> Cnf {
        let clauses = self.clauses.iter().filter_map(|c| c.condition(a)).collect();
        let universe = self
            .universe
            .iter()
            .copied()
            .filter(|v| a.get(*v).is_none())
            .collect();
        Cnf { universe, clauses }
    }

    /// `Some(true)` when every clause is satisfied, `Some(false)` when one is
    /// falsified, `None` when undetermined.
    pub fn evaluate(&self, a: &Assignment) -> Option<bool> {
        let mut open = false;
        for c in &self.clauses {
            match c.eval(a) {
                Some(false) => return Some(false),
                None => open = true,
                Some(true) => {}
            }
        }
        if open {
            None
        } else {
            Some(true)
        }
    }

    /// Compare `clause(self)` against `clause(other)`.
    pub fn is_subformula(&self, other: &Cnf) -> Subformula {
        let a = self.clause_set();
        let b = other.clause_set();
        if a == b {
            Subformula::Equal
        } else if a.is_subset(&b) {
            Subformula::Proper
        } else {
            Subformula::No
        }
    }

    /// The formula made of the clauses at `indices`, same universe.
    pub fn select<I: IntoIterator<Item = usize>>(&self, indices: I) -> Cnf {
        Cnf {
            universe: self.universe.clone(),
            clauses: indices.into_iter().map(|i| self.clauses[i].clone()).collect(),
        }
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Reads DIMACS CNF. Duplicate clauses are collapsed to their first occurrence.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut found = 0usize;
    let mut seen: HashSet<Clause> = HashSet::new();

    'lines: for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::MalformedHeader {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let bad = |msg: &str| CnfError::MalformedHeader {
                line: line_no,
                msg: msg.to_string(),
            };
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad("expected `p cnf <vars> <clauses>`"));
            }
            let n: u32 = parts[2].parse().map_err(|_| bad("bad variable count"))?;
            let m: usize = parts[3].parse().map_err(|_| bad("bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(CnfError::MalformedHeader {
                line: line_no,
                msg: "clause before header".into(),
            });
        };
        for tok in trimmed.split_whitespace() {
            if tok.starts_with('c') {
                continue 'lines;
            }
            let x: i64 = tok.parse().map_err(|_| CnfError::Malformed {
                line: line_no,
                msg: format!("bad literal `{tok}`"),
            })?;
            if x == 0 {
                let c = Clause::from_dimacs(&current)?;
                current.clear();
                found += 1;
                if seen.insert(c.clone()) {
                    clauses.push(c);
                }
            } else {
                if x.unsigned_abs() > n as u64 {
                    return Err(CnfError::VarOutOfRange {
                        line: line_no,
                        var: x.unsigned_abs().min(u32::MAX as u64) as u32,
                        n,
                    });
                }
                current.push(x);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(CnfError::MalformedHeader {
            line: 0,
            msg: "missing header".into(),
        });
    };
    if !current.is_empty() {
        return Err(CnfError::Unterminated);
    }
    if found != m {
        return Err(CnfError::ClauseCount { expected: m, found });
    }
    Cnf::with_vars(n, clauses)
}

/// Writes every clause of the multiset. The variable count is the largest id
/// in the universe.
pub fn write_dimacs(f: &Cnf) -> String {
    let n = f.universe.iter().next_back().map_or(0, |v| v.0);
    let mut s = format!("p cnf {} {}\n", n, f.clauses.len());
    for c in &f.clauses {
        for l in c.lits() {
            s.push_str(&l.to_dimacs().to_string());
            s.push(' ');
        }
        s.push_str("0\n");
    }
    s
}
