//! Trace files.
//!
//! ```text
//! trace <steps> <cnf-path>
//! S <i> C <clause-idx> <nnf-path>
//! S <i> C - <nnf-path>
//! S <i> A <j> <k> <nnf-path>
//! S <i> R <j> <vtree-id> <nnf-path>
//! ```
//! `C -` marks a clause satisfied by conditioning. Each NNF file names its
//! vtree in a `c vtree` line; vtree ids number those files in order of first
//! appearance. Relative paths are resolved against the trace file's
//! directory. A `c aborted` line marks a partial trace.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use super::{CompilationTrace, StepKind, TraceStep};
use crate::cnf::{parse_dimacs, write_dimacs, CnfError};
use crate::strdnnf::{nnf_vtree_path, parse_nnf, write_nnf, StrDnnfError};
use crate::vtree::{Vtree, VtreeError};

#[derive(Debug, Error)]
pub enum TraceFileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Cnf { path: PathBuf, source: CnfError },
    #[error("{path}: {source}")]
    Nnf { path: PathBuf, source: StrDnnfError },
    #[error("{path}: {source}")]
    Vtree { path: PathBuf, source: VtreeError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceHeader {
    pub cnf: String,
    pub steps: Vec<(StepKind, String)>,
    pub aborted: bool,
}

fn read(path: &Path) -> Result<String, TraceFileError> {
    fs::read_to_string(path).map_err(|source| TraceFileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), TraceFileError> {
    fs::write(path, text).map_err(|source| TraceFileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `trace.txt`, `input.cnf`, one `step<i>.nnf` per step and one
/// `vtree<id>.vtree` per vtree into `dir`. Returns the trace file path.
pub fn save_trace(t: &CompilationTrace, dir: &Path) -> Result<PathBuf, TraceFileError> {
    fs::create_dir_all(dir).map_err(|source| TraceFileError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write(&dir.join("input.cnf"), &write_dimacs(&t.input))?;
    // renumber vtrees by first use so that ids survive a reload
    let mut ids: HashMap<usize, usize> = HashMap::new();
    for s in &t.steps {
        let next = ids.len();
        ids.entry(s.vtree).or_insert(next);
    }
    for (&old, &new) in &ids {
        write(&dir.join(format!("vtree{new}.vtree")), &t.vtrees[old].to_text())?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "trace {} input.cnf", t.steps.len());
    if t.aborted {
        let _ = writeln!(out, "c aborted");
    }
    for (i, s) in t.steps.iter().enumerate() {
        let nnf = format!("step{i}.nnf");
        let vt = format!("vtree{}.vtree", ids[&s.vtree]);
        write(&dir.join(&nnf), &write_nnf(&s.circuit, Some(&vt)))?;
        let _ = match s.kind {
            StepKind::Clause(c) => writeln!(out, "S {i} C {c} {nnf}"),
            StepKind::Satisfied => writeln!(out, "S {i} C - {nnf}"),
            StepKind::Apply(j, k) => writeln!(out, "S {i} A {j} {k} {nnf}"),
            StepKind::Restructure(j, id) => writeln!(out, "S {i} R {j} {} {nnf}", ids.get(&id).copied().unwrap_or(id)),
        };
    }
    let path = dir.join("trace.txt");
    write(&path, &out)?;
    Ok(path)
}

pub fn parse_trace_header(text: &str) -> Result<TraceHeader, TraceFileError> {
    let err = |line: usize, msg: &str| TraceFileError::Parse {
        line,
        msg: msg.to_string(),
    };
    let num = |line: usize, s: &str| s.parse::<usize>().map_err(|_| err(line, &format!("bad number `{s}`")));
    let mut header: Option<(usize, String)> = None;
    let mut steps = Vec::new();
    let mut aborted = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let tok: Vec<&str> = raw.split_whitespace().collect();
        match tok.as_slice() {
            [] => {}
            ["c", "aborted"] => aborted = true,
            ["c", ..] => {}
            ["trace", n, path] => {
                if header.is_some() {
                    return Err(err(line, "second header"));
                }
                header = Some((num(line, n)?, path.to_string()));
            }
            ["S", i, rest @ ..] => {
                if header.is_none() {
                    return Err(err(line, "step before the header"));
                }
                if num(line, i)? != steps.len() {
                    return Err(err(line, "steps must be numbered 0, 1, 2, ..."));
                }
                let (kind, path) = match rest {
                    ["C", "-", p] => (StepKind::Satisfied, p),
                    ["C", c, p] => (StepKind::Clause(num(line, c)?), p),
                    ["A", j, k, p] => (StepKind::Apply(num(line, j)?, num(line, k)?), p),
                    ["R", j, id, p] => (StepKind::Restructure(num(line, j)?, num(line, id)?), p),
                    _ => return Err(err(line, "malformed step")),
                };
                steps.push((kind, path.to_string()));
            }
            _ => return Err(err(line, "unrecognized line")),
        }
    }
    let (n, cnf) = header.ok_or_else(|| err(0, "missing `trace` header"))?;
    if n != steps.len() {
        return Err(err(0, &format!("header announces {n} steps, found {}", steps.len())));
    }
    Ok(TraceHeader { cnf, steps, aborted })
}

pub fn load_trace(path: &Path) -> Result<CompilationTrace, TraceFileError> {
    let base = path.parent().unwrap_or(Path::new("."));
    let h = parse_trace_header(&read(path)?)?;
    let cnf_path = base.join(&h.cnf);
    let input = parse_dimacs(&read(&cnf_path)?).map_err(|source| TraceFileError::Cnf { path: cnf_path, source })?;
    let mut vtrees: Vec<Arc<Vtree>> = Vec::new();
    let mut by_path: HashMap<PathBuf, usize> = HashMap::new();
    let mut steps: Vec<TraceStep> = Vec::with_capacity(h.steps.len());
    for (i, (kind, p)) in h.steps.iter().enumerate() {
        let nnf_path = base.join(p);
        let text = read(&nnf_path)?;
        let vp = nnf_vtree_path(&text).ok_or_else(|| TraceFileError::Parse {
            line: i + 2,
            msg: format!("{} names no vtree", nnf_path.display()),
        })?;
        let vp = base.join(vp);
        let id = match by_path.get(&vp) {
            Some(&id) => id,
            None => {
                let vt = Vtree::parse(&read(&vp)?).map_err(|source| TraceFileError::Vtree {
                    path: vp.clone(),
                    source,
                })?;
                vtrees.push(Arc::new(vt));
                by_path.insert(vp, vtrees.len() - 1);
                vtrees.len() - 1
            }
        };
        let circuit = parse_nnf(&text, &vtrees[id]).map_err(|source| TraceFileError::Nnf {
            path: nnf_path.clone(),
            source,
        })?;
        let bad_parent = |j: usize| TraceFileError::Parse {
            line: i + 2,
            msg: format!("parent {j} does not precede step {i}"),
        };
        let support: BTreeSet<usize> = match *kind {
            StepKind::Clause(c) => BTreeSet::from([c]),
            StepKind::Satisfied => BTreeSet::new(),
            StepKind::Apply(j, k) => {
                let (a, b) = (steps.get(j).ok_or_else(|| bad_parent(j))?, steps.get(k).ok_or_else(|| bad_parent(k))?);
                a.support.union(&b.support).copied().collect()
            }
            StepKind::Restructure(j, vid) => {
                if vid != id {
                    return Err(TraceFileError::Parse {
                        line: i + 2,
                        msg: format!("vtree id {vid} does not match the step's vtree file (id {id})"),
                    });
                }
                steps.get(j).ok_or_else(|| bad_parent(j))?.support.clone()
            }
        };
        steps.push(TraceStep {
            kind: *kind,
            size: circuit.size(),
            circuit,
            vtree: id,
            support,
        });
    }
    Ok(CompilationTrace {
        input,
        steps,
        vtrees,
        aborted: h.aborted,
        verified: None,
    })
}
