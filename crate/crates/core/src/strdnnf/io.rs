//! NNF text format.
//!
//! ```text
//! c vtree <path>
//! nnf <nodes> <edges> <vars>
//! C 0|1 [λ]
//! L <signed-lit> [λ]
//! A <left> <right> <λ>
//! O <left> <right> <λ>
//! ```
//! Node ids are line positions; the last node is the root. The optional `λ`
//! on `C`/`L` lines is written only when it differs from the default (the
//! vtree root for constants, the literal's leaf for literals).

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Node, NodeId, StrDnnf, StrDnnfError};
use crate::cnf::Lit;
use crate::vtree::Vtree;

pub fn write_nnf(s: &StrDnnf, vtree_path: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(p) = vtree_path {
        let _ = writeln!(out, "c vtree {p}");
    }
    let vt = s.vtree();
    let _ = writeln!(out, "nnf {} {} {}", s.node_count(), s.size(), vt.num_vars());
    for (i, n) in s.nodes().iter().enumerate() {
        let lam = s.lambda(i as NodeId);
        match *n {
            Node::False | Node::True => {
                let c = (*n == Node::True) as u8;
                if lam == vt.root() {
                    let _ = writeln!(out, "C {c}");
                } else {
                    let _ = writeln!(out, "C {c} {lam}");
                }
            }
            Node::Lit(l) => {
                if Some(lam) == vt.leaf(l.var()) {
                    let _ = writeln!(out, "L {l}");
                } else {
                    let _ = writeln!(out, "L {l} {lam}");
                }
            }
            Node::And(a, b) => {
                let _ = writeln!(out, "A {a} {b} {lam}");
            }
            Node::Or(a, b) => {
                let _ = writeln!(out, "O {a} {b} {lam}");
            }
        }
    }
    out
}

/// The path in a `c vtree <path>` comment, if any.
pub fn nnf_vtree_path(text: &str) -> Option<String> {
    text.lines()
        .map(str::trim)
        .find_map(|l| l.strip_prefix("c vtree "))
        .map(|p| p.trim().to_string())
}

/// Reads a circuit over `vtree`. The DAG is taken as written; run
/// `validate` to check structuredness.
pub fn parse_nnf(text: &str, vtree: &Arc<Vtree>) -> Result<StrDnnf, StrDnnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut nodes = Vec::new();
    let mut lambda = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let err = |msg: &str| StrDnnfError::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let parts: Vec<&str> = t.split_whitespace().collect();
        let num = |i: usize| -> Result<usize, StrDnnfError> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| err("expected a number"))
        };
        if parts[0] == "nnf" {
            if header.is_some() || parts.len() != 4 {
                return Err(err("expected a single `nnf <nodes> <edges> <vars>`"));
            }
            if num(3)? != vtree.num_vars() {
                return Err(err("variable count differs from the vtree"));
            }
            header = Some((num(1)?, num(2)?));
            continue;
        }
        if header.is_none() {
            return Err(err("node before header"));
        }
        let id = nodes.len();
        let check_lam = |lam: usize| {
            if lam < vtree.len() {
                Ok(lam)
            } else {
                Err(err("λ is not a vtree node"))
            }
        };
        let child = |i: usize| -> Result<NodeId, StrDnnfError> {
            let c = num(i)?;
            if c < id {
                Ok(c as NodeId)
            } else {
                Err(err("child must precede its parent"))
            }
        };
        let (node, lam) = match parts[0] {
            "C" => {
                let n = match parts.get(1) {
                    Some(&"0") => Node::False,
                    Some(&"1") => Node::True,
                    _ => return Err(err("expected `C 0` or `C 1`")),
                };
                let lam = if parts.len() > 2 { check_lam(num(2)?)? } else { vtree.root() };
                (n, lam)
            }
            "L" => {
                let x: i64 = parts
                    .get(1)
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| err("expected a literal"))?;
                let l = Lit::from_dimacs(x).ok_or_else(|| err("literal 0"))?;
                let leaf = vtree.leaf(l.var()).ok_or(StrDnnfError::VarNotInVtree(l.var()))?;
                let lam = if parts.len() > 2 { check_lam(num(2)?)? } else { leaf };
                (Node::Lit(l), lam)
            }
            "A" | "O" => {
                if parts.len() != 4 {
                    return Err(err("expected `<kind> <left> <right> <λ>`"));
                }
                let (a, b) = (child(1)?, child(2)?);
                let lam = check_lam(num(3)?)?;
                let n = if parts[0] == "A" { Node::And(a, b) } else { Node::Or(a, b) };
                (n, lam)
            }
            _ => return Err(err("unknown node kind")),
        };
        nodes.push(node);
        lambda.push(lam as u32);
    }
    let (n, e) = header.ok_or(StrDnnfError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if nodes.is_empty() || nodes.len() != n {
        return Err(StrDnnfError::Parse {
            line: 0,
            msg: format!("header declares {n} nodes, found {}", nodes.len()),
        });
    }
    let s = StrDnnf::from_parts(vtree.clone(), nodes, lambda);
    if s.size() != e {
        return Err(StrDnnfError::Parse {
            line: 0,
            msg: format!("header declares {e} edges, found {}", s.size()),
        });
    }
    Ok(s)
}
