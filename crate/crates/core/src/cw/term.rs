//! Clique-width expressions in postfix (stack) form, their evaluation and
//! verification against a target graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum CwOp {
    /// Push a one-vertex graph whose vertex `v` carries `label`.
    Create { v: usize, label: usize },
    /// Pop two graphs, push their disjoint union.
    Union,
    /// Add every edge between label `a` and label `b` on the top graph.
    Join { a: usize, b: usize },
    /// Move every vertex of label `from` to label `to` on the top graph.
    Relabel { from: usize, to: usize },
}

/// JSON: `{"budget": k, "ops": [{"op": "create", "v": 0, "label": 1}, …]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwTerm {
    pub budget: usize,
    pub ops: Vec<CwOp>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("op {index}: stack underflow")]
    StackUnderflow { index: usize },
    #[error("op {index}: join needs two distinct labels, got {label} twice")]
    JoinSameLabel { index: usize, label: usize },
    #[error("op {index}: label {label} is outside the budget of {budget}")]
    LabelOutOfBudget {
        index: usize,
        label: usize,
        budget: usize,
    },
    #[error("op {index}: vertex {v} created twice")]
    DuplicateVertex { index: usize, v: usize },
    #[error("evaluation left {0} graphs on the stack")]
    UnbalancedStack(usize),
}

/// A graph under construction: vertex → label, plus edges `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelledGraph {
    pub labels: BTreeMap<usize, usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl LabelledGraph {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.keys().copied()
    }

    fn with_label(&self, l: usize) -> Vec<usize> {
        self.labels
            .iter()
            .filter(|(_, &x)| x == l)
            .map(|(&v, _)| v)
            .collect()
    }

    fn join(&mut self, a: usize, b: usize) {
        let xs = self.with_label(a);
        let ys = self.with_label(b);
        for &x in &xs {
            for &y in &ys {
                self.edges.insert((x.min(y), x.max(y)));
            }
        }
    }

    fn relabel(&mut self, from: usize, to: usize) {
        for l in self.labels.values_mut() {
            if *l == from {
                *l = to;
            }
        }
    }

    fn absorb(&mut self, mut other: LabelledGraph) {
        if other.labels.len() > self.labels.len() {
            std::mem::swap(self, &mut other);
        }
        self.labels.extend(other.labels);
        self.edges.extend(other.edges);
    }
}

impl CwTerm {
    pub fn new(budget: usize) -> Self {
        Self {
            budget,
            ops: Vec::new(),
        }
    }

    /// Distinct labels mentioned anywhere in the term.
    pub fn labels_used(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for op in &self.ops {
            match *op {
                CwOp::Create { label, .. } => {
                    out.insert(label);
                }
                CwOp::Join { a, b } => {
                    out.insert(a);
                    out.insert(b);
                }
                CwOp::Relabel { from, to } => {
                    out.insert(from);
                    out.insert(to);
                }
                CwOp::Union => {}
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.labels_used().len()
    }
}

/// Evaluates `t`, calling `observe(index, top)` after every op.
pub fn eval_term_traced<F>(t: &CwTerm, mut observe: F) -> Result<LabelledGraph, TermError>
where
    F: FnMut(usize, &LabelledGraph),
{
    let mut stack: Vec<LabelledGraph> = Vec::new();
    let mut created = BTreeSet::new();
    let check = |index: usize, label: usize| {
        if label >= t.budget {
            Err(TermError::LabelOutOfBudget {
                index,
                label,
                budget: t.budget,
            })
        } else {
            Ok(())
        }
    };
    for (index, op) in t.ops.iter().enumerate() {
        match *op {
            CwOp::Create { v, label } => {
                check(index, label)?;
                if !created.insert(v) {
                    return Err(TermError::DuplicateVertex { index, v });
                }
                let mut g = LabelledGraph::default();
                g.labels.insert(v, label);
                stack.push(g);
            }
            CwOp::Union => {
                let (Some(b), Some(mut a)) = (stack.pop(), stack.pop()) else {
                    return Err(TermError::StackUnderflow { index });
                };
                a.absorb(b);
                stack.push(a);
            }
            CwOp::Join { a, b } => {
                check(index, a)?;
                check(index, b)?;
                if a == b {
                    return Err(TermError::JoinSameLabel { index, label: a });
                }
                stack
                    .last_mut()
                    .ok_or(TermError::StackUnderflow { index })?
                    .join(a, b);
            }
            CwOp::Relabel { from, to } => {
                check(index, from)?;
                check(index, to)?;
                stack
                    .last_mut()
                    .ok_or(TermError::StackUnderflow { index })?
                    .relabel(from, to);
            }
        }
        observe(index, stack.last().expect("every op leaves a graph"));
    }
    match stack.len() {
        0 => Ok(LabelledGraph::default()),
        1 => Ok(stack.pop().expect("one graph")),
        k => Err(TermError::UnbalancedStack(k)),
    }
}

pub fn eval_term(t: &CwTerm) -> Result<LabelledGraph, TermError> {
    eval_term_traced(t, |_, _| {})
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum TermCheck {
    Ok {
        width: usize,
    },
    Mismatch {
        /// Vertices of the graph the term never creates.
        missing_vertices: Vec<usize>,
        /// Vertices the term creates that the graph does not have.
        extra_vertices: Vec<usize>,
        /// Graph edges the term does not produce.
        missing_edges: Vec<(usize, usize)>,
        /// Edges the term produces that the graph does not have.
        extra_edges: Vec<(usize, usize)>,
    },
}

impl TermCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, TermCheck::Ok { .. })
    }
}

/// Compares the evaluated term with `g` on vertex and edge sets.
pub fn verify_term(t: &CwTerm, g: &Graph) -> Result<TermCheck, TermError> {
    let built = eval_term(t)?;
    let missing_vertices: Vec<usize> = (0..g.n())
        .filter(|v| !built.labels.contains_key(v))
        .collect();
    let extra_vertices: Vec<usize> = built.vertices().filter(|&v| v >= g.n()).collect();
    let want: BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
    let missing_edges: Vec<_> = want.difference(&built.edges).copied().collect();
    let extra_edges: Vec<_> = built.edges.difference(&want).copied().collect();
    if missing_vertices.is_empty()
        && extra_vertices.is_empty()
        && missing_edges.is_empty()
        && extra_edges.is_empty()
    {
        Ok(TermCheck::Ok { width: t.width() })
    } else {
        Ok(TermCheck::Mismatch {
            missing_vertices,
            extra_vertices,
            missing_edges,
            extra_edges,
        })
    }
}
