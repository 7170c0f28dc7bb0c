//! Greedy elimination of extreme uniform vertices and the linear clique-width
//! expression it yields.
//!
//! Peeling removes, at every stage, the lowest-indexed vertex that is extreme
//! in its part and uniform to every other non-empty part of the residual
//! partition. The expression replays the removals backwards: each vertex is
//! created with the reserved label 0, joined to every part label it is
//! complete to, then relabelled to its own part label `part + 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::cw::term::{CwOp, CwTerm};
use crate::graph::Graph;
use crate::partition::{
    extremes_within, require_monotone, vertex_uniform_to, PartitionError, VertexPartition,
};

/// Label reserved for the vertex being inserted.
pub const SPECIAL_LABEL: usize = 0;

pub fn part_label(part: usize) -> usize {
    part + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremeKind {
    Maximal,
    Minimal,
    /// All members of the part see the same outside neighbourhood.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    pub vertex: usize,
    pub part: usize,
    pub extreme: ExtremeKind,
    /// Parts (own part included) whose residual members, other than `vertex`,
    /// are all adjacent to `vertex`. Empty residual parts are never listed.
    pub complete_to: Vec<usize>,
}

/// Removal order with per-step justification; the construction order is the
/// reverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelCertificate {
    pub steps: Vec<PeelStep>,
}

impl PeelCertificate {
    pub fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelOutcome {
    Complete(PeelCertificate),
    Stuck {
        residual: Vec<usize>,
        partial: PeelCertificate,
    },
}

impl PeelOutcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, PeelOutcome::Complete(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("peeling got stuck on {} residual vertices", residual.len())]
    Stuck { residual: Vec<usize> },
    #[error("part {0} is not a clique")]
    NotClique(usize),
}

struct Stage<'a> {
    g: &'a Graph,
    p: &'a VertexPartition,
    active: VertexSet,
    residual_parts: Vec<VertexSet>,
}

impl Stage<'_> {
    fn eligible(&self) -> Option<PeelStep> {
        let mut best: Option<PeelStep> = None;
        for (i, part) in self.residual_parts.iter().enumerate() {
            let Some(ext) = extremes_within(self.g, part, &self.active) else {
                continue;
            };
            let mut cands: Vec<usize> = ext.maximal.iter().chain(&ext.minimal).copied().collect();
            cands.sort_unstable();
            cands.dedup();
            for v in cands {
                if best.as_ref().is_some_and(|b| b.vertex < v) {
                    break;
                }
                let uniform = self
                    .residual_parts
                    .iter()
                    .enumerate()
                    .all(|(j, other)| j == i || vertex_uniform_to(self.g, v, other));
                if uniform {
                    let extreme = match (ext.maximal.contains(&v), ext.minimal.contains(&v)) {
                        (true, true) => ExtremeKind::Both,
                        (true, false) => ExtremeKind::Maximal,
                        _ => ExtremeKind::Minimal,
                    };
                    best = Some(PeelStep {
                        vertex: v,
                        part: i,
                        extreme,
                        complete_to: self.complete_parts(v),
                    });
                    break;
                }
            }
        }
        best
    }

    fn complete_parts(&self, v: usize) -> Vec<usize> {
        let nbrs = self.g.neighbours(v);
        self.residual_parts
            .iter()
            .enumerate()
            .filter(|(_, part)| {
                let mut rest = (*part).clone();
                rest.remove(v);
                !rest.is_empty() && rest.is_subset(nbrs)
            })
            .map(|(j, _)| j)
            .collect()
    }

    fn remove(&mut self, step: &PeelStep) {
        self.active.remove(step.vertex);
        self.residual_parts[step.part].remove(step.vertex);
    }
}

pub fn peel(g: &Graph, p: &VertexPartition) -> Result<PeelOutcome, PartitionError> {
    require_monotone(g, p)?;
    let mut stage = Stage {
        g,
        p,
        active: g.all_vertices(),
        residual_parts: p.parts().iter().map(|part| part.vertices.clone()).collect(),
    };
    let mut cert = PeelCertificate::default();
    while !stage.active.is_empty() {
        match stage.eligible() {
            Some(step) => {
                stage.remove(&step);
                cert.steps.push(step);
            }
            None => {
                log::debug!(
                    "peel stuck with {} of {} vertices left",
                    stage.active.len(),
                    stage.p.n()
                );
                return Ok(PeelOutcome::Stuck {
                    residual: stage.active.to_vec(),
                    partial: cert,
                });
            }
        }
    }
    Ok(PeelOutcome::Complete(cert))
}

/// Linear expression with `parts + 1` labels built from a peel certificate.
pub fn term_from_certificate(p: &VertexPartition, cert: &PeelCertificate) -> CwTerm {
    let mut t = CwTerm::new(p.len() + 1);
    for (k, step) in cert.steps.iter().rev().enumerate() {
        let own = part_label(step.part);
        if k == 0 {
            t.ops.push(CwOp::Create {
                v: step.vertex,
                label: own,
            });
            continue;
        }
        t.ops.push(CwOp::Create {
            v: step.vertex,
            label: SPECIAL_LABEL,
        });
        t.ops.push(CwOp::Union);
        for &j in &step.complete_to {
            t.ops.push(CwOp::Join {
                a: SPECIAL_LABEL,
                b: part_label(j),
            });
        }
        t.ops.push(CwOp::Relabel {
            from: SPECIAL_LABEL,
            to: own,
        });
    }
    t
}

pub fn build_term(g: &Graph, p: &VertexPartition) -> Result<CwTerm, BuildError> {
    if let Some(i) = p.parts().iter().position(|part| !part.is_clique) {
        return Err(BuildError::NotClique(i));
    }
    match peel(g, p)? {
        PeelOutcome::Complete(cert) => Ok(term_from_certificate(p, &cert)),
        PeelOutcome::Stuck { residual, .. } => Err(BuildError::Stuck { residual }),
    }
}

/// Re-derives every step of a certificate from scratch: each vertex must be
/// extreme in its residual part and uniform to every other residual part.
pub fn check_certificate(g: &Graph, p: &VertexPartition, cert: &PeelCertificate) -> bool {
    let mut active = g.all_vertices();
    let mut parts: Vec<VertexSet> = p.parts().iter().map(|x| x.vertices.clone()).collect();
    for step in &cert.steps {
        let v = step.vertex;
        if !active.contains(v) || p.part_of(v) != step.part {
            return false;
        }
        let Some(ext) = extremes_within(g, &parts[step.part], &active) else {
            return false;
        };
        let ok_kind = match step.extreme {
            ExtremeKind::Maximal => ext.maximal.contains(&v),
            ExtremeKind::Minimal => ext.minimal.contains(&v),
            ExtremeKind::Both => ext.maximal.contains(&v) && ext.minimal.contains(&v),
        };
        let uniform = parts
            .iter()
            .enumerate()
            .all(|(j, s)| j == step.part || vertex_uniform_to(g, v, s));
        if !ok_kind || !uniform {
            return false;
        }
        active.remove(v);
        parts[step.part].remove(v);
    }
    active.is_empty()
}
