//! The 26-part clique partition built around an induced hexagon, and a
//! verifier that re-derives every adjacency fact the partition relies on.
//!
//! Class indices are 0-based in the API and taken modulo 6; names and JSON
//! documents print them 1-based (`X3,1` is `x3[0]`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::partition::{
    crossing_between, first_edge, first_non_edge, first_non_monotone_part, relation_between,
    PartitionDoc, VertexPartition,
};
use crate::pattern::{find_c6, is_in_class, witness_matches, ClassVerdict, PatternId};

pub const PART_COUNT: usize = 26;
pub const X6_PART: usize = 6;
pub const X2_PART: usize = 7;

pub fn x4_part(j: usize, eta: usize) -> usize {
    8 + 2 * (j % 6) + eta
}

pub fn x3_part(j: usize) -> usize {
    20 + j % 6
}

pub fn part_name(i: usize) -> String {
    match i {
        0..=5 => format!("c{}", i + 1),
        X6_PART => "X6".into(),
        X2_PART => "X2".into(),
        8..=19 => format!("X4,{}^{}", (i - 8) / 2 + 1, (i - 8) % 2),
        20..=25 => format!("X3,{}", i - 19),
        _ => panic!("part index {i} out of range"),
    }
}

fn m6(j: usize) -> usize {
    j % 6
}

/// An induced forbidden pattern, in the pattern's vertex layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forbidden {
    pub pattern: PatternId,
    pub vertices: Vec<usize>,
}

impl fmt::Display for Forbidden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?}", self.pattern, self.vertices)
    }
}

/// Runs the class gate on `G[core ∪ extra]` and maps the witness back.
pub fn localized_witness(g: &Graph, core: &[usize], extra: &[usize]) -> Option<Forbidden> {
    let mut seen = VertexSet::new(g.n());
    let seq: Vec<usize> = core
        .iter()
        .chain(extra)
        .copied()
        .filter(|&v| v < g.n() && seen.insert(v))
        .collect();
    let sub = g.induced_by_sequence(&seq).ok()?;
    match is_in_class(&sub.graph) {
        ClassVerdict::Witness { pattern, vertices } => Some(Forbidden {
            pattern,
            vertices: sub.to_original(&vertices),
        }),
        ClassVerdict::InClass => None,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("graph has no induced C6")]
    NoC6,
    #[error("anchor {0:?} does not induce a C6 in the given order")]
    BadAnchor([usize; 6]),
    #[error("vertex {vertex} has {count} neighbours on the anchor")]
    ForbiddenCount {
        vertex: usize,
        count: usize,
        witness: Option<Forbidden>,
    },
    #[error("vertex {vertex} matches no neighbourhood template on the anchor")]
    NoTemplate {
        vertex: usize,
        witness: Option<Forbidden>,
    },
    #[error("X2 vertices {u} and {v} see different antipodal pairs")]
    SplitX2 {
        u: usize,
        v: usize,
        witness: Option<Forbidden>,
    },
    #[error("vertex {x} of X4,{} misses {y} in X3,{} and {z} in X3,{}", j + 1, (j + 5) % 6 + 1, (j + 2) % 6 + 1)]
    X4Split {
        j: usize,
        x: usize,
        y: usize,
        z: usize,
        witness: Option<Forbidden>,
    },
}

impl DecomposeError {
    pub fn witness(&self) -> Option<&Forbidden> {
        match self {
            DecomposeError::NoC6 | DecomposeError::BadAnchor(_) => None,
            DecomposeError::ForbiddenCount { witness, .. }
            | DecomposeError::NoTemplate { witness, .. }
            | DecomposeError::SplitX2 { witness, .. }
            | DecomposeError::X4Split { witness, .. } => witness.as_ref(),
        }
    }
}

/// Vertices outside the anchor sorted by their neighbourhood on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawClasses {
    pub x2: VertexSet,
    /// `j ∈ 0..3` with `X2 = X2,j`; `X2,j` and `X2,j+3` coincide.
    pub x2_index: Option<usize>,
    pub x3: Vec<VertexSet>,
    pub x4: Vec<VertexSet>,
    pub x6: VertexSet,
}

fn run_mask(start: usize, len: usize) -> u8 {
    (0..len).fold(0, |m, k| m | 1 << m6(start + k))
}

fn anchor_mask(g: &Graph, anchor: &[usize; 6], v: usize) -> u8 {
    (0..6).fold(0, |m, i| {
        if g.adjacent(v, anchor[i]) {
            m | 1 << i
        } else {
            m
        }
    })
}

fn anchor_is_c6(g: &Graph, anchor: &[usize; 6]) -> Option<(usize, usize)> {
    for i in 0..6 {
        for k in i + 1..6 {
            let want = k == i + 1 || (i == 0 && k == 5);
            if anchor[i] == anchor[k] || g.adjacent(anchor[i], anchor[k]) != want {
                return Some((anchor[i], anchor[k]));
            }
        }
    }
    None
}

pub fn classify_by_c6(g: &Graph, anchor: [usize; 6]) -> Result<RawClasses, DecomposeError> {
    if anchor.iter().any(|&c| c >= g.n()) || anchor_is_c6(g, &anchor).is_some() {
        return Err(DecomposeError::BadAnchor(anchor));
    }
    let n = g.n();
    let on_anchor = g.vertex_set(anchor);
    let mut classes = RawClasses {
        x2: VertexSet::new(n),
        x2_index: None,
        x3: vec![VertexSet::new(n); 6],
        x4: vec![VertexSet::new(n); 6],
        x6: VertexSet::new(n),
    };
    let mut x2_first: Option<usize> = None;
    for v in (0..n).filter(|&v| !on_anchor.contains(v)) {
        let mask = anchor_mask(g, &anchor, v);
        let count = mask.count_ones() as usize;
        let no_template = || DecomposeError::NoTemplate {
            vertex: v,
            witness: localized_witness(g, &anchor, &[v]),
        };
        match count {
            0 | 1 | 5 => {
                return Err(DecomposeError::ForbiddenCount {
                    vertex: v,
                    count,
                    witness: localized_witness(g, &anchor, &[v]),
                })
            }
            2 => {
                let j = (0..3)
                    .find(|&j| mask == 1 << j | 1 << (j + 3))
                    .ok_or_else(no_template)?;
                match (classes.x2_index, x2_first) {
                    (Some(k), Some(u)) if k != j => {
                        return Err(DecomposeError::SplitX2 {
                            u,
                            v,
                            witness: localized_witness(g, &anchor, &[u, v]),
                        })
                    }
                    _ => {
                        classes.x2_index = Some(j);
                        x2_first.get_or_insert(v);
                    }
                }
                classes.x2.insert(v);
            }
            3 | 4 => {
                let j = (0..6)
                    .find(|&j| mask == run_mask(j, count))
                    .ok_or_else(no_template)?;
                let target = if count == 3 {
                    &mut classes.x3
                } else {
                    &mut classes.x4
                };
                target[j].insert(v);
            }
            6 => {
                classes.x6.insert(v);
            }
            _ => unreachable!("at most six anchor neighbours"),
        }
    }
    Ok(classes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X4Split {
    /// Complete to `X3,j+5`.
    pub zero: VertexSet,
    /// Complete to `X3,j+2`.
    pub one: VertexSet,
}

/// Splits `X4,j`; a vertex complete to both neighbouring X3 classes (or to an
/// empty `X3,j+5`) goes to the zero side.
pub fn split_x4(
    g: &Graph,
    anchor: [usize; 6],
    j: usize,
    x4j: &VertexSet,
    x3: &[VertexSet],
) -> Result<X4Split, DecomposeError> {
    let j = m6(j);
    let left = &x3[m6(j + 5)];
    let right = &x3[m6(j + 2)];
    let mut split = X4Split {
        zero: VertexSet::new(g.n()),
        one: VertexSet::new(g.n()),
    };
    for x in x4j {
        let nx = g.neighbours(x);
        if left.is_subset(nx) {
            split.zero.insert(x);
        } else if right.is_subset(nx) {
            split.one.insert(x);
        } else {
            let y = left.first_not_in(nx).expect("x misses left");
            let z = right.first_not_in(nx).expect("x misses right");
            let path = [y, anchor[j], x, anchor[m6(j + 2)], z, anchor[m6(j + 4)]];
            let witness = if witness_matches(g, PatternId::P6, &path) {
                Some(Forbidden {
                    pattern: PatternId::P6,
                    vertices: path.to_vec(),
                })
            } else {
                localized_witness(g, &anchor, &[x, y, z])
            };
            return Err(DecomposeError::X4Split {
                j,
                x,
                y,
                z,
                witness,
            });
        }
    }
    Ok(split)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigError {
    pub start: usize,
    pub reason: String,
    pub witness: Option<Forbidden>,
}

/// Shape of the X3 classes `start, start+2, start+4` (`start` is 0 or 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Configuration {
    /// `X3,anticomplete` sees nothing of the other two classes.
    Sparse {
        start: usize,
        anticomplete: usize,
    },
    /// `one[k]` are the members of class `start + 2k` adjacent to
    /// `triangle[k + 1]`; `zero[k]` the rest.
    Triangle {
        start: usize,
        triangle: [usize; 3],
        zero: [VertexSet; 3],
        one: [VertexSet; 3],
    },
    Invalid(ConfigError),
}

impl Configuration {
    pub fn start(&self) -> usize {
        match self {
            Configuration::Sparse { start, .. } | Configuration::Triangle { start, .. } => *start,
            Configuration::Invalid(e) => e.start,
        }
    }

    pub fn is_triangle(&self) -> bool {
        matches!(self, Configuration::Triangle { .. })
    }
}

fn triple(start: usize) -> [usize; 3] {
    [m6(start), m6(start + 2), m6(start + 4)]
}

fn first_triangle(g: &Graph, a: &VertexSet, b: &VertexSet, c: &VertexSet) -> Option<[usize; 3]> {
    for x in a {
        let nb = g.neighbours(x).intersection(b);
        for y in &nb {
            if let Some(z) = g
                .neighbours(x)
                .intersection(g.neighbours(y))
                .intersection(c)
                .first()
            {
                return Some([x, y, z]);
            }
        }
    }
    None
}

/// First failing pair of the triangle-configuration relations.
fn triangle_relation_failure(
    g: &Graph,
    sets: &[&VertexSet; 3],
    zero: &[VertexSet; 3],
    one: &[VertexSet; 3],
) -> Option<Vec<usize>> {
    for k in 0..3 {
        if one[k].is_empty() {
            return Some(vec![]);
        }
        for l in (0..3).filter(|&l| l != k) {
            if let Some((u, v)) = first_non_edge(g, &one[k], &one[l]) {
                return Some(vec![u, v]);
            }
            if let Some((u, v)) = first_edge(g, &zero[k], sets[l]) {
                return Some(vec![u, v]);
            }
        }
    }
    None
}

pub fn triangle_configuration(
    g: &Graph,
    anchor: [usize; 6],
    x3: &[VertexSet],
    start: usize,
) -> Result<Configuration, ConfigError> {
    let t = triple(start);
    for &c in &t {
        let others = x3[m6(c + 2)].union(&x3[m6(c + 4)]);
        if first_edge(g, &x3[c], &others).is_none() {
            return Ok(Configuration::Sparse {
                start,
                anticomplete: c,
            });
        }
    }
    let sets = [&x3[t[0]], &x3[t[1]], &x3[t[2]]];
    let Some(tri) = first_triangle(g, sets[0], sets[1], sets[2]) else {
        let all: Vec<usize> = sets.iter().flat_map(|s| s.iter()).collect();
        return Err(ConfigError {
            start,
            reason: "no sparse class and no triangle".into(),
            witness: localized_witness(g, &anchor, &all),
        });
    };
    let one: [VertexSet; 3] =
        std::array::from_fn(|k| sets[k].intersection(g.neighbours(tri[(k + 1) % 3])));
    let zero: [VertexSet; 3] = std::array::from_fn(|k| sets[k].difference(&one[k]));
    if let Some(pair) = triangle_relation_failure(g, &sets, &zero, &one) {
        let mut extra = tri.to_vec();
        extra.extend(&pair);
        return Err(ConfigError {
            start,
            reason: format!("triangle relations fail at {pair:?}"),
            witness: localized_witness(g, &anchor, &extra),
        });
    }
    Ok(Configuration::Triangle {
        start,
        triangle: tri,
        zero,
        one,
    })
}

/// One observation instance checked against a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    /// 1-based class index, when the check is per class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    pub pass: bool,
    /// First counterexample: a vertex pair, a crossing, or a lone vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// Forbidden pattern found around the counterexample and the anchor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Forbidden>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(j) = self.j {
            write!(f, " j={j}")?;
        }
        if let Some(eta) = self.eta {
            write!(f, " eta={eta}")?;
        }
        write!(f, ": {}", if self.pass { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " at {w:?}")?;
        }
        if let Some(fb) = &self.forbidden {
            write!(f, " ({fb})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub anchor: [usize; 6],
    pub classes: RawClasses,
    pub x4_split: Vec<X4Split>,
    /// Triples starting at class 0 and class 1.
    pub configurations: Vec<Configuration>,
    pub partition: VertexPartition,
    pub verdicts: Vec<Verdict>,
}

impl DecompositionReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn to_doc(&self) -> ReportDoc {
        let sorted = |s: &VertexSet| s.to_vec();
        let mut classes = BTreeMap::new();
        classes.insert("X2".to_string(), sorted(&self.classes.x2));
        classes.insert("X6".to_string(), sorted(&self.classes.x6));
        for j in 0..6 {
            classes.insert(format!("X3,{}", j + 1), sorted(&self.classes.x3[j]));
            classes.insert(format!("X4,{}", j + 1), sorted(&self.classes.x4[j]));
            classes.insert(format!("X4,{}^0", j + 1), sorted(&self.x4_split[j].zero));
            classes.insert(format!("X4,{}^1", j + 1), sorted(&self.x4_split[j].one));
        }
        ReportDoc {
            anchor: self.anchor,
            x2_index: self.classes.x2_index.map(|j| j + 1),
            classes,
            configurations: self
                .configurations
                .iter()
                .map(ConfigurationDoc::from)
                .collect(),
            partition: self.partition.to_doc(),
            verdicts: self.verdicts.clone(),
            all_pass: self.all_pass(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConfigurationDoc {
    Sparse {
        triple: [usize; 3],
        anticomplete: usize,
    },
    Triangle {
        triple: [usize; 3],
        triangle: [usize; 3],
        zero: Vec<Vec<usize>>,
        one: Vec<Vec<usize>>,
    },
    Invalid {
        triple: [usize; 3],
        reason: String,
        witness: Option<Forbidden>,
    },
}

impl From<&Configuration> for ConfigurationDoc {
    fn from(c: &Configuration) -> Self {
        let named = triple(c.start()).map(|t| t + 1);
        match c {
            Configuration::Sparse { anticomplete, .. } => ConfigurationDoc::Sparse {
                triple: named,
                anticomplete: anticomplete + 1,
            },
            Configuration::Triangle {
                triangle,
                zero,
                one,
                ..
            } => ConfigurationDoc::Triangle {
                triple: named,
                triangle: *triangle,
                zero: zero.iter().map(VertexSet::to_vec).collect(),
                one: one.iter().map(VertexSet::to_vec).collect(),
            },
            Configuration::Invalid(e) => ConfigurationDoc::Invalid {
                triple: named,
                reason: e.reason.clone(),
                witness: e.witness.clone(),
            },
        }
    }
}

/// JSON form of a [`DecompositionReport`]; class indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub anchor: [usize; 6],
    pub x2_index: Option<usize>,
    pub classes: BTreeMap<String, Vec<usize>>,
    pub configurations: Vec<ConfigurationDoc>,
    pub partition: PartitionDoc,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

/// Decomposes around the lexicographically first induced hexagon. Verdict
/// failures are reported in the result, not as errors.
pub fn build_partition(g: &Graph) -> Result<DecompositionReport, DecomposeError> {
    let anchor = find_c6(g).ok_or(DecomposeError::NoC6)?;
    build_partition_at(g, anchor)
}

pub fn build_partition_at(
    g: &Graph,
    anchor: [usize; 6],
) -> Result<DecompositionReport, DecomposeError> {
    let classes = classify_by_c6(g, anchor)?;
    let x4_split = (0..6)
        .map(|j| split_x4(g, anchor, j, &classes.x4[j], &classes.x3))
        .collect::<Result<Vec<_>, _>>()?;
    let configurations = (0..2)
        .map(|s| {
            triangle_configuration(g, anchor, &classes.x3, s).unwrap_or_else(Configuration::Invalid)
        })
        .collect();
    let mut sets: Vec<(String, VertexSet)> = Vec::with_capacity(PART_COUNT);
    for (i, &c) in anchor.iter().enumerate() {
        sets.push((part_name(i), g.vertex_set([c])));
    }
    sets.push((part_name(X6_PART), classes.x6.clone()));
    sets.push((part_name(X2_PART), classes.x2.clone()));
    for (j, s) in x4_split.iter().enumerate() {
        sets.push((part_name(x4_part(j, 0)), s.zero.clone()));
        sets.push((part_name(x4_part(j, 1)), s.one.clone()));
    }
    for j in 0..6 {
        sets.push((part_name(x3_part(j)), classes.x3[j].clone()));
    }
    let partition = VertexPartition::from_sets(g, sets).expect("classes partition V(G)");
    let mut report = DecompositionReport {
        anchor,
        classes,
        x4_split,
        configurations,
        partition,
        verdicts: Vec::new(),
    };
    report.verdicts = verify_observations(g, &report);
    log::debug!(
        "decomposed n={} anchor={:?}: {} verdicts, {} failing",
        g.n(),
        anchor,
        report.verdicts.len(),
        report.failures().count()
    );
    Ok(report)
}

struct Checker<'a> {
    g: &'a Graph,
    anchor: [usize; 6],
    out: Vec<Verdict>,
}

type Failure = Option<Vec<usize>>;

impl Checker<'_> {
    fn push(&mut self, name: &str, j: Option<usize>, eta: Option<usize>, failure: Failure) {
        let forbidden = failure
            .as_ref()
            .and_then(|w| localized_witness(self.g, &self.anchor, w));
        self.out.push(Verdict {
            name: name.to_string(),
            j: j.map(|j| j + 1),
            eta,
            pass: failure.is_none(),
            witness: failure,
            forbidden,
        });
    }

    fn complete(&self, a: &VertexSet, b: &VertexSet) -> Failure {
        first_non_edge(self.g, a, b).map(|(u, v)| vec![u, v])
    }

    fn anticomplete(&self, a: &VertexSet, b: &VertexSet) -> Failure {
        first_edge(self.g, a, b).map(|(u, v)| vec![u, v])
    }

    fn monotone(&self, a: &VertexSet, b: &VertexSet) -> Failure {
        crossing_between(self.g, a, b).map(|c| c.vertices())
    }

    fn clique(&self, a: &VertexSet) -> Failure {
        a.iter().find_map(|u| {
            let mut rest = a.difference(self.g.neighbours(u));
            rest.remove(u);
            rest.first().map(|v| vec![u, v])
        })
    }
}

fn first_failure<I: IntoIterator<Item = Failure>>(checks: I) -> Failure {
    checks.into_iter().flatten().next()
}

/// Re-checks every structural fact about `r` on `g`. `g` need not be the graph
/// `r` was built from, which is how mutations are caught.
pub fn verify_observations(g: &Graph, r: &DecompositionReport) -> Vec<Verdict> {
    let mut ck = Checker {
        g,
        anchor: r.anchor,
        out: Vec::new(),
    };
    if g.n() != r.partition.n() {
        ck.anchor = [0; 6];
        ck.push("graph-size", None, None, Some(vec![g.n(), r.partition.n()]));
        return ck.out;
    }
    let c = &r.classes;
    let x3 = &c.x3;
    let x4 = &c.x4;
    let sp = &r.x4_split;
    let p = &r.partition;

    ck.push(
        "anchor-c6",
        None,
        None,
        anchor_is_c6(g, &r.anchor).map(|(u, v)| vec![u, v]),
    );

    let mut templates: Vec<(VertexSet, u8)> = vec![(c.x6.clone(), 0b111111)];
    if let Some(j) = c.x2_index {
        templates.push((c.x2.clone(), 1 << j | 1 << (j + 3)));
    }
    for j in 0..6 {
        templates.push((x3[j].clone(), run_mask(j, 3)));
        templates.push((x4[j].clone(), run_mask(j, 4)));
    }
    let off_template = templates.iter().find_map(|(set, mask)| {
        set.iter()
            .find(|&v| anchor_mask(g, &r.anchor, v) != *mask)
            .map(|v| vec![v])
    });
    ck.push("class-template", None, None, off_template);

    ck.push("x6-clique", None, None, ck.clique(&c.x6));
    ck.push("x2-clique", None, None, ck.clique(&c.x2));
    for j in 0..6 {
        ck.push("x3-clique", Some(j), None, ck.clique(&x3[j]));
        ck.push("x4-clique", Some(j), None, ck.clique(&x4[j]));
    }

    ck.push(
        "x6-complete-to-rest",
        None,
        None,
        ck.complete(&c.x6, &c.x6.complement()),
    );

    if let Some(j) = c.x2_index {
        let seen = [
            &x3[m6(j + 2)],
            &x3[m6(j + 5)],
            &x4[j],
            &x4[m6(j + 3)],
            &c.x6,
        ];
        let unseen = (0..6)
            .filter(|&i| i != m6(j + 2) && i != m6(j + 5))
            .map(|i| &x3[i])
            .chain((0..6).filter(|&i| i != j && i != m6(j + 3)).map(|i| &x4[i]));
        let fail = first_failure(
            seen.iter()
                .map(|s| ck.complete(&c.x2, s))
                .chain(unseen.map(|s| ck.anticomplete(&c.x2, s)))
                .collect::<Vec<_>>(),
        );
        ck.push("x2-neighbourhood", Some(j), None, fail);
    }

    for j in 0..6 {
        let fail = first_failure([
            ck.complete(&x4[j], &x4[m6(j + 1)]),
            ck.complete(&x4[j], &x4[m6(j + 3)]),
            ck.complete(&x4[j], &x4[m6(j + 5)]),
            ck.anticomplete(&x4[j], &x4[m6(j + 2)]),
            ck.anticomplete(&x4[j], &x4[m6(j + 4)]),
        ]);
        ck.push("x4-x4-adjacency", Some(j), None, fail);

        let fail = first_failure([
            ck.complete(&x4[j], &x3[j]),
            ck.complete(&x4[j], &x3[m6(j + 1)]),
            ck.anticomplete(&x4[j], &x3[m6(j + 3)]),
            ck.anticomplete(&x4[j], &x3[m6(j + 4)]),
        ]);
        ck.push("x4-x3-adjacency", Some(j), None, fail);

        let covers = sp[j].zero.union(&sp[j].one) == x4[j] && sp[j].zero.is_disjoint(&sp[j].one);
        let fail = if covers {
            first_failure([
                ck.complete(&sp[j].zero, &x3[m6(j + 5)]),
                ck.complete(&sp[j].one, &x3[m6(j + 2)]),
            ])
        } else {
            x4[j].first().map(|v| vec![v])
        };
        ck.push("x4-split", Some(j), None, fail);

        for eta in 0..2 {
            let idx = x4_part(j, eta);
            let part = p.set(idx);
            ck.push(
                "x4-part-monotone",
                Some(j),
                Some(eta),
                ck.monotone(part, &part.complement()),
            );
            let mixed: Vec<usize> = (0..p.len())
                .filter(|&k| k != idx)
                .filter(|&k| relation_between(g, part, p.set(k)).is_ok_and(|rel| !rel.is_uniform()))
                .collect();
            let fail = (mixed.len() > 1).then(|| {
                let other = p.set(mixed[1]);
                let mut w = Vec::new();
                if let Some((u, v)) = first_edge(g, part, other) {
                    w.extend([u, v]);
                }
                if let Some((u, v)) = first_non_edge(g, part, other) {
                    w.extend([u, v]);
                }
                w
            });
            ck.push("x4-part-near-uniform", Some(j), Some(eta), fail);
        }
    }

    for j in 0..6 {
        let fail = first_failure([
            ck.complete(&x3[j], &x3[m6(j + 1)]),
            ck.complete(&x3[j], &x3[m6(j + 5)]),
            ck.anticomplete(&x3[j], &x3[m6(j + 3)]),
        ]);
        ck.push("x3-x3-adjacency", Some(j), None, fail);
        let opposite = x3[m6(j + 2)].union(&x3[m6(j + 4)]);
        ck.push(
            "x3-monotone-to-opposite",
            Some(j),
            None,
            ck.monotone(&x3[j], &opposite),
        );
        ck.push(
            "x3-monotone-to-rest",
            Some(j),
            None,
            ck.monotone(&x3[j], &x3[j].complement()),
        );
    }

    for conf in &r.configurations {
        let start = conf.start();
        let t = triple(start);
        let fail = match conf {
            Configuration::Sparse { anticomplete, .. } => {
                let a = *anticomplete;
                let others = x3[m6(a + 2)].union(&x3[m6(a + 4)]);
                ck.anticomplete(&x3[a], &others)
            }
            Configuration::Triangle {
                triangle,
                zero,
                one,
                ..
            } => {
                let sets = [&x3[t[0]], &x3[t[1]], &x3[t[2]]];
                let parts_ok = (0..3)
                    .all(|k| zero[k].union(&one[k]) == *sets[k] && sets[k].contains(triangle[k]));
                let is_triangle = (0..3).all(|k| g.adjacent(triangle[k], triangle[(k + 1) % 3]));
                if !parts_ok || !is_triangle {
                    Some(triangle.to_vec())
                } else {
                    triangle_relation_failure(g, &sets, zero, one)
                }
            }
            Configuration::Invalid(e) => {
                Some(e.witness.as_ref().map_or(vec![], |w| w.vertices.clone()))
            }
        };
        ck.push("x3-triple-configuration", Some(start), None, fail);
    }

    let fail = match first_non_monotone_part(g, p) {
        Ok(None) => None,
        Ok(Some((_, crossing))) => Some(crossing.vertices()),
        Err(_) => Some(vec![]),
    };
    ck.push("partition-monotone", None, None, fail);
    ck.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::with_extra_vertex;

    #[test]
    fn part_names_follow_fixed_order() {
        let names: Vec<String> = (0..PART_COUNT).map(part_name).collect();
        assert_eq!(
            &names[..8],
            &["c1", "c2", "c3", "c4", "c5", "c6", "X6", "X2"]
        );
        assert_eq!(names[8], "X4,1^0");
        assert_eq!(names[9], "X4,1^1");
        assert_eq!(names[19], "X4,6^1");
        assert_eq!(names[20], "X3,1");
        assert_eq!(names[25], "X3,6");
        assert_eq!(x4_part(6, 1), x4_part(0, 1));
    }

    #[test]
    fn bare_hexagon() {
        let g = Graph::cycle(6);
        let r = build_partition(&g).unwrap();
        assert_eq!(r.anchor, [0, 1, 2, 3, 4, 5]);
        assert_eq!(r.partition.len(), PART_COUNT);
        assert_eq!(r.partition.non_empty_parts(), 6);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r
            .configurations
            .iter()
            .all(|c| matches!(c, Configuration::Sparse { .. })));
    }

    #[test]
    fn universal_vertex_lands_in_x6() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
        let r = build_partition(&g).unwrap();
        assert_eq!(r.classes.x6.to_vec(), vec![6]);
        assert_eq!(r.partition.non_empty_parts(), 7);
        assert!(r.all_pass());
    }

    #[test]
    fn pendant_vertex_gives_independent_set() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0]);
        let err = classify_by_c6(&g, [0, 1, 2, 3, 4, 5]).unwrap_err();
        let DecomposeError::ForbiddenCount {
            vertex,
            count,
            witness,
        } = &err
        else {
            panic!("{err:?}")
        };
        assert_eq!((*vertex, *count), (6, 1));
        let w = witness.as_ref().unwrap();
        assert_eq!(w.pattern, PatternId::FourK1);
        let mut vs = w.vertices.clone();
        vs.sort_unstable();
        assert_eq!(vs, vec![1, 3, 5, 6]);
        assert!(witness_matches(&g, w.pattern, &w.vertices));
    }

    #[test]
    fn five_neighbours_give_c4() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4]);
        let err = classify_by_c6(&g, [0, 1, 2, 3, 4, 5]).unwrap_err();
        assert_eq!(err.witness().unwrap().pattern, PatternId::C4);
    }

    #[test]
    fn x2_on_two_axes_is_rejected() {
        let g = with_extra_vertex(&with_extra_vertex(&Graph::cycle(6), &[0, 3]), &[1, 4]);
        let err = classify_by_c6(&g, [0, 1, 2, 3, 4, 5]).unwrap_err();
        assert!(matches!(err, DecomposeError::SplitX2 { u: 6, v: 7, .. }));
        let w = err.witness().unwrap();
        assert!(witness_matches(&g, w.pattern, &w.vertices));
    }

    #[test]
    fn x2_index_wraps_antipodes() {
        let g = with_extra_vertex(&Graph::cycle(6), &[4, 1]);
        let c = classify_by_c6(&g, [0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(c.x2_index, Some(1));
        assert_eq!(c.x2.to_vec(), vec![6]);
    }

    #[test]
    fn split_prefers_zero_side_when_vacuous() {
        // X4,1 = {6}, no X3 vertices at all.
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3]);
        let c = classify_by_c6(&g, [0, 1, 2, 3, 4, 5]).unwrap();
        let s = split_x4(&g, [0, 1, 2, 3, 4, 5], 0, &c.x4[0], &c.x3).unwrap();
        assert_eq!(s.zero.to_vec(), vec![6]);
        assert!(s.one.is_empty());
    }

    #[test]
    fn split_failure_carries_path() {
        // x ∈ X4,1, y ∈ X3,6, z ∈ X3,3, x adjacent to neither.
        let base = Graph::cycle(6);
        let g = with_extra_vertex(&base, &[0, 1, 2, 3]);
        let g = with_extra_vertex(&g, &[5, 0, 1]);
        let g = with_extra_vertex(&g, &[2, 3, 4]);
        let anchor = [0, 1, 2, 3, 4, 5];
        let c = classify_by_c6(&g, anchor).unwrap();
        assert_eq!(c.x3[5].to_vec(), vec![7]);
        assert_eq!(c.x3[2].to_vec(), vec![8]);
        let err = split_x4(&g, anchor, 0, &c.x4[0], &c.x3).unwrap_err();
        let w = err.witness().unwrap();
        assert_eq!(w.pattern, PatternId::P6);
        assert_eq!(w.vertices, vec![7, 0, 6, 2, 8, 4]);
    }

    #[test]
    fn singleton_triangle() {
        // X3,1 = {6}, X3,3 = {7}, X3,5 = {8}, pairwise adjacent.
        let mut g = Graph::cycle(6);
        for j in [0usize, 2, 4] {
            g = with_extra_vertex(&g, &[j, (j + 1) % 6, (j + 2) % 6]);
        }
        let g = g
            .with_edge_toggled(6, 7)
            .with_edge_toggled(7, 8)
            .with_edge_toggled(6, 8);
        let anchor = [0, 1, 2, 3, 4, 5];
        let c = classify_by_c6(&g, anchor).unwrap();
        let conf = triangle_configuration(&g, anchor, &c.x3, 0).unwrap();
        let Configuration::Triangle {
            triangle,
            zero,
            one,
            ..
        } = conf
        else {
            panic!("{conf:?}")
        };
        assert_eq!(triangle, [6, 7, 8]);
        assert!(zero.iter().all(VertexSet::is_empty));
        assert_eq!(one.iter().map(VertexSet::len).sum::<usize>(), 3);
        let r = build_partition_at(&g, anchor).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn deleting_an_x6_edge_fails_a_verdict() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
        let r = build_partition(&g).unwrap();
        let h = g.with_edge_toggled(6, 0);
        let v = verify_observations(&h, &r);
        let failed: Vec<&str> = v
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.name.as_str())
            .collect();
        assert!(failed.contains(&"x6-complete-to-rest"), "{failed:?}");
        let fb = v
            .iter()
            .find(|v| v.name == "x6-complete-to-rest")
            .and_then(|v| v.forbidden.clone())
            .unwrap();
        assert!(witness_matches(&h, fb.pattern, &fb.vertices));
    }

    #[test]
    fn report_json_shape() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
        let doc = build_partition(&g).unwrap().to_doc();
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["anchor"], serde_json::json!([0, 1, 2, 3, 4, 5]));
        assert_eq!(v["classes"]["X6"], serde_json::json!([6]));
        assert_eq!(v["configurations"][0]["kind"], "sparse");
        assert_eq!(
            v["configurations"][1]["triple"],
            serde_json::json!([2, 4, 6])
        );
        assert_eq!(v["partition"]["parts"].as_array().unwrap().len(), 26);
        let first = &v["verdicts"][0];
        assert_eq!(first["name"], "anchor-c6");
        assert_eq!(first["pass"], true);
        assert!(first.get("witness").is_none());
        let back: ReportDoc = serde_json::from_value(v).unwrap();
        assert_eq!(back, doc);
    }
}
