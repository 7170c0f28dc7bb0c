//! Instance generators: structured in-class graphs around a hexagon,
//! three-clique rings, and seeded random graphs.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64`, so every output is
//! fixed by its seed across platforms and releases of this crate.
//!
//! Structured instances place the hexagon on vertices `0..6` and then the
//! parts in partition order. Every pair of classes the structure leaves free
//! is filled with a staircase: within each part, a higher index never has
//! fewer neighbours in any other part, which keeps every part monotone to the
//! rest by construction.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::{part_name, x3_part, x4_part, PART_COUNT, X2_PART, X6_PART};
use crate::graph::{Graph, GraphBuilder};
use crate::partition::{box_graph, BoxGraph, PartitionError, VertexPartition};
use crate::pattern::{is_in_class, ClassVerdict};

/// Largest instance the presets aim for.
pub const PRESET_MAX_N: usize = 60;
pub const DEFAULT_RETRIES: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("no in-class sample after {tries} attempts (last rejection: {last:?})")]
    RetriesExhausted { tries: usize, last: ClassVerdict },
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("profile {index} must have length {m}, values at most {m}, and be non-increasing")]
    BadProfile { index: usize, m: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// How the X3 classes `start, start+2, start+4` see each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleShape {
    /// One class sees nothing of the other two; the remaining pair gets a
    /// random staircase.
    Sparse,
    /// A non-empty top segment of each class forms a complete tripartite core;
    /// the rest of each class sees nothing of the other two. Falls back to
    /// sparse when a class is empty.
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub seed: u64,
    #[serde(default)]
    pub x2: usize,
    /// `j ∈ 0..3`: X2 vertices see `c_j` and `c_{j+3}`.
    #[serde(default)]
    pub x2_index: usize,
    #[serde(default)]
    pub x3: [usize; 6],
    #[serde(default)]
    pub x4: [usize; 6],
    #[serde(default)]
    pub x6: usize,
    /// Probability that an X4 vertex goes to the side complete to `X3,j+2`.
    #[serde(default = "half")]
    pub x4_one_share: f64,
    /// Ask for both sides of every X4 split to be non-empty when possible.
    #[serde(default)]
    pub force_split: bool,
    #[serde(default = "sparse_pair")]
    pub shapes: [TripleShape; 2],
    #[serde(default = "default_retries")]
    pub max_retries: usize,
}

fn half() -> f64 {
    0.5
}

fn sparse_pair() -> [TripleShape; 2] {
    [TripleShape::Sparse; 2]
}

fn default_retries() -> usize {
    DEFAULT_RETRIES
}

impl InstanceParams {
    pub fn empty(seed: u64) -> Self {
        InstanceParams {
            seed,
            x2: 0,
            x2_index: 0,
            x3: [0; 6],
            x4: [0; 6],
            x6: 0,
            x4_one_share: 0.5,
            force_split: false,
            shapes: sparse_pair(),
            max_retries: DEFAULT_RETRIES,
        }
    }

    pub fn n(&self) -> usize {
        6 + self.x2 + self.x6 + self.x3.iter().sum::<usize>() + self.x4.iter().sum::<usize>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Empty,
    Sparse,
    TriangleConfig,
    X4Split,
    X2X6,
    Mixed,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Empty,
        Preset::Sparse,
        Preset::TriangleConfig,
        Preset::X4Split,
        Preset::X2X6,
        Preset::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Empty => "empty",
            Preset::Sparse => "sparse",
            Preset::TriangleConfig => "triangle-config",
            Preset::X4Split => "x4-split",
            Preset::X2X6 => "x2-x6",
            Preset::Mixed => "mixed",
        }
    }

    /// Class sizes drawn from the seed; the total stays within
    /// [`PRESET_MAX_N`].
    pub fn params(self, seed: u64) -> InstanceParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
        let mut p = InstanceParams::empty(seed);
        let sizes = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> [usize; 6] {
            std::array::from_fn(|_| rng.gen_range(lo..=hi))
        };
        // Offsets of the non-empty X4 classes; larger supports, such as
        // {j, j+2, j+5} or any four classes, force a C4 or P6 through the hexagon.
        const SUPPORTS: [&[usize]; 5] = [&[0], &[0, 1], &[0, 1, 2], &[0, 3], &[0, 2]];
        let x4 = |rng: &mut ChaCha8Rng, supports: &[&[usize]], lo: usize, hi: usize| {
            let shape = supports[rng.gen_range(0..supports.len())];
            let off = rng.gen_range(0..6);
            let mut out = [0usize; 6];
            for &k in shape {
                out[(k + off) % 6] = rng.gen_range(lo..=hi);
            }
            out
        };
        let one_triangle = |seed: u64| {
            let mut shapes = sparse_pair();
            shapes[(seed % 2) as usize] = TripleShape::Triangle;
            shapes
        };
        match self {
            Preset::Empty => {}
            Preset::Sparse => {
                p.x3 = sizes(&mut rng, 1, 7);
                p.x4 = x4(&mut rng, &SUPPORTS, 1, 5);
            }
            Preset::TriangleConfig => {
                p.x3 = sizes(&mut rng, 1, 8);
                p.shapes = one_triangle(seed);
            }
            Preset::X4Split => {
                p.x3 = sizes(&mut rng, 1, 5);
                p.x4 = x4(&mut rng, &SUPPORTS[1..3], 2, 7);
                p.force_split = true;
            }
            Preset::X2X6 => {
                p.x3 = sizes(&mut rng, 0, 5);
                p.x2 = 1 + (seed as usize % 4);
                p.x2_index = seed as usize % 3;
                p.x6 = 1 + (seed as usize / 4 % 3);
                let j = p.x2_index;
                p.x4[j] = rng.gen_range(0..=2);
                p.x4[j + 3] = rng.gen_range(0..=2);
            }
            Preset::Mixed => {
                p.x3 = sizes(&mut rng, 0, 7);
                p.x6 = seed as usize / 9 % 3;
                match seed % 3 {
                    0 => {
                        p.x2 = 1 + seed as usize / 3 % 2;
                        p.x2_index = seed as usize / 6 % 3;
                        p.x4[p.x2_index + 3] = rng.gen_range(1..=4);
                    }
                    1 => p.shapes = one_triangle(seed / 3),
                    _ => p.x4 = x4(&mut rng, &SUPPORTS, 0, 4),
                }
            }
        }
        let mut k = 0;
        while p.n() > PRESET_MAX_N {
            let j = k % 6;
            if k % 2 == 0 && p.x4[j] > 0 {
                p.x4[j] -= 1;
            } else if p.x3[j] > 1 {
                p.x3[j] -= 1;
            }
            k += 1;
        }
        p
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GenError::UnknownPreset(s.to_string()))
    }
}

/// A staircase between two parts: `profile[i]` is how many of the
/// highest-indexed members of `to` the `i`-th member of `from` sees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub from: String,
    pub to: String,
    pub profile: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    /// The 26 parts the construction intended, in partition order.
    pub intended: VertexPartition,
    pub staircases: Vec<Staircase>,
    pub attempts: usize,
}

struct Layout {
    parts: Vec<Vec<usize>>,
    n: usize,
}

impl Layout {
    fn new(sizes: &[usize; PART_COUNT]) -> Self {
        let mut next = 0;
        let parts = sizes
            .iter()
            .map(|&s| {
                let r: Vec<usize> = (next..next + s).collect();
                next += s;
                r
            })
            .collect();
        Layout { parts, n: next }
    }
}

fn non_decreasing(rng: &mut ChaCha8Rng, len: usize, lo: usize, hi: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).map(|_| rng.gen_range(lo..=hi)).collect();
    v.sort_unstable();
    v
}

fn sample(p: &InstanceParams, rng: &mut ChaCha8Rng) -> (Graph, Layout, Vec<Staircase>) {
    // A non-empty X4,j+2 or X4,j+3 forces X4,j to be complete to X3,j+5; a
    // non-empty X4,j+3 or X4,j+4 forces it to be complete to X3,j+2.
    // An X2 vertex on axis j2 makes X4,j2 and X4,j2+3 complete to both
    // dashed neighbours and rules out every edge inside the X3 triples.
    let present = |j: usize| p.x4[j % 6] > 0;
    let has_x2 = p.x2 > 0;
    let on_axis = |j: usize| has_x2 && (j + 6 - p.x2_index % 3).is_multiple_of(3);
    let zero_only = |j: usize| present(j + 2) || present(j + 3) || on_axis(j);
    let full_right = |j: usize| present(j + 3) || present(j + 4) || on_axis(j);
    let mut sizes = [0usize; PART_COUNT];
    sizes[..6].fill(1);
    sizes[X6_PART] = p.x6;
    sizes[X2_PART] = p.x2;
    for j in 0..6 {
        sizes[x3_part(j)] = p.x3[j];
        let left_empty = p.x3[(j + 5) % 6] == 0;
        let one = if left_empty || zero_only(j) {
            0
        } else if p.force_split && p.x4[j] >= 2 {
            rng.gen_range(1..p.x4[j])
        } else {
            (0..p.x4[j])
                .filter(|_| rng.gen_bool(p.x4_one_share))
                .count()
        };
        sizes[x4_part(j, 0)] = p.x4[j] - one;
        sizes[x4_part(j, 1)] = one;
    }
    let lay = Layout::new(&sizes);
    let mut b = GraphBuilder::new(lay.n);
    let part = |i: usize| lay.parts[i].as_slice();
    let x3 = |j: usize| part(x3_part(j % 6));
    let x4 = |j: usize| -> Vec<usize> {
        let mut v = part(x4_part(j % 6, 0)).to_vec();
        v.extend(part(x4_part(j % 6, 1)));
        v
    };

    for i in 0..6 {
        b.add_edge(i, (i + 1) % 6);
    }
    for i in 6..PART_COUNT {
        b.add_clique(part(i));
    }
    let anchor = |k: usize| vec![k % 6];
    let all: Vec<usize> = (0..lay.n).collect();
    let x6: Vec<usize> = part(X6_PART).to_vec();
    for &v in &x6 {
        for &u in &all {
            if u != v {
                b.add_edge(u, v);
            }
        }
    }
    let j2 = p.x2_index % 3;
    b.add_complete(part(X2_PART), &[j2, j2 + 3]);
    b.add_complete(part(X2_PART), x3(j2 + 2));
    b.add_complete(part(X2_PART), x3(j2 + 5));
    b.add_complete(part(X2_PART), &x4(j2));
    b.add_complete(part(X2_PART), &x4(j2 + 3));
    for j in 0..6 {
        for k in 0..3 {
            b.add_complete(x3(j), &anchor(j + k));
        }
        b.add_clique(&x4(j));
        for k in 0..4 {
            b.add_complete(&x4(j), &anchor(j + k));
        }
        b.add_complete(&x4(j), &x4(j + 1));
        b.add_complete(&x4(j), &x4(j + 3));
        b.add_complete(&x4(j), x3(j));
        b.add_complete(&x4(j), x3(j + 1));
        b.add_complete(x3(j), x3(j + 1));
        b.add_complete(part(x4_part(j, 0)), x3(j + 5));
        b.add_complete(part(x4_part(j, 1)), x3(j + 2));
    }

    let mut stairs = Vec::new();
    let mut staircase = |b: &mut GraphBuilder, from: usize, to: usize, profile: Vec<usize>| {
        let (a, c) = (part(from), part(to));
        for (i, &t) in profile.iter().enumerate() {
            b.add_complete(&[a[i]], &c[c.len() - t..]);
        }
        stairs.push(Staircase {
            from: part_name(from),
            to: part_name(to),
            profile,
        });
    };

    // Lower bounds on how much of X3,j+2 (right) and X3,j+5 (left) each side
    // of X4,j sees.
    let mut right_lo: [usize; 6] = std::array::from_fn(|j| {
        if full_right(j) {
            sizes[x3_part(j + 2)]
        } else {
            0
        }
    });
    // A split X4,j and a partial X4,j+1 close a P6 through c_j and c_{j+4}.
    for j in 0..6 {
        if sizes[x4_part(j, 1)] > 0 {
            right_lo[(j + 1) % 6] = sizes[x3_part(j + 3)];
        }
    }
    let mut left_lo = [0usize; 6];
    let no_x4 = p.x4.iter().all(|&s| s == 0);
    let mut paired: Option<usize> = None;
    let mut triangle = false;
    for start in 0..2 {
        let t = [x3_part(start), x3_part(start + 2), x3_part(start + 4)];
        let all_present = t.iter().all(|&i| sizes[i] > 0);
        if p.shapes[start] == TripleShape::Triangle
            && all_present
            && no_x4
            && !has_x2
            && paired.is_none()
        {
            let core: Vec<usize> = t.iter().map(|&i| rng.gen_range(1..=sizes[i])).collect();
            for k in 0..3 {
                let (a, c) = (t[k], t[(k + 1) % 3]);
                let profile = (0..sizes[a])
                    .map(|i| {
                        if i >= sizes[a] - core[k] {
                            core[(k + 1) % 3]
                        } else {
                            0
                        }
                    })
                    .collect();
                staircase(&mut b, a, c, profile);
            }
            triangle = true;
            continue;
        }
        // Edges between X3,q and X3,q+2 close a C4 or P6 with any vertex of
        // X4,q+3 or X4,q+4, with a pair from X4,q+2 and X4,q+5, or with edges
        // of the other triple at offset q+3. Endpoints must be seen by all of
        // X4,q+1 (in X3,q) and X4,q (in X3,q+2), and X4,q+2 and X4,q+5 must
        // be complete to the quiet class X3,q+4.
        let open: Vec<usize> = [start, start + 2, start + 4]
            .into_iter()
            .filter(|&q| {
                sizes[x3_part(q)] > 0
                    && sizes[x3_part(q + 2)] > 0
                    && !present(q + 3)
                    && !present(q + 4)
                    && !(present(q + 2) && present(q + 5))
                    && (sizes[x3_part(q + 4)] == 0 || sizes[x4_part((q + 5) % 6, 1)] == 0)
                    && paired != Some((q + 3) % 6)
                    && !triangle
                    && !has_x2
            })
            .collect();
        if open.is_empty() {
            continue;
        }
        let q = open[rng.gen_range(0..open.len())];
        let (a, c) = (x3_part(q), x3_part(q + 2));
        let active_cap = sizes[a] - usize::from(sizes[x4_part((q + 1) % 6, 1)] > 0);
        let mut profile = non_decreasing(rng, sizes[a], 0, sizes[c]);
        let idle = sizes[a] - active_cap;
        profile[..idle].fill(0);
        let active = profile.iter().filter(|&&x| x > 0).count();
        let reach = profile.last().copied().unwrap_or(0);
        left_lo[(q + 1) % 6] = active;
        right_lo[q % 6] = right_lo[q % 6].max(reach);
        if active > 0 {
            paired = Some(q % 6);
            right_lo[(q + 2) % 6] = sizes[x3_part(q + 4)];
        }
        staircase(&mut b, a, c, profile);
    }
    for j in 0..6 {
        let (zero, one) = (x4_part(j, 0), x4_part(j, 1));
        let right = sizes[x3_part(j + 2)];
        let pr = non_decreasing(rng, sizes[zero], right_lo[j], right);
        staircase(&mut b, zero, x3_part(j + 2), pr);
        if sizes[one] > 0 {
            let left = sizes[x3_part(j + 5)] - 1;
            let pl = non_decreasing(rng, sizes[one], left_lo[j], left);
            staircase(&mut b, one, x3_part(j + 5), pl);
        }
    }
    (b.build(), lay, stairs)
}

/// Samples until the class gate accepts, up to `p.max_retries` attempts.
pub fn gen_instance(p: &InstanceParams) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut last = ClassVerdict::InClass;
    for attempt in 1..=p.max_retries.max(1) {
        let (graph, lay, staircases) = sample(p, &mut rng);
        match is_in_class(&graph) {
            ClassVerdict::InClass => {
                let parts = lay
                    .parts
                    .into_iter()
                    .enumerate()
                    .map(|(i, vs)| (part_name(i), vs))
                    .collect();
                let intended = VertexPartition::new(&graph, parts)?;
                log::debug!("seed {} accepted after {attempt} attempts", p.seed);
                return Ok(Instance {
                    graph,
                    intended,
                    staircases,
                    attempts: attempt,
                });
            }
            w => {
                log::trace!("seed {} attempt {attempt} rejected: {w:?}", p.seed);
                last = w;
            }
        }
    }
    Err(GenError::RetriesExhausted {
        tries: p.max_retries.max(1),
        last,
    })
}

#[derive(Clone, Debug)]
pub struct ThreeRing {
    pub graph: Graph,
    pub partition: VertexPartition,
    pub boxes: BoxGraph,
}

/// Three cliques of size `m`; vertex `i` of clique `k` sees the first
/// `profiles[k][i]` vertices of clique `k + 1 (mod 3)`. Profiles must be
/// non-increasing, which makes every neighbourhood a prefix.
pub fn gen_3ring(m: usize, profiles: &[Vec<usize>; 3]) -> Result<ThreeRing, GenError> {
    for (index, t) in profiles.iter().enumerate() {
        let ok = m >= 1
            && t.len() == m
            && t.iter().all(|&x| x <= m)
            && t.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            return Err(GenError::BadProfile { index, m });
        }
    }
    let mut b = GraphBuilder::new(3 * m);
    for (k, profile) in profiles.iter().enumerate() {
        let own: Vec<usize> = (k * m..(k + 1) * m).collect();
        b.add_clique(&own);
        let next = (k + 1) % 3 * m;
        for (i, &t) in profile.iter().enumerate() {
            for u in next..next + t {
                b.add_edge(k * m + i, u);
            }
        }
    }
    let graph = b.build();
    let parts = (0..3)
        .map(|k| (format!("K{}", k + 1), (k * m..(k + 1) * m).collect()))
        .collect();
    let partition = VertexPartition::new(&graph, parts)?;
    crate::partition::require_monotone(&graph, &partition)?;
    let boxes = box_graph(&graph, &partition)?;
    Ok(ThreeRing {
        graph,
        partition,
        boxes,
    })
}

/// Erdős–Rényi sample: pairs `u < v` in lexicographic order, each kept when
/// a fresh uniform draw from `[0, 1)` is below `p`.
pub fn gen_random(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                b.add_edge(u, v);
            }
        }
    }
    Ok(b.build())
}
