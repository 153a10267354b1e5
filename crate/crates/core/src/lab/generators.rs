use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;

use super::LabError;

/// Rejections allowed per cycle before its maximum length shrinks.
const REJECTIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Cycle { n: usize },
    /// `k` layers of `t` vertices, all edges from each layer to the next,
    /// cyclically. Vertex `layer * t + i`.
    Blowup { k: usize, t: usize },
    Complete { n: usize },
    /// Directed triangles `0 -> 2i+1 -> 2i+2 -> 0` sharing vertex 0.
    SharedVertexTriangles { count: usize },
    /// Union of edge-disjoint random cycles on `n` vertices.
    RandomCycleUnion { n: usize, cycles: usize, max_len: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Cycle { .. } => "cycle",
            GeneratorSpec::Blowup { .. } => "blowup",
            GeneratorSpec::Complete { .. } => "complete",
            GeneratorSpec::SharedVertexTriangles { .. } => "shared_vertex_triangles",
            GeneratorSpec::RandomCycleUnion { .. } => "random_cycle_union",
        }
    }

    /// `key=value` pairs joined by `;`, as written to CSV.
    pub fn params(&self) -> String {
        match *self {
            GeneratorSpec::Cycle { n } | GeneratorSpec::Complete { n } => format!("n={n}"),
            GeneratorSpec::Blowup { k, t } => format!("k={k};t={t}"),
            GeneratorSpec::SharedVertexTriangles { count } => format!("count={count}"),
            GeneratorSpec::RandomCycleUnion { n, cycles, max_len, seed } => {
                format!("n={n};cycles={cycles};max_len={max_len};seed={seed}")
            }
        }
    }

    /// Vertex count of the generated graph.
    pub fn order(&self) -> usize {
        match *self {
            GeneratorSpec::Cycle { n } | GeneratorSpec::Complete { n } => n,
            GeneratorSpec::Blowup { k, t } => k * t,
            GeneratorSpec::SharedVertexTriangles { count } => 2 * count + 1,
            GeneratorSpec::RandomCycleUnion { n, .. } => n,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::Cycle { n } => write!(f, "cycle({n})"),
            GeneratorSpec::Blowup { k, t } => write!(f, "blowup({k},{t})"),
            GeneratorSpec::Complete { n } => write!(f, "complete({n})"),
            GeneratorSpec::SharedVertexTriangles { count } => write!(f, "shared_vertex_triangles({count})"),
            GeneratorSpec::RandomCycleUnion { n, cycles, max_len, seed } => {
                write!(f, "random_cycle_union({n},{cycles},{max_len},{seed})")
            }
        }
    }
}

/// Splits `name(a,b,...)` into the name and its argument strings.
pub(crate) fn split_call(s: &str) -> Result<(&str, Vec<&str>), LabError> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| LabError::BadParams(format!("expected name(args): {s:?}")))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| LabError::BadParams(format!("missing ')': {s:?}")))?;
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    Ok((s[..open].trim(), args))
}

impl FromStr for GeneratorSpec {
    type Err = LabError;

    /// `cycle(5)`, `blowup(3,2)`, `complete(4)`, `shared_vertex_triangles(3)`,
    /// `random_cycle_union(n,cycles,max_len[,seed])`.
    fn from_str(s: &str) -> Result<Self, LabError> {
        let (name, args) = split_call(s)?;
        let nums = args
            .iter()
            .map(|a| a.parse::<u64>().map_err(|_| LabError::BadParams(format!("not an integer: {a:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(LabError::BadParams(format!("{name} takes {k} arguments, got {}", nums.len())))
            }
        };
        let u = |i: usize| nums[i] as usize;
        match name {
            "cycle" => arity(1).map(|_| GeneratorSpec::Cycle { n: u(0) }),
            "complete" => arity(1).map(|_| GeneratorSpec::Complete { n: u(0) }),
            "blowup" => arity(2).map(|_| GeneratorSpec::Blowup { k: u(0), t: u(1) }),
            "shared_vertex_triangles" => arity(1).map(|_| GeneratorSpec::SharedVertexTriangles { count: u(0) }),
            "random_cycle_union" => {
                if nums.len() != 3 && nums.len() != 4 {
                    return Err(LabError::BadParams("random_cycle_union takes 3 or 4 arguments".into()));
                }
                Ok(GeneratorSpec::RandomCycleUnion {
                    n: u(0),
                    cycles: u(1),
                    max_len: u(2),
                    seed: nums.get(3).copied().unwrap_or(0),
                })
            }
            _ => Err(LabError::BadParams(format!("unknown generator {name:?}"))),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Digraph, LabError> {
    let bad = |m: &str| Err(LabError::BadParams(m.to_string()));
    let edges: Vec<(usize, usize)> = match *spec {
        GeneratorSpec::Cycle { n } => {
            if n < 2 {
                return bad("cycle needs n >= 2");
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        GeneratorSpec::Blowup { k, t } => {
            if k < 2 || t < 1 {
                return bad("blowup needs k >= 2 and t >= 1");
            }
            let mut e = Vec::with_capacity(k * t * t);
            for l in 0..k {
                let next = (l + 1) % k;
                for a in 0..t {
                    for b in 0..t {
                        e.push((l * t + a, next * t + b));
                    }
                }
            }
            e
        }
        GeneratorSpec::Complete { n } => {
            if n < 2 {
                return bad("complete needs n >= 2");
            }
            (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect()
        }
        GeneratorSpec::SharedVertexTriangles { count } => {
            if count < 1 {
                return bad("shared_vertex_triangles needs count >= 1");
            }
            (0..count)
                .flat_map(|i| {
                    let (a, b) = (2 * i + 1, 2 * i + 2);
                    [(0, a), (a, b), (b, 0)]
                })
                .collect()
        }
        GeneratorSpec::RandomCycleUnion { n, cycles, max_len, seed } => {
            if n < 2 || max_len < 2 {
                return bad("random_cycle_union needs n >= 2 and max_len >= 2");
            }
            random_cycle_union(n, cycles, max_len, seed)
        }
    };
    Digraph::new(spec.order(), &edges).map_err(|e| LabError::BadParams(e.to_string()))
}

/// Cycle lengths uniform in `[2, max_len]`, vertices drawn without
/// replacement. A cycle repeating an ordered pair is redrawn; after
/// `REJECTIONS` failures the maximum length drops by one, and a cycle that
/// cannot be placed even at length 2 is skipped.
fn random_cycle_union(n: usize, cycles: usize, max_len: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..cycles {
        let mut cap = max_len.min(n);
        'draw: while cap >= 2 {
            for _ in 0..REJECTIONS {
                let len = rng.gen_range(2..=cap);
                let vs = sample(&mut rng, n, len).into_vec();
                let cyc: Vec<(usize, usize)> = (0..len).map(|i| (vs[i], vs[(i + 1) % len])).collect();
                if cyc.iter().all(|e| !used.contains(e)) {
                    used.extend(cyc.iter().copied());
                    edges.extend(cyc);
                    break 'draw;
                }
            }
            cap -= 1;
        }
    }
    edges
}
