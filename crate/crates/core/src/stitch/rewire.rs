use std::collections::{BTreeMap, BTreeSet};

use crate::density::Thresholds;
use crate::graph::{check_path, mask_of, BranchTag, Digraph, PathWitness};

use super::{DetourSet, StitchError};

/// Provenance of an edge added by rewiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakeEdge {
    /// `N+(u) ∩ N-(w) ∩ Y'` in the stripped graph, in path order.
    pub candidates: Vec<usize>,
    /// Common heavy neighbours when the edge was created.
    pub count: usize,
    /// The vertex whose two edges were traded for this one.
    pub consumed: usize,
}

/// One rewiring step: `u -> y -> w` replaced by `u -> w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewireStep {
    pub u: usize,
    pub w: usize,
    pub y: usize,
    pub e_before: usize,
    pub e_after: usize,
    /// `u` and `w` balanced and the total imbalance over `Y'` unchanged.
    pub balance_ok: bool,
}

#[derive(Debug, Clone)]
pub struct RewiredGraph {
    /// The stripped graph the rewiring started from.
    pub base: Digraph,
    out: Vec<BTreeSet<usize>>,
    inn: Vec<BTreeSet<usize>>,
    on_path: Vec<bool>,
    pub path: Vec<usize>,
    pub y_prime: Vec<usize>,
    pub fake: BTreeMap<(usize, usize), FakeEdge>,
    pub steps: Vec<RewireStep>,
    /// Whether the base was balanced off the path to begin with.
    pub base_balanced: bool,
}

impl RewiredGraph {
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.out.get(u).is_some_and(|s| s.contains(&w))
    }

    pub fn is_fake(&self, u: usize, w: usize) -> bool {
        self.fake.contains_key(&(u, w))
    }

    /// Current edge set as a digraph on the base vertex set.
    pub fn live(&self) -> Digraph {
        let edges = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, ys)| ys.iter().map(move |&y| (u, y)))
            .collect();
        Digraph::with_edges(self.base.alive_mask().to_vec(), edges)
    }

    /// First vertex off the path with unequal in- and out-degree.
    pub fn unbalanced_off_path(&self) -> Option<usize> {
        (0..self.out.len()).find(|&x| !self.on_path[x] && self.out[x].len() != self.inn[x].len())
    }

    /// `sum over y in Y' of |d+(y) - d-(y)|`.
    pub fn y_prime_imbalance(&self) -> usize {
        self.y_prime
            .iter()
            .map(|&y| self.out[y].len().abs_diff(self.inn[y].len()))
            .sum()
    }

    fn common(&self, u: usize, w: usize) -> Vec<usize> {
        self.y_prime
            .iter()
            .copied()
            .filter(|&y| self.out[u].contains(&y) && self.inn[w].contains(&y))
            .collect()
    }
}

/// Trades `u -> y -> w` for a new edge `u -> w` while some pair `u, w` off
/// the path has at least the rewiring threshold of common neighbours in
/// `Y'` and no edge `u -> w`.
///
/// Counts only fall and new edges never touch the path, so a single pass
/// over the pairs in lexicographic order reaches the fixpoint. Each step
/// consumes the common neighbour earliest on the path.
pub fn rewire(h0: &Digraph, path: &PathWitness, ds: &DetourSet, th: &Thresholds) -> RewiredGraph {
    let n = h0.id_bound();
    let out: Vec<BTreeSet<usize>> = (0..n).map(|x| h0.out_neighbors(x).iter().copied().collect()).collect();
    let inn: Vec<BTreeSet<usize>> = (0..n).map(|x| h0.in_neighbors(x).iter().copied().collect()).collect();
    let on_path = mask_of(n, &path.vertices);
    let mut h = RewiredGraph {
        base: h0.clone(),
        out,
        inn,
        on_path,
        path: path.vertices.clone(),
        y_prime: ds.y_prime.clone(),
        fake: BTreeMap::new(),
        steps: Vec::new(),
        base_balanced: false,
    };
    h.base_balanced = h.unbalanced_off_path().is_none();
    let need = th.rewire.max(1.0);

    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &y in &h.y_prime {
        for &u in &h.inn[y] {
            for &w in &h.out[y] {
                if u != w && !h.on_path[u] && !h.on_path[w] {
                    *counts.entry((u, w)).or_default() += 1;
                }
            }
        }
    }
    let imbalance = h.y_prime_imbalance();
    for (&(u, w), &c) in &counts {
        if (c as f64) < need || h.out[u].contains(&w) {
            continue;
        }
        let common = h.common(u, w);
        if (common.len() as f64) < need {
            continue;
        }
        let y = common[0];
        let e_before = h.edge_count();
        h.out[u].remove(&y);
        h.inn[y].remove(&u);
        h.out[y].remove(&w);
        h.inn[w].remove(&y);
        h.out[u].insert(w);
        h.inn[w].insert(u);
        let e_after = h.edge_count();
        let balanced = |x: usize| h.out[x].len() == h.inn[x].len();
        let balance_ok = balanced(u) && balanced(w) && h.y_prime_imbalance() == imbalance;
        debug_assert!(!h.base_balanced || balance_ok, "rewiring broke balance at {u}->{w}");
        let candidates = h
            .y_prime
            .iter()
            .copied()
            .filter(|&c| h0.has_edge(u, c) && h0.has_edge(c, w))
            .collect();
        h.fake.insert(
            (u, w),
            FakeEdge {
                candidates,
                count: common.len(),
                consumed: y,
            },
        );
        h.steps.push(RewireStep {
            u,
            w,
            y,
            e_before,
            e_after,
            balance_ok,
        });
    }
    h
}

/// Eulerian core of a rewired graph: every path between path vertices and
/// every closed walk through the path is removed, leaving only cycles off
/// the path.
///
/// Walks start at path vertices and follow unused edges; off the path they
/// cannot get stuck because degrees balance there. A walk that revisits a
/// vertex off the path sets the loop aside and keeps it in the core.
pub fn extract_k(h: &RewiredGraph) -> Result<Digraph, StitchError> {
    if let Some(x) = h.unbalanced_off_path() {
        return Err(StitchError::BalanceViolated(x));
    }
    let n = h.out.len();
    // consumed from the back, so the smallest successor goes first
    let mut avail: Vec<Vec<usize>> = h.out.iter().map(|s| s.iter().rev().copied().collect()).collect();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for &x in &h.path {
        while !avail[x].is_empty() {
            let mut walk = vec![x];
            let mut cur = x;
            loop {
                let Some(y) = avail[cur].pop() else {
                    for &z in &walk {
                        index[z] = usize::MAX;
                    }
                    return Err(StitchError::BalanceViolated(cur));
                };
                walk.push(y);
                if h.on_path[y] {
                    break;
                }
                if index[y] != usize::MAX {
                    let i = index[y];
                    kept.extend(walk[i..].windows(2).map(|e| (e[0], e[1])));
                    for &z in &walk[i + 1..walk.len() - 1] {
                        index[z] = usize::MAX;
                    }
                    walk.truncate(i + 1);
                } else {
                    index[y] = walk.len() - 1;
                }
                cur = y;
            }
            for &z in &walk {
                if !h.on_path[z] {
                    index[z] = usize::MAX;
                }
            }
        }
    }
    for (u, ys) in avail.iter().enumerate() {
        kept.extend(ys.iter().map(|&y| (u, y)));
    }
    Ok(Digraph::with_edges(h.base.alive_mask().to_vec(), kept))
}

/// Replaces each fake edge `u -> w` of `r` that is not an edge of `g` by
/// `u -> y -> w` for a candidate `y`, chosen greedily with the lowest heavy
/// index that keeps all chosen indices more than the spacing apart. With
/// `segment = Some(h)` the indices must also differ from `h` by more than
/// the window. Returns the path and the chosen vertices.
pub fn realize_fake_edges(
    r: &[usize],
    h: &RewiredGraph,
    ds: &DetourSet,
    g: &Digraph,
    th: &Thresholds,
    segment: Option<usize>,
) -> Result<(PathWitness, Vec<usize>), StitchError> {
    let fakes: Vec<usize> = (0..r.len().saturating_sub(1))
        .filter(|&k| h.is_fake(r[k], r[k + 1]) && !g.has_edge(r[k], r[k + 1]))
        .collect();
    if fakes.len() as f64 > th.detour_limit {
        return Err(StitchError::TooManyFakeEdges {
            s: fakes.len(),
            limit: th.detour_limit.to_string(),
        });
    }
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(r.len() + fakes.len());
    let mut next = 0;
    for &k in &fakes {
        let (u, w) = (r[k], r[k + 1]);
        let fake = &h.fake[&(u, w)];
        let pick = fake.candidates.iter().find_map(|&y| {
            let i = ds.index_of(y)?;
            let spaced = chosen.iter().all(|&(j, _)| i.abs_diff(j) > th.spacing);
            let clear = segment.is_none_or(|s| (i + 1).abs_diff(s) > ds.window);
            (spaced && clear && !r.contains(&y)).then_some((i, y))
        });
        let Some((i, y)) = pick else {
            return Err(StitchError::NoFeasibleDetour { u, w });
        };
        chosen.push((i, y));
        out.extend_from_slice(&r[next..=k]);
        out.push(y);
        next = k + 1;
    }
    out.extend_from_slice(&r[next..]);
    if !out.is_empty() && !check_path(g, &out) {
        return Err(StitchError::PreconditionViolated("realized walk is not a path".into()));
    }
    let s = chosen.into_iter().map(|(_, y)| y).collect();
    Ok((PathWitness::new(out, BranchTag::GoodPathFinish), s))
}
