use std::collections::VecDeque;

use crate::density::{BoundParams, Thresholds};
use crate::graph::{mask_of, Digraph, PathWitness};

/// Result of repeatedly deleting problematic paths.
#[derive(Debug, Clone)]
pub struct StripResult {
    pub h0: Digraph,
    /// Deleted paths, in deletion order.
    pub removed: Vec<Vec<usize>>,
    pub edges_removed: usize,
    /// `e(G) - 2 p n d^(1/2) / gamma`, the lower bound the argument allows.
    pub edge_bound: f64,
    /// False when the search budget ran out before a fixpoint was certified.
    pub complete: bool,
}

/// Deletes, one at a time, the edges of paths of length at most
/// `problematic_max_len` with both ends on `P` that meet `V(P)` in more
/// than `problematic_hits` vertices, until none is left.
///
/// Any path with two ends on `P` meets it at least twice, so when the hit
/// threshold is below 2 the search is a breadth-first search through
/// vertices off `P` and is exact. Otherwise a depth-first enumeration of
/// short paths runs under `budget` extensions.
pub fn strip_problematic(
    g: &Digraph,
    path: &PathWitness,
    params: &BoundParams,
    th: &Thresholds,
    budget: usize,
) -> StripResult {
    let n = g.id_bound();
    let on_p = mask_of(n, &path.vertices);
    let max_len = th.problematic_max_len;
    let need = th.problematic_hits.floor().max(0.0) as usize + 1;
    let mut out: Vec<Vec<usize>> = (0..n).map(|x| g.out_neighbors(x).to_vec()).collect();
    let mut removed = Vec::new();
    let mut complete = true;
    let mut spent = 0usize;

    if max_len >= 1 {
        for &x in &path.vertices {
            loop {
                let found = if need <= 2 {
                    shortest_excursion(&out, &on_p, x, max_len)
                } else {
                    let r = heavy_excursion(&out, &on_p, x, max_len, need, budget, &mut spent);
                    if spent >= budget {
                        complete = false;
                    }
                    r
                };
                let Some(q) = found else { break };
                for e in q.windows(2) {
                    out[e[0]].retain(|&y| y != e[1]);
                }
                removed.push(q);
            }
        }
    }

    let edges: Vec<(usize, usize)> = out
        .iter()
        .enumerate()
        .flat_map(|(u, ys)| ys.iter().map(move |&y| (u, y)))
        .collect();
    let h0 = Digraph::with_edges(g.alive_mask().to_vec(), edges);
    let p = path.len() as f64;
    let edge_bound = g.edge_count() as f64 - 2.0 * p * g.order() as f64 * params.d.sqrt() / th.gamma;
    StripResult {
        edges_removed: g.edge_count() - h0.edge_count(),
        h0,
        removed,
        edge_bound,
        complete,
    }
}

/// Shortest path from `x` to another vertex of `P` with its interior off `P`.
fn shortest_excursion(out: &[Vec<usize>], on_p: &[bool], x: usize, max_len: usize) -> Option<Vec<usize>> {
    let n = out.len();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    dist[x] = 0;
    let mut queue = VecDeque::from([x]);
    while let Some(a) = queue.pop_front() {
        if dist[a] >= max_len {
            continue;
        }
        for &b in &out[a] {
            if dist[b] != usize::MAX {
                continue;
            }
            dist[b] = dist[a] + 1;
            parent[b] = a;
            if on_p[b] {
                let mut q = vec![b];
                let mut cur = b;
                while cur != x {
                    cur = parent[cur];
                    q.push(cur);
                }
                q.reverse();
                return Some(q);
            }
            queue.push_back(b);
        }
    }
    None
}

/// First path in depth-first order from `x` of length at most `max_len`,
/// ending on `P` and with at least `need` vertices on `P`.
fn heavy_excursion(
    out: &[Vec<usize>],
    on_p: &[bool],
    x: usize,
    max_len: usize,
    need: usize,
    budget: usize,
    spent: &mut usize,
) -> Option<Vec<usize>> {
    let mut on_walk = vec![false; out.len()];
    let mut walk = vec![x];
    on_walk[x] = true;
    let mut next = vec![0usize];
    let mut hits = 1usize;
    while let Some(i) = next.last_mut() {
        let a = *walk.last().expect("walk and cursor stack have equal height");
        if *spent >= budget {
            return None;
        }
        if walk.len() > max_len || *i >= out[a].len() {
            next.pop();
            walk.pop();
            on_walk[a] = false;
            if on_p[a] {
                hits -= 1;
            }
            continue;
        }
        let b = out[a][*i];
        *i += 1;
        if on_walk[b] {
            continue;
        }
        *spent += 1;
        walk.push(b);
        on_walk[b] = true;
        if on_p[b] {
            hits += 1;
            if hits >= need {
                return Some(walk);
            }
        }
        next.push(0);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;
    use crate::graph::BranchTag;

    fn params() -> BoundParams {
        BoundParams::new(0.01, 1.0 / 40.0, 2.0).unwrap()
    }

    fn th(n: usize, len: usize, hits: f64) -> Thresholds {
        let o = Overrides {
            problematic_max_len: Some(len),
            problematic_hits: Some(hits),
            ..Overrides::default()
        };
        Thresholds::new(&params(), n, &o)
    }

    /// Every simple path of length 1..=max_len, by brute force.
    fn all_short_paths(g: &Digraph, max_len: usize) -> Vec<Vec<usize>> {
        fn go(g: &Digraph, w: &mut Vec<usize>, max_len: usize, acc: &mut Vec<Vec<usize>>) {
            if w.len() > 1 {
                acc.push(w.clone());
            }
            if w.len() > max_len {
                return;
            }
            let last = *w.last().unwrap();
            for &y in g.out_neighbors(last) {
                if !w.contains(&y) {
                    w.push(y);
                    go(g, w, max_len, acc);
                    w.pop();
                }
            }
        }
        let mut acc = Vec::new();
        for v in g.vertices() {
            go(g, &mut vec![v], max_len, &mut acc);
        }
        acc
    }

    fn problematic_left(g: &Digraph, p: &[usize], max_len: usize, hits: f64) -> usize {
        all_short_paths(g, max_len)
            .into_iter()
            .filter(|q| {
                p.contains(&q[0])
                    && p.contains(q.last().unwrap())
                    && q.iter().filter(|x| p.contains(x)).count() as f64 > hits
            })
            .count()
    }

    #[test]
    fn nothing_to_strip() {
        let g = Digraph::new(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        let p = PathWitness::new(vec![0, 1], BranchTag::RandomGrowth);
        let r = strip_problematic(&g, &p, &params(), &th(5, 3, 1.0), 1000);
        // 1 -> 2 -> 3 -> 4 -> 0 has length 4 > 3
        assert_eq!(r.h0.edge_count(), 4);
        assert_eq!(r.removed, vec![vec![0, 1]]);
        let r = strip_problematic(&g, &p, &params(), &th(5, 3, 5.0), 1000);
        assert_eq!(r.h0.edge_count(), 5);
        assert!(r.removed.is_empty() && r.complete);
    }

    #[test]
    fn planted_three_edge_path() {
        // P = 0 -> 1 -> 2 -> 3; excursion 0 -> 4 -> 5 -> 3 touches P twice
        let e = [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 3), (3, 6), (6, 0)];
        let g = Digraph::new(7, &e).unwrap();
        let p = PathWitness::new(vec![0, 1, 2, 3], BranchTag::RandomGrowth);
        let r = strip_problematic(&g, &p, &params(), &th(7, 3, 1.0), 1000);
        assert!(r.removed.contains(&vec![0, 4, 5, 3]));
        assert!(!r.h0.has_edge(4, 5));
        assert_eq!(problematic_left(&r.h0, &p.vertices, 3, 1.0), 0);
        assert!(r.h0.edge_count() as f64 >= g.edge_count() as f64 - r.removed.len() as f64 * 3.0);
    }

    #[test]
    fn path_covering_everything_reaches_fixpoint() {
        let e: Vec<_> = (0..5)
            .flat_map(|u| (0..5).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let g = Digraph::new(5, &e).unwrap();
        let p = PathWitness::new(vec![0, 1, 2, 3, 4], BranchTag::RandomGrowth);
        for hits in [1.0, 2.0, 3.0] {
            let r = strip_problematic(&g, &p, &params(), &th(5, 3, hits), 1_000_000);
            assert!(r.complete);
            assert_eq!(problematic_left(&r.h0, &p.vertices, 3, hits), 0, "hits {hits}");
        }
    }

    #[test]
    fn removal_keeps_balance_off_path() {
        let e = [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 3), (3, 6), (6, 0), (4, 7), (7, 4)];
        let g = Digraph::new(8, &e).unwrap();
        let p = PathWitness::new(vec![0, 1, 2, 3], BranchTag::RandomGrowth);
        let r = strip_problematic(&g, &p, &params(), &th(8, 4, 1.0), 1000);
        for x in 4..8 {
            assert_eq!(r.h0.out_degree(x), r.h0.in_degree(x));
        }
    }
}
