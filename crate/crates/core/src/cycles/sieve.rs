use std::collections::{BTreeSet, VecDeque};

use crate::graph::Digraph;

use super::{decompose::cycle_edges, CycleDecomposition, CycleError};

/// Split of an Eulerian graph into a maximal packing of short cycles and
/// the remainder.
#[derive(Debug, Clone)]
pub struct SieveResult {
    /// Union of the removed short cycles.
    pub short_part: Digraph,
    /// Everything else; contains no cycle of length at most the threshold.
    pub long_part: Digraph,
    pub removed_cycles: CycleDecomposition,
}

/// Removes edge-disjoint cycles of length at most `max_len` until none is left.
///
/// Starts are scanned in ascending id. From each start the shortest cycle
/// through it is found by depth-bounded BFS (lexicographically first among
/// the shortest) and removed, repeating until the start lies on no short
/// cycle. Removing edges never creates cycles, so one pass is maximal.
pub fn short_cycle_sieve(g: &Digraph, max_len: usize) -> Result<SieveResult, CycleError> {
    if !g.is_eulerian() {
        return Err(CycleError::NotEulerian);
    }
    let n = g.id_bound();
    let mut removed = vec![false; g.edge_count()];
    let mut cycles = Vec::new();
    if max_len >= 2 {
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let mut touched = Vec::new();
        for s in g.vertices() {
            loop {
                let found =
                    shortest_cycle_through(g, s, max_len, &removed, &mut parent, &mut depth, &mut touched);
                for &t in &touched {
                    parent[t] = usize::MAX;
                    depth[t] = usize::MAX;
                }
                touched.clear();
                let Some(cycle) = found else { break };
                for (u, v) in cycle_edges(&cycle) {
                    removed[g.edge_id(u, v).expect("cycle edge")] = true;
                }
                cycles.push(cycle);
            }
        }
    }
    let short_part = g.filter_edges(|e, _, _| removed[e]);
    let long_part = g.filter_edges(|e, _, _| !removed[e]);
    Ok(SieveResult {
        short_part,
        long_part,
        removed_cycles: CycleDecomposition { cycles },
    })
}

fn shortest_cycle_through(
    g: &Digraph,
    s: usize,
    max_len: usize,
    removed: &[bool],
    parent: &mut [usize],
    depth: &mut [usize],
    touched: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let closes = |x: usize| g.edge_id(x, s).is_some_and(|e| !removed[e]);
    let mut queue = VecDeque::new();
    depth[s] = 0;
    touched.push(s);
    queue.push_back(s);
    // BFS discovers vertices in the order it would pop them, so the first
    // discovered vertex with a live edge back to s closes the
    // lexicographically first shortest cycle
    while let Some(x) = queue.pop_front() {
        if depth[x] + 1 >= max_len {
            continue;
        }
        for (i, &y) in g.out_neighbors(x).iter().enumerate() {
            let e = g.out_edge_ids(x).start + i;
            if removed[e] || depth[y] != usize::MAX {
                continue;
            }
            depth[y] = depth[x] + 1;
            parent[y] = x;
            touched.push(y);
            if closes(y) {
                let mut cyc = vec![y];
                let mut cur = y;
                while cur != s {
                    cur = parent[cur];
                    cyc.push(cur);
                }
                cyc.reverse();
                return Some(cyc);
            }
            queue.push_back(y);
        }
    }
    None
}

/// Repeatedly deletes a vertex of positive degree below `theta` together
/// with every cycle of `d` through it. The surviving cycles form an
/// Eulerian subgraph in which every non-isolated vertex has degree at least
/// `theta`. The result does not depend on the deletion order.
pub fn peel_low_degree(g: &Digraph, d: &CycleDecomposition, theta: f64) -> Result<Digraph, CycleError> {
    let owner = d.edge_owners(g)?;
    let n = g.id_bound();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut degree = vec![0usize; n];
    for (ci, c) in d.cycles.iter().enumerate() {
        for &v in c {
            through[v].push(ci);
            degree[v] += 1;
        }
    }
    let low = |deg: usize| deg > 0 && (deg as f64) < theta;
    let mut live = vec![true; d.len()];
    let mut queue: BTreeSet<usize> = (0..n).filter(|&v| low(degree[v])).collect();
    while let Some(v) = queue.pop_first() {
        for &ci in &through[v] {
            if !live[ci] {
                continue;
            }
            live[ci] = false;
            for &x in &d.cycles[ci] {
                degree[x] -= 1;
                if low(degree[x]) {
                    queue.insert(x);
                } else {
                    queue.remove(&x);
                }
            }
        }
    }
    Ok(g.filter_edges(|e, _, _| live[owner[e]]))
}

/// Greedy walk to the lowest-id unvisited successor; when every successor
/// is already on the walk, close at the earliest one. The cycle has length
/// at least the minimum out-degree over non-isolated vertices plus one.
pub fn min_outdegree_cycle(g: &Digraph) -> Result<Vec<usize>, CycleError> {
    let support = g.support();
    if support.is_empty() {
        return Err(CycleError::NoEdges);
    }
    if let Some(&v) = support.iter().find(|&&v| g.out_degree(v) == 0) {
        return Err(CycleError::NoOutEdge(v));
    }
    let mut pos = vec![usize::MAX; g.id_bound()];
    let mut walk = vec![support[0]];
    pos[support[0]] = 0;
    loop {
        let x = *walk.last().expect("walk is nonempty");
        let succ = g.out_neighbors(x);
        match succ.iter().find(|&&y| pos[y] == usize::MAX) {
            Some(&y) => {
                pos[y] = walk.len();
                walk.push(y);
            }
            None => {
                let k = succ.iter().map(|&y| pos[y]).min().expect("out-degree >= 1");
                return Ok(walk.split_off(k));
            }
        }
    }
}
