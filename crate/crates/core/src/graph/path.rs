use std::collections::VecDeque;
use std::fmt;

use super::digraph::mask_of;
use super::{Digraph, GraphError};

/// Which procedure produced a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchTag {
    /// Connector or plain search, no structural guarantee.
    Search,
    /// Route into a long cycle and wind around it.
    CycleRoute,
    /// Low-degree start: cycles through it removed, recurse on dense component.
    LowDegree,
    /// Separator found: layered peel, connector, recursive tail.
    Separator,
    /// Initial segment, rewired core and realized fake edges.
    GoodPathFinish,
    /// Long excursion from a path vertex, prefix rerouted around detours.
    AnchoredExcursion,
    LayeredPeel,
    RandomGrowth,
    Greedy,
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BranchTag::Search => "search",
            BranchTag::CycleRoute => "cycle_route",
            BranchTag::LowDegree => "low_degree",
            BranchTag::Separator => "separator",
            BranchTag::GoodPathFinish => "good_path_finish",
            BranchTag::AnchoredExcursion => "anchored_excursion",
            BranchTag::LayeredPeel => "layered_peel",
            BranchTag::RandomGrowth => "random_growth",
            BranchTag::Greedy => "greedy",
        };
        f.write_str(s)
    }
}

/// A simple directed path as a vertex sequence plus the tag of the branch
/// that produced it. Length counts edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub vertices: Vec<usize>,
    pub branch: BranchTag,
}

impl PathWitness {
    pub fn new(vertices: Vec<usize>, branch: BranchTag) -> Self {
        PathWitness { vertices, branch }
    }

    pub fn trivial(v: usize, branch: BranchTag) -> Self {
        PathWitness {
            vertices: vec![v],
            branch,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn end(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// Appends `tail`, whose first vertex must equal this path's last vertex.
    pub fn join(mut self, tail: &[usize]) -> Self {
        debug_assert_eq!(self.vertices.last(), tail.first());
        self.vertices.extend_from_slice(&tail[1..]);
        self
    }
}

/// True iff `w` is a nonempty simple directed path of live vertices in `g`.
pub fn check_path(g: &Digraph, w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    let mut seen = vec![false; g.id_bound()];
    for &v in w {
        if !g.is_alive(v) || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    w.windows(2).all(|e| g.has_edge(e[0], e[1]))
}

/// Shortest path from `v` whose only vertex in `targets` is its last one.
///
/// BFS over live vertices with successors in ascending order, so among
/// shortest paths the lexicographically first is returned.
pub fn path_to_set(g: &Digraph, v: usize, targets: &[usize]) -> Result<PathWitness, GraphError> {
    if !g.is_alive(v) {
        return Err(GraphError::MissingVertex(v));
    }
    let target = mask_of(g.id_bound(), targets);
    bfs_to_mask(g, &[v], &target)
        .map(|p| PathWitness::new(p, BranchTag::Search))
        .ok_or(GraphError::Unreachable)
}

/// Multi-source BFS: shortest path from some source to some target vertex.
/// Sources are tried in the given order at distance zero.
pub(crate) fn bfs_to_mask(g: &Digraph, sources: &[usize], target: &[bool]) -> Option<Vec<usize>> {
    let n = g.id_bound();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !g.is_alive(s) || seen[s] {
            continue;
        }
        if target[s] {
            return Some(vec![s]);
        }
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.out_neighbors(x) {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            parent[y] = x;
            if target[y] {
                let mut path = vec![y];
                let mut cur = y;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(y);
        }
    }
    None
}

/// Budgeted depth-first search for a long simple path from `v`.
///
/// Successors are tried in order of fewest unvisited successors, then id.
/// Returns the longest path seen after at most `budget` extensions, or as
/// soon as the path covers every live vertex.
pub fn greedy_longest_path(g: &Digraph, v: usize, budget: usize) -> Vec<usize> {
    if !g.is_alive(v) {
        return Vec::new();
    }
    let order = g.order();
    let mut on_path = vec![false; g.id_bound()];
    let mut path = vec![v];
    on_path[v] = true;
    let mut best = path.clone();
    // candidate successors per depth, consumed from the back
    let mut frontier: Vec<Vec<usize>> = vec![ranked_successors(g, v, &on_path)];
    let mut steps = 0usize;

    while let Some(cands) = frontier.last_mut() {
        if best.len() == order || steps >= budget {
            break;
        }
        match cands.pop() {
            Some(w) => {
                if on_path[w] {
                    continue;
                }
                steps += 1;
                on_path[w] = true;
                path.push(w);
                if path.len() > best.len() {
                    best.clone_from(&path);
                }
                let next = ranked_successors(g, w, &on_path);
                frontier.push(next);
            }
            None => {
                frontier.pop();
                if let Some(x) = path.pop() {
                    on_path[x] = false;
                }
            }
        }
    }
    best
}

fn ranked_successors(g: &Digraph, v: usize, on_path: &[bool]) -> Vec<usize> {
    let mut c: Vec<(usize, usize)> = g
        .out_neighbors(v)
        .iter()
        .filter(|&&w| !on_path[w])
        .map(|&w| {
            let free = g.out_neighbors(w).iter().filter(|&&x| !on_path[x]).count();
            (free, w)
        })
        .collect();
    // popped from the back: best candidate last
    c.sort_unstable_by(|a, b| b.cmp(a));
    c.into_iter().map(|(_, w)| w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Digraph {
        Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn path_to_set_examples() {
        let g = t3();
        assert_eq!(path_to_set(&g, 0, &[2]).unwrap().vertices, vec![0, 1, 2]);
        assert_eq!(path_to_set(&g, 0, &[0]).unwrap().vertices, vec![0]);
        let p = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path_to_set(&p, 2, &[0]), Err(GraphError::Unreachable));
    }

    #[test]
    fn path_to_set_meets_target_only_at_end() {
        // 0 -> 1 -> 2 and 0 -> 3 -> 2 ; targets {1, 2}
        let g = Digraph::new(4, &[(0, 1), (1, 2), (0, 3), (3, 2), (2, 0)]).unwrap();
        let p = path_to_set(&g, 0, &[1, 2]).unwrap();
        assert_eq!(p.vertices, vec![0, 1]);
    }

    #[test]
    fn check_path_examples() {
        let g = t3();
        assert!(check_path(&g, &[0, 1, 2]));
        assert!(!check_path(&g, &[0, 1, 2, 0]));
        assert!(!check_path(&g, &[0, 2]));
        assert!(!check_path(&g, &[]));
        assert!(check_path(&g, &[1]));
    }

    #[test]
    fn greedy_finds_hamiltonian_path_on_cycle() {
        let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = Digraph::new(6, &edges).unwrap();
        let p = greedy_longest_path(&g, 2, 1000);
        assert_eq!(p, vec![2, 3, 4, 5, 0, 1]);
        assert!(check_path(&g, &p));
    }
}
