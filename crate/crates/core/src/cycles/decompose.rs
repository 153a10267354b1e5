use std::fmt::Write as _;

use crate::graph::Digraph;

use super::CycleError;

/// Partition of an Eulerian digraph's edge set into simple directed cycles.
/// Each cycle is a vertex sequence, closed implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Maps every edge id of `g` to the index of the cycle that owns it.
    /// Fails unless the cycles are simple, have length at least two and
    /// partition `E(g)` exactly.
    pub fn edge_owners(&self, g: &Digraph) -> Result<Vec<usize>, CycleError> {
        let mut owner = vec![usize::MAX; g.edge_count()];
        let mut seen = vec![false; g.id_bound()];
        for (ci, c) in self.cycles.iter().enumerate() {
            if c.len() < 2 {
                return Err(CycleError::DecompositionMismatch);
            }
            for &v in c {
                if v >= seen.len() || seen[v] {
                    return Err(CycleError::DecompositionMismatch);
                }
                seen[v] = true;
            }
            for &v in c {
                seen[v] = false;
            }
            for (u, v) in cycle_edges(c) {
                let e = g.edge_id(u, v).ok_or(CycleError::DecompositionMismatch)?;
                if owner[e] != usize::MAX {
                    return Err(CycleError::DecompositionMismatch);
                }
                owner[e] = ci;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(CycleError::DecompositionMismatch);
        }
        Ok(owner)
    }

    pub fn is_partition_of(&self, g: &Digraph) -> bool {
        self.edge_owners(g).is_ok()
    }

    /// One cycle per line, vertex ids separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cycles {
            let line: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, std::num::ParseIntError> {
        let mut cycles = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cycles.push(
                line.split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Vec<usize>, _>>()?,
            );
        }
        Ok(CycleDecomposition { cycles })
    }
}

/// Edges of a closed vertex sequence, including the closing edge.
pub fn cycle_edges(c: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()]))
}

/// Deterministic cycle decomposition.
///
/// Starting from the lowest-id vertex with unused out-edges, walk along the
/// lowest unused out-edge until a vertex repeats, emit that cycle and keep
/// walking from the repeated vertex. Runs in O(n + m).
pub fn decompose_into_cycles(g: &Digraph) -> Result<CycleDecomposition, CycleError> {
    if !g.is_eulerian() {
        return Err(CycleError::NotEulerian);
    }
    let n = g.id_bound();
    // out-edges are consumed in adjacency order
    let mut next = vec![0usize; n];
    let mut pos = vec![usize::MAX; n];
    let mut cycles = Vec::new();
    let mut walk: Vec<usize> = Vec::new();

    for s in 0..n {
        while next[s] < g.out_degree(s) {
            walk.clear();
            walk.push(s);
            pos[s] = 0;
            loop {
                let x = *walk.last().expect("walk is nonempty");
                if next[x] == g.out_degree(x) {
                    // only the walk's start can run dry, and only when the walk is back at it
                    debug_assert_eq!(walk.len(), 1);
                    pos[x] = usize::MAX;
                    break;
                }
                let y = g.out_neighbors(x)[next[x]];
                next[x] += 1;
                if pos[y] != usize::MAX {
                    let k = pos[y];
                    let cycle: Vec<usize> = walk.split_off(k);
                    for &c in &cycle[1..] {
                        pos[c] = usize::MAX;
                    }
                    walk.push(y);
                    cycles.push(cycle);
                } else {
                    pos[y] = walk.len();
                    walk.push(y);
                }
            }
        }
    }
    Ok(CycleDecomposition { cycles })
}

/// Keeps exactly the cycles of `d` that avoid `s`; with `delete_vertices`
/// the vertices of `s` are masked out as well.
pub fn remove_cycles_through(
    g: &Digraph,
    d: &CycleDecomposition,
    s: &[usize],
    delete_vertices: bool,
) -> Result<Digraph, CycleError> {
    let owner = d.edge_owners(g)?;
    let hit = crate::graph::mask_of(g.id_bound(), s);
    let drop: Vec<bool> = d.cycles.iter().map(|c| c.iter().any(|&v| hit[v])).collect();
    let kept = g.filter_edges(|e, _, _| !drop[owner[e]]);
    Ok(if delete_vertices {
        kept.remove_vertices(s)
    } else {
        kept
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Digraph {
        Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn bowtie() -> Digraph {
        Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    #[test]
    fn triangle_is_one_cycle() {
        let d = decompose_into_cycles(&t3()).unwrap();
        assert_eq!(d.cycles, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn complete_digraph_partition() {
        let g = dk(4);
        let d = decompose_into_cycles(&g).unwrap();
        assert_eq!(d.total_length(), 12);
        assert!(d.is_partition_of(&g));
    }

    #[test]
    fn bowtie_two_cycles() {
        let d = decompose_into_cycles(&bowtie()).unwrap();
        assert_eq!(d.cycles, vec![vec![0, 1, 2], vec![0, 3, 4]]);
    }

    #[test]
    fn not_eulerian_is_rejected() {
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(decompose_into_cycles(&g), Err(CycleError::NotEulerian));
    }

    #[test]
    fn walk_emits_inner_cycle_and_continues() {
        // 0->1->2->1 would repeat 1: graph 0->1, 1->2, 2->1? not eulerian; use figure eight
        let g = Digraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 1), (1, 4), (4, 0)]).unwrap();
        let d = decompose_into_cycles(&g).unwrap();
        assert!(d.is_partition_of(&g));
        assert_eq!(d.cycles, vec![vec![1, 2, 3], vec![0, 1, 4]]);
    }

    #[test]
    fn remove_cycles_examples() {
        let g = bowtie();
        let d = decompose_into_cycles(&g).unwrap();
        let r = remove_cycles_through(&g, &d, &[1], false).unwrap();
        assert_eq!(r.edge_list(), vec![(0, 3), (3, 4), (4, 0)]);
        let r = remove_cycles_through(&g, &d, &[0], false).unwrap();
        assert_eq!(r.edge_count(), 0);
        let t = t3();
        let dt = decompose_into_cycles(&t).unwrap();
        assert_eq!(remove_cycles_through(&t, &dt, &[], false).unwrap(), t);
        let r = remove_cycles_through(&g, &d, &[1], true).unwrap();
        assert!(!r.is_alive(1));
    }

    #[test]
    fn mismatched_decomposition_is_rejected() {
        let g = bowtie();
        let d = CycleDecomposition {
            cycles: vec![vec![0, 1, 2]],
        };
        assert_eq!(
            remove_cycles_through(&g, &d, &[], false),
            Err(CycleError::DecompositionMismatch)
        );
    }

    #[test]
    fn text_round_trip() {
        let d = decompose_into_cycles(&dk(4)).unwrap();
        assert_eq!(CycleDecomposition::from_text(&d.to_text()).unwrap(), d);
    }
}
