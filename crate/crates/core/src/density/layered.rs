use crate::cycles::{decompose_into_cycles, remove_cycles_through};
use crate::graph::{bfs_to_mask, is_weakly_connected, mask_of, weak_components, BranchTag, Digraph, PathWitness};

use super::DensityError;

#[derive(Debug, Clone)]
pub struct LayeredPeel {
    pub path: PathWitness,
    /// Number of graphs `G_0 ⊃ G_1 ⊃ ...` built before `B` disappeared.
    pub levels: usize,
    /// `(k - (1 - beta) d_cap) / t_cap - 1`; vacuous when negative.
    pub bound: f64,
    /// A connector had to pass through `B` and the path was cut short there.
    pub truncated: bool,
}

struct Level {
    members: Vec<usize>,
    entry: usize,
    prefix: Vec<usize>,
}

/// Path from `v` to `B` that meets `B` only at its end (with `reverse`, a
/// path from `B` to `v` meeting `B` only at its start).
///
/// Level `i + 1` removes every decomposition cycle of level `i` through
/// the current entry vertices and deletes them; each surviving component
/// that still meets `B` gets an entry vertex reached by a shortest path
/// from its parent's entry inside the parent. Once no component meets `B`
/// any more, a last shortest path inside a deepest component reaches `B`.
pub fn layered_peel_path(
    g: &Digraph,
    v: usize,
    b: &[usize],
    d_cap: f64,
    t_cap: usize,
    reverse: bool,
) -> Result<LayeredPeel, DensityError> {
    if reverse {
        let mut out = layered_peel_path(&g.transpose(), v, b, d_cap, t_cap, false)?;
        out.path.vertices.reverse();
        return Ok(out);
    }
    if !g.is_eulerian() {
        return Err(DensityError::NotEulerian);
    }
    if !g.is_alive(v) {
        return Err(DensityError::PreconditionViolated(format!("vertex {v} not in graph")));
    }
    if !is_weakly_connected(g) {
        return Err(DensityError::PreconditionViolated("graph is not connected".into()));
    }
    let targets: Vec<usize> = b.iter().copied().filter(|&x| g.is_alive(x)).collect();
    if targets.is_empty() {
        return Err(DensityError::EmptyB);
    }
    let n = g.id_bound();
    let in_b = mask_of(n, &targets);
    let beta = targets.len() as f64 / g.order() as f64;
    let bound = (g.average_degree() - (1.0 - beta) * d_cap) / t_cap.max(1) as f64 - 1.0;
    let done = |path: Vec<usize>, levels: usize, truncated: bool| LayeredPeel {
        path: PathWitness::new(path, BranchTag::LayeredPeel),
        levels,
        bound,
        truncated,
    };
    if in_b[v] {
        return Ok(done(vec![v], 0, false));
    }

    let mut cur = g.clone();
    let mut levels = vec![Level {
        members: g.vertices().collect(),
        entry: v,
        prefix: vec![v],
    }];
    let mut depth = 1;
    loop {
        let entries: Vec<usize> = levels.iter().map(|l| l.entry).collect();
        let dec = decompose_into_cycles(&cur).map_err(|_| DensityError::NotEulerian)?;
        let next = remove_cycles_through(&cur, &dec, &entries, true).map_err(|_| DensityError::NotEulerian)?;
        let comps: Vec<Vec<usize>> = weak_components(&next)
            .into_iter()
            .filter(|c| c.iter().any(|&x| in_b[x]))
            .collect();
        if comps.is_empty() {
            break;
        }
        let mut owner = vec![usize::MAX; n];
        for (i, l) in levels.iter().enumerate() {
            for &x in &l.members {
                owner[x] = i;
            }
        }
        let mut deeper = Vec::new();
        for c in comps {
            let Some(parent) = levels.get(owner[c[0]]) else { continue };
            let inside = mask_of(n, &c);
            // avoid B vertices outside the child where possible
            let avoid: Vec<usize> = parent
                .members
                .iter()
                .copied()
                .filter(|&x| !in_b[x] || inside[x])
                .collect();
            let seg = bfs_to_mask(&cur.induced(&avoid), &[parent.entry], &inside)
                .or_else(|| bfs_to_mask(&cur.induced(&parent.members), &[parent.entry], &inside));
            let Some(seg) = seg else { continue };
            let entry = *seg.last().expect("segment is nonempty");
            let mut prefix = parent.prefix.clone();
            prefix.extend_from_slice(&seg[1..]);
            deeper.push(Level {
                members: c,
                entry,
                prefix,
            });
        }
        if deeper.is_empty() {
            break;
        }
        cur = next;
        levels = deeper;
        depth += 1;
    }

    for l in &levels {
        if !l.members.iter().any(|&x| in_b[x]) {
            continue;
        }
        let Some(seg) = bfs_to_mask(&cur.induced(&l.members), &[l.entry], &in_b) else {
            continue;
        };
        let mut path = l.prefix.clone();
        path.extend_from_slice(&seg[1..]);
        let first = path.iter().position(|&x| in_b[x]).expect("path ends in B");
        let truncated = first + 1 < path.len();
        path.truncate(first + 1);
        return Ok(done(path, depth, truncated));
    }
    Err(DensityError::Unreachable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_path;

    fn cycle(n: usize) -> Digraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &e).unwrap()
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    #[test]
    fn cycle_path_is_forced() {
        let r = layered_peel_path(&cycle(5), 0, &[3], 1.0, 5, false).unwrap();
        assert_eq!(r.path.vertices, vec![0, 1, 2, 3]);
        assert!(r.bound < 0.0);
    }

    #[test]
    fn complete_four() {
        let g = dk(4);
        let r = layered_peel_path(&g, 0, &[3], 3.0, 4, false).unwrap();
        assert!(check_path(&g, &r.path.vertices));
        assert_eq!(r.path.start(), Some(0));
        assert_eq!(r.path.end(), Some(3));
        assert!(!r.path.is_empty() && r.path.len() <= 3);
    }

    #[test]
    fn bowtie_route() {
        let g = Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let r = layered_peel_path(&g, 1, &[4], 1.0, 3, false).unwrap();
        assert_eq!(r.path.vertices, vec![1, 2, 0, 3, 4]);
    }

    #[test]
    fn reverse_ends_at_v() {
        let g = Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let r = layered_peel_path(&g, 4, &[1], 1.0, 3, true).unwrap();
        assert!(check_path(&g, &r.path.vertices));
        assert_eq!(r.path.start(), Some(1));
        assert_eq!(r.path.end(), Some(4));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            layered_peel_path(&cycle(4), 0, &[], 1.0, 4, false),
            Err(DensityError::EmptyB)
        ));
    }
}
