use std::collections::HashSet;

use crate::graph::Digraph;

use super::LabError;

/// Largest vertex count the path and cycle oracles accept by default.
pub const DEFAULT_ORACLE_CAP: usize = 16;
/// Largest simple-cycle count the density oracle enumerates over by default.
pub const DEFAULT_CYCLE_CAP: usize = 24;

/// Live vertices renumbered `0..k` with out-neighbour bitmasks.
struct Compact {
    ids: Vec<usize>,
    out: Vec<u64>,
}

fn compact(g: &Digraph, cap: usize) -> Result<Compact, LabError> {
    let n = g.order();
    if n > cap.min(64) {
        return Err(LabError::TooLarge(format!("{n} vertices, cap {}", cap.min(64))));
    }
    let ids: Vec<usize> = g.vertices().collect();
    let mut index = vec![usize::MAX; g.id_bound()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let out = ids
        .iter()
        .map(|&v| g.out_neighbors(v).iter().fold(0u64, |m, &w| m | 1 << index[w]))
        .collect();
    Ok(Compact { ids, out })
}

/// Vertices reachable from `x` without entering `blocked`, `x` excluded.
fn reach(c: &Compact, x: usize, blocked: u64) -> u64 {
    let mut seen = 0u64;
    let mut frontier = c.out[x] & !blocked;
    while frontier != 0 {
        seen |= frontier;
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let y = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= c.out[y];
        }
        frontier = next & !blocked & !seen;
    }
    seen
}

/// Exact length of a longest simple path from `v`.
///
/// Depth-first over simple paths, pruned when the path plus everything
/// still reachable from its end cannot beat the best found.
pub fn oracle_longest_path_from(g: &Digraph, v: usize, cap: usize) -> Result<usize, LabError> {
    let c = compact(g, cap)?;
    let Some(s) = c.ids.iter().position(|&x| x == v) else {
        return Err(LabError::BadParams(format!("{v} is not a vertex")));
    };
    let n = c.ids.len();
    let mut best = 0;
    fn go(c: &Compact, x: usize, used: u64, len: usize, n: usize, best: &mut usize) {
        *best = (*best).max(len);
        if *best == n - 1 {
            return;
        }
        if len + reach(c, x, used).count_ones() as usize <= *best {
            return;
        }
        let mut f = c.out[x] & !used;
        while f != 0 {
            let y = f.trailing_zeros() as usize;
            f &= f - 1;
            go(c, y, used | 1 << y, len + 1, n, best);
        }
    }
    go(&c, s, 1 << s, 0, n, &mut best);
    Ok(best)
}

/// Exact length of a longest simple directed cycle, 0 when acyclic.
/// Digons count as cycles of length 2.
pub fn oracle_longest_cycle(g: &Digraph, cap: usize) -> Result<usize, LabError> {
    let c = compact(g, cap)?;
    let n = c.ids.len();
    let mut best = 0;
    // each cycle is found from its smallest vertex
    fn go(c: &Compact, s: usize, x: usize, used: u64, len: usize, best: &mut usize) {
        if c.out[x] >> s & 1 == 1 && len >= 2 {
            *best = (*best).max(len);
        }
        let allowed = !used & !((1u64 << s) - 1) & !(1 << s);
        let room = reach(c, x, used | ((1u64 << s) - 1)).count_ones() as usize;
        if len + room <= *best {
            return;
        }
        let mut f = c.out[x] & allowed;
        while f != 0 {
            let y = f.trailing_zeros() as usize;
            f &= f - 1;
            go(c, s, y, used | 1 << y, len + 1, best);
        }
    }
    for s in 0..n {
        go(&c, s, s, 1 << s, 1, &mut best);
    }
    Ok(best)
}

/// Every simple cycle as an edge bitmask over `g.edge_list()` order.
fn simple_cycles(g: &Digraph, c: &Compact, limit: usize) -> Result<Vec<u128>, LabError> {
    let edges = g.edge_list();
    if edges.len() > 128 {
        return Err(LabError::TooLarge(format!("{} edges, at most 128", edges.len())));
    }
    let bit = |u: usize, w: usize| -> u128 {
        let i = edges
            .binary_search(&(c.ids[u], c.ids[w]))
            .expect("compact edges come from the graph");
        1u128 << i
    };
    let mut out = Vec::new();
    let mut walk = Vec::new();
    fn go(
        c: &Compact,
        s: usize,
        x: usize,
        used: u64,
        walk: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        if c.out[x] >> s & 1 == 1 && walk.len() >= 2 {
            out.push(walk.clone());
            if out.len() > limit {
                return false;
            }
        }
        let mut f = c.out[x] & !used & !((1u64 << s) | ((1u64 << s) - 1));
        while f != 0 {
            let y = f.trailing_zeros() as usize;
            f &= f - 1;
            walk.push(y);
            let ok = go(c, s, y, used | 1 << y, walk, out, limit);
            walk.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for s in 0..c.ids.len() {
        walk.clear();
        walk.push(s);
        if !go(c, s, s, 1 << s, &mut walk, &mut cycles, limit) {
            return Err(LabError::TooLarge(format!("more than {limit} simple cycles")));
        }
    }
    for cyc in cycles {
        let k = cyc.len();
        out.push((0..k).fold(0u128, |m, i| m | bit(cyc[i], cyc[(i + 1) % k])));
    }
    Ok(out)
}

/// Eulerian subgraph (at least two vertices) maximising
/// `e(H) / (|V(H)| - 1)`.
///
/// Every nonempty Eulerian edge set is a union of edge-disjoint simple
/// cycles, so all of them are enumerated from the simple cycles. Ties go to
/// the lexicographically smallest sorted vertex set, then edge list.
pub fn oracle_max_density_eulerian_subgraph(
    g: &Digraph,
    vertex_cap: usize,
    cycle_cap: usize,
) -> Result<(Digraph, f64), LabError> {
    let c = compact(g, vertex_cap)?;
    let cycles = simple_cycles(g, &c, cycle_cap)?;
    if cycles.is_empty() {
        return Err(LabError::BadParams("graph has no cycle".into()));
    }
    let edges = g.edge_list();
    let mut seen: HashSet<u128> = HashSet::new();
    fn unions(cycles: &[u128], i: usize, acc: u128, seen: &mut HashSet<u128>) {
        if i == cycles.len() {
            if acc != 0 {
                seen.insert(acc);
            }
            return;
        }
        unions(cycles, i + 1, acc, seen);
        if acc & cycles[i] == 0 {
            unions(cycles, i + 1, acc | cycles[i], seen);
        }
    }
    unions(&cycles, 0, 0, &mut seen);

    type Key = (usize, usize, Vec<usize>, Vec<(usize, usize)>);
    let key = |mask: u128| -> Key {
        let es: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let mut vs: Vec<usize> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        (es.len(), vs.len() - 1, vs, es)
    };
    let mut best: Option<Key> = None;
    let mut masks: Vec<u128> = seen.into_iter().collect();
    masks.sort_unstable();
    for m in masks {
        let k = key(m);
        let better = match &best {
            None => true,
            Some(b) => {
                // compare k.0 / k.1 with b.0 / b.1 exactly
                let (l, r) = (k.0 * b.1, b.0 * k.1);
                l > r || (l == r && (&k.2, &k.3) < (&b.2, &b.3))
            }
        };
        if better {
            best = Some(k);
        }
    }
    let (e, v1, _, es) = best.expect("at least one cycle");
    let mut alive = vec![false; g.id_bound()];
    for &(a, b) in &es {
        alive[a] = true;
        alive[b] = true;
    }
    Ok((Digraph::with_edges(alive, es), e as f64 / v1 as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Digraph {
        Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    fn cycle(n: usize) -> Digraph {
        Digraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn longest_path_examples() {
        assert_eq!(oracle_longest_path_from(&bowtie(), 0, 16).unwrap(), 2);
        assert_eq!(oracle_longest_path_from(&bowtie(), 1, 16).unwrap(), 4);
        assert_eq!(oracle_longest_path_from(&cycle(5), 0, 16).unwrap(), 4);
        assert!(matches!(oracle_longest_path_from(&cycle(20), 0, 16), Err(LabError::TooLarge(_))));
    }

    #[test]
    fn longest_cycle_examples() {
        assert_eq!(oracle_longest_cycle(&cycle(3), 16).unwrap(), 3);
        let path = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(oracle_longest_cycle(&path, 16).unwrap(), 0);
        assert_eq!(oracle_longest_cycle(&bowtie(), 16).unwrap(), 3);
        assert_eq!(oracle_longest_cycle(&dk(5), 16).unwrap(), 5);
        let digon = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(oracle_longest_cycle(&digon, 16).unwrap(), 2);
    }

    #[test]
    fn density_examples() {
        let (h, dens) = oracle_max_density_eulerian_subgraph(&dk(4), 16, 100).unwrap();
        assert_eq!((h.edge_count(), dens), (12, 4.0));
        let (h, dens) = oracle_max_density_eulerian_subgraph(&cycle(3), 16, 100).unwrap();
        assert_eq!((h.edge_count(), dens), (3, 1.5));
        let (h, dens) = oracle_max_density_eulerian_subgraph(&bowtie(), 16, 100).unwrap();
        assert_eq!(dens, 1.5);
        assert_eq!(h.support(), vec![0, 1, 2]);
    }

    #[test]
    fn density_agrees_with_edge_subset_enumeration() {
        // every balanced edge subset of a small graph, by brute force
        let g = Digraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2), (2, 3), (3, 2)]).unwrap();
        let es = g.edge_list();
        let mut best = 0.0f64;
        for mask in 1u32..(1 << es.len()) {
            let mut bal = [0i32; 4];
            let mut touched = [false; 4];
            let mut e = 0;
            for (i, &(a, b)) in es.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    bal[a] += 1;
                    bal[b] -= 1;
                    touched[a] = true;
                    touched[b] = true;
                    e += 1;
                }
            }
            if bal.iter().all(|&x| x == 0) {
                let v = touched.iter().filter(|&&t| t).count();
                best = best.max(e as f64 / (v - 1) as f64);
            }
        }
        let (_, dens) = oracle_max_density_eulerian_subgraph(&g, 16, 100).unwrap();
        assert_eq!(dens, best);
    }
}
