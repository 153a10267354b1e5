#![allow(dead_code)]

use std::collections::HashSet;

use eulerpath::graph::weak_components;
use eulerpath::lab::{generate, GeneratorSpec};
use eulerpath::Digraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random cycle union for corpus index `s`: parameters drawn from a
/// generator keyed by `s`, at most `max_n` vertices.
pub fn corpus_spec(s: u64, max_n: usize) -> GeneratorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
    let n = rng.gen_range(4..=max_n);
    let max_len = rng.gen_range(2..=n.min(16));
    let cycles = rng.gen_range(1..=2 * n);
    GeneratorSpec::RandomCycleUnion { n, cycles, max_len, seed: s }
}

pub fn corpus_graph(s: u64, max_n: usize) -> Digraph {
    generate(&corpus_spec(s, max_n)).expect("corpus parameters are valid")
}

/// Largest weak component (lowest vertex on ties) as an induced subgraph.
pub fn largest_component(g: &Digraph) -> Option<(Digraph, Vec<usize>)> {
    let comps = weak_components(g);
    let comp = comps
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))?;
    Some((g.induced(&comp), comp))
}

/// Reachability closure by repeated DFS, `r[u][v]` for live `u`, `v`.
pub fn reachability(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.id_bound();
    let mut r = vec![vec![false; n]; n];
    for u in g.vertices() {
        let mut stack = vec![u];
        r[u][u] = true;
        while let Some(x) = stack.pop() {
            for &y in g.out_neighbors(x) {
                if !r[u][y] {
                    r[u][y] = true;
                    stack.push(y);
                }
            }
        }
    }
    r
}

/// Some simple cycle of length at most `l`, by exhaustive enumeration
/// rooted at each cycle's smallest vertex.
pub fn cycle_at_most(g: &Digraph, l: usize) -> Option<Vec<usize>> {
    fn go(g: &Digraph, s: usize, walk: &mut Vec<usize>, l: usize) -> bool {
        let x = *walk.last().unwrap();
        for &y in g.out_neighbors(x) {
            if y == s && walk.len() >= 2 {
                return true;
            }
            if y > s && !walk.contains(&y) && walk.len() < l {
                walk.push(y);
                if go(g, s, walk, l) {
                    return true;
                }
                walk.pop();
            }
        }
        false
    }
    for s in g.vertices() {
        let mut walk = vec![s];
        if go(g, s, &mut walk, l) {
            return Some(walk);
        }
    }
    None
}

/// Whether `w` is a simple directed path of `g` (independent of the crate's checker).
pub fn is_simple_path(g: &Digraph, w: &[usize]) -> bool {
    let mut seen = HashSet::new();
    !w.is_empty()
        && w.iter().all(|&v| g.is_alive(v) && seen.insert(v))
        && w.windows(2).all(|e| g.out_neighbors(e[0]).contains(&e[1]))
}

pub fn is_balanced(g: &Digraph) -> bool {
    g.vertices().all(|v| g.out_degree(v) == g.in_degree(v))
}

/// Smallest out-degree over vertices that have any edge.
pub fn min_positive_outdegree(g: &Digraph) -> usize {
    g.vertices()
        .filter(|&v| g.out_degree(v) + g.in_degree(v) > 0)
        .map(|v| g.out_degree(v))
        .min()
        .unwrap_or(0)
}
