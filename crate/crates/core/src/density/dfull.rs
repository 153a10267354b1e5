use crate::config::SearchBudget;
use crate::cycles::{decompose_into_cycles, CycleDecomposition};
use crate::graph::{weak_components, Digraph};

use super::DensityError;

/// Hard cap on the exhaustive vertex-subset search.
const MAX_EXACT: usize = 20;

/// `e >= (nv - 1) d` with at least two vertices.
pub fn is_dense(edges: usize, vertices: usize, d: f64) -> bool {
    vertices >= 2 && edges as f64 >= (vertices - 1) as f64 * d
}

/// Searches for a proper Eulerian subgraph with at least two vertices and
/// at least `(|V(H)| - 1) d` edges. The vertex set of `g` is its live set.
///
/// Strategies, first hit wins:
/// 1. weak components, when `g` is disconnected;
/// 2. exhaustive vertex subsets by increasing size when the support is
///    within `budget.exact_vertex_limit` (each subset's largest Eulerian
///    subgraph comes from a min-cost flow), which makes the search exact;
/// 3. unions of decomposition cycles with fewest vertices, when there are
///    at most `budget.decomposition_subset_limit` cycles;
/// 4. for single vertices by ascending degree, components left after
///    removing every decomposition cycle through that vertex.
///
/// The returned graph has its vertex set as live set.
pub fn find_dense_eulerian_subgraph(
    g: &Digraph,
    d: f64,
    budget: &SearchBudget,
) -> Result<Option<Digraph>, DensityError> {
    if !g.is_eulerian() {
        return Err(DensityError::NotEulerian);
    }
    let n = g.order();
    let m = g.edge_count();
    let is_proper = |h: &Digraph| h.edge_count() < m || h.order() < n;

    let comps = weak_components(g);
    if comps.len() > 1 || (comps.len() == 1 && comps[0].len() < n) {
        for c in &comps {
            let h = g.induced(c);
            if is_dense(h.edge_count(), h.order(), d) && is_proper(&h) {
                return Ok(Some(h));
            }
        }
    }

    let support = g.support();
    if support.len() <= budget.exact_vertex_limit.min(MAX_EXACT) {
        return Ok(exact_search(g, &support, d).filter(|h| is_proper(h)));
    }

    let dec = decompose_into_cycles(g).map_err(|_| DensityError::NotEulerian)?;
    if dec.len() <= budget.decomposition_subset_limit {
        if let Some(h) = cycle_subsets(g, &dec, d) {
            return Ok(Some(h));
        }
    }
    Ok(single_vertex_probes(g, &dec, &support, d, budget.max_probes))
}

/// Repeatedly replaces `g` by a dense proper Eulerian subgraph until the
/// bounded search finds none.
pub fn extract_d_full(g: &Digraph, d: f64, budget: &SearchBudget) -> Result<Digraph, DensityError> {
    if !g.is_eulerian() {
        return Err(DensityError::NotEulerian);
    }
    if !is_dense(g.edge_count(), g.order(), d) {
        return Err(DensityError::DensityTooLow {
            edges: g.edge_count(),
            vertices: g.order(),
            d,
        });
    }
    let mut h = g.clone();
    while let Some(next) = find_dense_eulerian_subgraph(&h, d, budget)? {
        h = next;
    }
    Ok(h)
}

fn exact_search(g: &Digraph, support: &[usize], d: f64) -> Option<Digraph> {
    let s = support.len();
    let mut masks: Vec<u32> = (1u32..(1u32 << s)).filter(|x| x.count_ones() >= 2).collect();
    masks.sort_by_key(|x| (x.count_ones(), *x));
    for mask in masks {
        let u: Vec<usize> = (0..s).filter(|&i| mask >> i & 1 == 1).map(|i| support[i]).collect();
        if u.len() == s {
            // the largest proper Eulerian subgraph misses exactly a shortest cycle
            let c = shortest_cycle(g)?;
            let cut: Vec<(usize, usize)> = crate::cycles::cycle_edges(&c).collect();
            let h = g
                .filter_edges(|_, a, b| !cut.contains(&(a, b)))
                .without_isolated();
            return is_dense(h.edge_count(), h.order(), d).then_some(h);
        }
        if ((u.len() - 1) as f64) * d > induced_edge_count(g, &u) as f64 {
            continue;
        }
        let h = max_eulerian_subgraph(&g.induced(&u));
        if h.edge_count() as f64 >= (u.len() - 1) as f64 * d && h.edge_count() > 0 {
            return Some(h.without_isolated());
        }
    }
    None
}

fn induced_edge_count(g: &Digraph, u: &[usize]) -> usize {
    let inside = crate::graph::mask_of(g.id_bound(), u);
    u.iter()
        .map(|&x| g.out_neighbors(x).iter().filter(|&&y| inside[y]).count())
        .sum()
}

/// Shortest directed cycle, lexicographically first among shortest by start.
pub(crate) fn shortest_cycle(g: &Digraph) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    let n = g.id_bound();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for s in g.vertices() {
        if g.out_degree(s) == 0 {
            continue;
        }
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        let limit = best.as_ref().map_or(usize::MAX, |b| b.len());
        'bfs: while let Some(x) = queue.pop_front() {
            if dist[x] + 1 >= limit {
                break;
            }
            for &y in g.out_neighbors(x) {
                if y == s {
                    let mut c = vec![x];
                    let mut cur = x;
                    while cur != s {
                        cur = parent[cur];
                        c.push(cur);
                    }
                    c.reverse();
                    best = Some(c);
                    break 'bfs;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
    }
    best
}

/// Largest Eulerian subgraph of `g`: delete a minimum set of edges whose
/// removal balances every vertex. Deleting edge set `Y` balances `g` iff
/// `out_Y(v) - in_Y(v) = out(v) - in(v)` for all `v`, i.e. `Y` is a flow
/// with those supplies; minimum `|Y|` is a min-cost flow with unit costs.
pub(crate) fn max_eulerian_subgraph(g: &Digraph) -> Digraph {
    let n = g.id_bound();
    let mut net = FlowNet::new(n + 2);
    let (src, snk) = (n, n + 1);
    let mut edge_arc = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        edge_arc.push(net.add(u, v, 1, 1));
    }
    let mut need = 0i64;
    for v in g.vertices() {
        let b = g.out_degree(v) as i64 - g.in_degree(v) as i64;
        if b > 0 {
            net.add(src, v, b, 0);
            need += b;
        } else if b < 0 {
            net.add(v, snk, -b, 0);
        }
    }
    if need == 0 {
        return g.clone();
    }
    net.min_cost_flow(src, snk);
    g.filter_edges(|e, _, _| net.flow(edge_arc[e]) == 0)
}

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    fn flow(&self, arc: usize) -> i64 {
        self.cap[arc ^ 1]
    }

    /// Successive shortest paths with Bellman-Ford (queue based).
    fn min_cost_flow(&mut self, s: usize, t: usize) {
        let n = self.head.len();
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            let mut queue = std::collections::VecDeque::from([s]);
            dist[s] = 0;
            while let Some(x) = queue.pop_front() {
                queued[x] = false;
                for &a in &self.head[x] {
                    let y = self.to[a];
                    if self.cap[a] > 0 && dist[x] + self.cost[a] < dist[y] {
                        dist[y] = dist[x] + self.cost[a];
                        via[y] = a;
                        if !queued[y] {
                            queued[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                return;
            }
            let mut push = i64::MAX;
            let mut x = t;
            while x != s {
                let a = via[x];
                push = push.min(self.cap[a]);
                x = self.to[a ^ 1];
            }
            let mut x = t;
            while x != s {
                let a = via[x];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                x = self.to[a ^ 1];
            }
        }
    }
}

/// Dense unions of decomposition cycles other than all of them; fewest
/// vertices first, then lowest subset mask.
fn cycle_subsets(g: &Digraph, dec: &CycleDecomposition, d: f64) -> Option<Digraph> {
    let k = dec.len();
    let n = g.id_bound();
    let mut count = vec![0u32; n];
    let mut best: Option<(usize, u32)> = None;
    for mask in 1u32..(1u32 << k) - 1 {
        let mut edges = 0;
        let mut touched = Vec::new();
        for (i, c) in dec.cycles.iter().enumerate() {
            if mask >> i & 1 == 1 {
                edges += c.len();
                for &v in c {
                    if count[v] == 0 {
                        touched.push(v);
                    }
                    count[v] += 1;
                }
            }
        }
        let verts = touched.len();
        for v in touched {
            count[v] = 0;
        }
        if is_dense(edges, verts, d) && best.is_none_or(|(bv, _)| verts < bv) {
            best = Some((verts, mask));
        }
    }
    let (_, mask) = best?;
    let keep: Vec<(usize, usize)> = dec
        .cycles
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .flat_map(|(_, c)| crate::cycles::cycle_edges(c).collect::<Vec<_>>())
        .collect();
    let mut keep_mask = vec![false; g.edge_count()];
    for (u, v) in keep {
        if let Some(e) = g.edge_id(u, v) {
            keep_mask[e] = true;
        }
    }
    Some(g.restrict_edges(&keep_mask).without_isolated())
}

fn single_vertex_probes(
    g: &Digraph,
    dec: &CycleDecomposition,
    support: &[usize],
    d: f64,
    max_probes: usize,
) -> Option<Digraph> {
    let n = g.id_bound();
    let m = g.edge_count();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in dec.cycles.iter().enumerate() {
        for &v in c {
            through[v].push(i);
        }
    }
    let mut order: Vec<usize> = support.to_vec();
    order.sort_by_key(|&v| (g.out_degree(v), v));
    if max_probes > 0 {
        order.truncate(max_probes);
    }
    let mut lost = vec![0usize; n];
    let mut dropped = vec![false; dec.len()];
    for x in order {
        let mut removed = 0;
        let mut touched = Vec::new();
        for &ci in &through[x] {
            dropped[ci] = true;
            removed += dec.cycles[ci].len();
            for &v in &dec.cycles[ci] {
                if lost[v] == 0 {
                    touched.push(v);
                }
                lost[v] += 1;
            }
        }
        let isolated = touched.iter().filter(|&&v| lost[v] == through[v].len()).count();
        let remaining = support.len() - isolated;
        let hit = if is_dense(m - removed, remaining, d) {
            let owner = dec.edge_owners(g).ok()?;
            let rest = g.filter_edges(|e, _, _| !dropped[owner[e]]);
            weak_components(&rest)
                .into_iter()
                .map(|c| rest.induced(&c))
                .find(|h| is_dense(h.edge_count(), h.order(), d))
        } else {
            None
        };
        for &ci in &through[x] {
            dropped[ci] = false;
        }
        for v in touched {
            lost[v] = 0;
        }
        if hit.is_some() {
            return hit;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    fn bowtie() -> Digraph {
        Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn complete_four_gives_complete_three() {
        let b = SearchBudget::default();
        let h = find_dense_eulerian_subgraph(&dk(4), 3.0, &b).unwrap().unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(h.edge_count(), 6);
        let full = extract_d_full(&dk(4), 3.0, &b).unwrap();
        assert_eq!(full.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(full.edge_count(), 6);
    }

    #[test]
    fn triangle_is_already_full() {
        let t3 = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let b = SearchBudget::default();
        assert!(find_dense_eulerian_subgraph(&t3, 1.0, &b).unwrap().is_none());
        assert_eq!(extract_d_full(&t3, 1.0, &b).unwrap().edge_count(), 3);
    }

    #[test]
    fn bowtie_gives_triangle() {
        let b = SearchBudget::default();
        let h = find_dense_eulerian_subgraph(&bowtie(), 1.0, &b).unwrap().unwrap();
        assert_eq!(h.edge_list(), vec![(0, 1), (1, 2), (2, 0)]);
        let full = extract_d_full(&bowtie(), 1.0, &b).unwrap();
        assert_eq!(full.edge_list(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn non_exact_strategies_find_the_triangle() {
        let b = SearchBudget {
            exact_vertex_limit: 0,
            ..SearchBudget::default()
        };
        let h = find_dense_eulerian_subgraph(&bowtie(), 1.0, &b).unwrap().unwrap();
        assert_eq!(h.order(), 3);
        let probes_only = SearchBudget {
            exact_vertex_limit: 0,
            decomposition_subset_limit: 0,
            max_probes: 0,
        };
        let h = find_dense_eulerian_subgraph(&bowtie(), 1.0, &probes_only).unwrap().unwrap();
        assert_eq!(h.order(), 3);
    }

    #[test]
    fn errors() {
        let p = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let b = SearchBudget::default();
        assert_eq!(find_dense_eulerian_subgraph(&p, 1.0, &b), Err(DensityError::NotEulerian));
        let t3 = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            extract_d_full(&t3, 2.0, &b),
            Err(DensityError::DensityTooLow { .. })
        ));
    }

    #[test]
    fn flow_balances() {
        // triangle plus two edges into 3, which must both go
        let g = Digraph::new(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (0, 3)]).unwrap();
        let h = max_eulerian_subgraph(&g);
        assert!(h.is_eulerian());
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn shortest_cycle_finds_digon() {
        let g = Digraph::new(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)]).unwrap();
        assert_eq!(shortest_cycle(&g), Some(vec![2, 3]));
    }
}
