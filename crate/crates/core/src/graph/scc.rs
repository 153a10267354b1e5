use std::collections::BTreeSet;

use super::Digraph;

/// Strongly connected components of the live vertices with the condensation.
///
/// Components are numbered in discovery order of their lowest vertex, and
/// each component's vertex list is sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<Vec<usize>>,
    /// `component_of[v]` is `None` for dead vertices.
    pub component_of: Vec<Option<usize>>,
    pub condensation_edges: BTreeSet<(usize, usize)>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components without incoming condensation edges.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.len()];
        for &(_, b) in &self.condensation_edges {
            has_in[b] = true;
        }
        (0..self.len()).filter(|&c| !has_in[c]).collect()
    }

    /// Components without outgoing condensation edges.
    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.len()];
        for &(a, _) in &self.condensation_edges {
            has_out[a] = true;
        }
        (0..self.len()).filter(|&c| !has_out[c]).collect()
    }
}

/// Tarjan's algorithm, iterative, over live vertices.
pub fn sccs(g: &Digraph) -> SccPartition {
    let n = g.id_bound();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut next = 0usize;
    // (vertex, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in g.vertices() {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.out_neighbors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let x = stack.pop().expect("tarjan stack underflow");
                    on_stack[x] = false;
                    comp.push(x);
                    if x == v {
                        break;
                    }
                }
                comp.sort_unstable();
                raw.push(comp);
            }
        }
    }

    raw.sort_by_key(|c| c[0]);
    let mut component_of = vec![None; n];
    for (i, c) in raw.iter().enumerate() {
        for &v in c {
            component_of[v] = Some(i);
        }
    }
    let mut condensation_edges = BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (component_of[u], component_of[v]);
        if let (Some(a), Some(b)) = (a, b) {
            if a != b {
                condensation_edges.insert((a, b));
            }
        }
    }
    SccPartition {
        components: raw,
        component_of,
        condensation_edges,
    }
}

/// True when every ordered pair of live vertices is joined by a path.
/// The empty graph and a single vertex count as strongly connected.
pub fn is_strongly_connected(g: &Digraph) -> bool {
    let Some(root) = g.vertices().next() else {
        return true;
    };
    let fwd = reach_count(g, root, false);
    let order = g.order();
    fwd == order && reach_count(g, root, true) == order
}

fn reach_count(g: &Digraph, root: usize, backwards: bool) -> usize {
    let mut seen = vec![false; g.id_bound()];
    seen[root] = true;
    let mut stack = vec![root];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        let nbrs = if backwards {
            g.in_neighbors(v)
        } else {
            g.out_neighbors(v)
        };
        for &w in nbrs {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

/// Connected components of the underlying undirected graph, restricted to
/// vertices with at least one edge. Sorted by lowest vertex; each sorted.
///
/// For an Eulerian digraph these coincide with the strongly connected
/// components that carry edges.
pub fn weak_components(g: &Digraph) -> Vec<Vec<usize>> {
    let n = g.id_bound();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in g.support() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in g.out_neighbors(v).iter().chain(g.in_neighbors(v)) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Live vertices all lie in one weak component with edges (or the graph is
/// a single vertex).
pub fn is_weakly_connected(g: &Digraph) -> bool {
    let order = g.order();
    if order <= 1 {
        return true;
    }
    let comps = weak_components(g);
    comps.len() == 1 && comps[0].len() == order
}
