use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} is not present in the graph")]
    MissingVertex(usize),
    #[error("no vertex of the target set is reachable")]
    Unreachable,
}

/// Simple directed graph over the dense id space `0..n`.
///
/// Adjacency is stored in CSR form with both directions, successor and
/// predecessor lists sorted ascending. Vertices can be masked out (dead)
/// without renumbering, so every subgraph shares the id space of its
/// parent and paths found in a subgraph are valid ids in the parent.
///
/// Edge ids are positions in the out-CSR and are only stable for the
/// graph that produced them.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    alive: Vec<bool>,
    out_off: Vec<usize>,
    out_adj: Vec<usize>,
    in_off: Vec<usize>,
    in_adj: Vec<usize>,
}

impl Digraph {
    /// Validating constructor: rejects loops, duplicate ordered pairs and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unique(vec![true; n], sorted))
    }

    /// Empty graph on `n` live vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(vec![true; n], Vec::new())
    }

    fn from_sorted_unique(alive: Vec<bool>, edges: Vec<(usize, usize)>) -> Self {
        let n = alive.len();
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for &(u, v) in &edges {
            out_off[u + 1] += 1;
            in_off[v + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        let out_adj: Vec<usize> = edges.iter().map(|&(_, v)| v).collect();
        let mut in_adj = vec![0usize; edges.len()];
        let mut fill = in_off.clone();
        // edges are sorted by (u, v), so each predecessor list fills in ascending order
        for &(u, v) in &edges {
            in_adj[fill[v]] = u;
            fill[v] += 1;
        }
        Digraph {
            alive,
            out_off,
            out_adj,
            in_off,
            in_adj,
        }
    }

    /// Size of the id space (live and dead vertices).
    pub fn id_bound(&self) -> usize {
        self.alive.len()
    }

    /// Number of live vertices.
    pub fn order(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| a.then_some(v))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[self.out_off[v]..self.out_off[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[self.in_off[v]..self.in_off[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_off[v + 1] - self.out_off[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_off[v + 1] - self.in_off[v]
    }

    /// Edge ids of `v`'s out-edges, aligned with [`Digraph::out_neighbors`].
    pub fn out_edge_ids(&self, v: usize) -> std::ops::Range<usize> {
        self.out_off[v]..self.out_off[v + 1]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.id_bound() && self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// Id of edge `(u, v)`, if present.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.id_bound() {
            return None;
        }
        self.out_neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.out_off[u] + i)
    }

    /// Tail of edge `e` (O(log n)).
    pub fn edge_tail(&self, e: usize) -> usize {
        self.out_off.partition_point(|&o| o <= e) - 1
    }

    pub fn edge_head(&self, e: usize) -> usize {
        self.out_adj[e]
    }

    /// All edges in ascending `(u, v)` order; the position is the edge id.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.id_bound()).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Every vertex has equal in- and out-degree. Connectivity is not required.
    pub fn is_eulerian(&self) -> bool {
        (0..self.id_bound()).all(|v| self.in_degree(v) == self.out_degree(v))
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.id_bound())
            .map(|v| self.out_degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Live vertices with at least one incident edge.
    pub fn support(&self) -> Vec<usize> {
        self.vertices()
            .filter(|&v| self.out_degree(v) + self.in_degree(v) > 0)
            .collect()
    }

    /// Edges divided by live vertices; zero for an empty vertex set.
    pub fn average_degree(&self) -> f64 {
        let n = self.order();
        if n == 0 {
            0.0
        } else {
            self.edge_count() as f64 / n as f64
        }
    }

    /// Keeps the edges for which `keep(edge_id, u, v)` holds; liveness unchanged.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize, usize) -> bool) -> Digraph {
        let edges = self
            .edges()
            .enumerate()
            .filter(|&(e, (u, v))| keep(e, u, v))
            .map(|(_, uv)| uv)
            .collect();
        Self::from_sorted_unique(self.alive.clone(), edges)
    }

    /// Keeps edges whose id is marked in `mask`.
    pub fn restrict_edges(&self, mask: &[bool]) -> Digraph {
        self.filter_edges(|e, _, _| mask[e])
    }

    /// Masks out `removed` together with every incident edge.
    pub fn remove_vertices(&self, removed: &[usize]) -> Digraph {
        let mut alive = self.alive.clone();
        for &v in removed {
            if v < alive.len() {
                alive[v] = false;
            }
        }
        self.with_alive(alive)
    }

    /// Induced subgraph on `keep`; every other vertex is masked out.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut alive = vec![false; self.id_bound()];
        for &v in keep {
            if self.is_alive(v) {
                alive[v] = true;
            }
        }
        self.with_alive(alive)
    }

    fn with_alive(&self, alive: Vec<bool>) -> Digraph {
        let edges = self
            .edges()
            .filter(|&(u, v)| alive[u] && alive[v])
            .collect();
        Self::from_sorted_unique(alive, edges)
    }

    /// Masks out live vertices without incident edges.
    pub fn without_isolated(&self) -> Digraph {
        let keep = self.support();
        self.induced(&keep)
    }

    /// Same vertices, every edge reversed.
    pub fn transpose(&self) -> Digraph {
        let mut edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (v, u)).collect();
        edges.sort_unstable();
        Self::from_sorted_unique(self.alive.clone(), edges)
    }

    /// Adds edges (already validated against loops/duplicates by the caller).
    pub(crate) fn with_edges(alive: Vec<bool>, mut edges: Vec<(usize, usize)>) -> Digraph {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unique(alive, edges)
    }

    pub(crate) fn alive_mask(&self) -> &[bool] {
        &self.alive
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("order", &self.order())
            .field("edges", &self.edge_list())
            .finish()
    }
}

/// Convenience wrapper around [`Digraph::new`].
pub fn build_digraph(n: usize, edges: &[(usize, usize)]) -> Result<Digraph, GraphError> {
    Digraph::new(n, edges)
}

/// Membership mask over a graph's id space.
pub(crate) fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        if v < n {
            m[v] = true;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> Digraph {
        Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn builds_triangle_and_digon() {
        let g = t3();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.in_neighbors(0), &[2]);
        let digon = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(digon.has_edge(0, 1) && digon.has_edge(1, 0));
    }

    #[test]
    fn rejects_invalid_edges() {
        assert_eq!(Digraph::new(2, &[(0, 0)]), Err(GraphError::LoopEdge(0)));
        assert_eq!(
            Digraph::new(2, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Digraph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn eulerian_flag() {
        assert!(t3().is_eulerian());
        let path = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!path.is_eulerian());
        let two = Digraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(two.is_eulerian());
    }

    #[test]
    fn in_adjacency_is_transpose() {
        let g = Digraph::new(4, &[(0, 1), (0, 2), (3, 1), (2, 1), (1, 0)]).unwrap();
        for u in 0..4 {
            for &v in g.out_neighbors(u) {
                assert!(g.in_neighbors(v).contains(&u));
            }
            assert!(g.in_neighbors(u).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(g.transpose().transpose(), g);
    }

    #[test]
    fn edge_ids_round_trip() {
        let g = Digraph::new(4, &[(0, 1), (0, 2), (3, 1), (2, 1), (1, 0)]).unwrap();
        for (e, (u, v)) in g.edges().enumerate() {
            assert_eq!(g.edge_id(u, v), Some(e));
            assert_eq!(g.edge_tail(e), u);
            assert_eq!(g.edge_head(e), v);
        }
    }

    #[test]
    fn vertex_removal_keeps_ids() {
        let g = t3().remove_vertices(&[1]);
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_list(), vec![(2, 0)]);
        assert!(!g.is_alive(1));
        assert_eq!(g.id_bound(), 3);
    }
}
