use rand::RngCore;

use crate::config::PipelineConfig;
use crate::cycles::{decompose_into_cycles, remove_cycles_through, CycleDecomposition};
use crate::graph::{
    bfs_to_mask, check_path, greedy_longest_path, is_strongly_connected, is_weakly_connected, mask_of, path_to_set, sccs,
    weak_components, BranchTag, Digraph, PathWitness,
};
use crate::stitch::Solver;

use super::{is_dense, layered_peel_path, BoundParams, DensityError, Thresholds};

#[derive(Debug, Clone, PartialEq)]
pub enum DichotomyOutcome {
    /// `G - S` is strongly connected.
    Certified,
    Path(PathWitness),
}

#[derive(Debug, Clone)]
pub struct Dichotomy {
    pub outcome: DichotomyOutcome,
    /// `key=value` notes: the branch taken and the sizes it worked with.
    pub diagnostics: Vec<(String, String)>,
}

impl Dichotomy {
    pub fn path(&self) -> Option<&PathWitness> {
        match &self.outcome {
            DichotomyOutcome::Path(p) => Some(p),
            DichotomyOutcome::Certified => None,
        }
    }

    pub fn branch(&self) -> Option<&str> {
        self.diagnostics
            .iter()
            .find(|(k, _)| k == "branch")
            .map(|(_, v)| v.as_str())
    }
}

/// Either certifies that `G - S` is strongly connected or builds a path
/// from `v` following the separator argument.
///
/// For `S = {v}`: with `T` a source and `R` a reachable sink component of
/// `G - v`, and `G'` the graph left after removing the decomposition
/// cycles through `v`, either few edges run from `v` into `T` (then the
/// densest component of `G'[T]` is entered and searched recursively), or a
/// component `W'` of `G'[T]` rich in out-neighbours of `v` is crossed by a
/// layered-peel path ending at `w`, a shortest connector runs from `w` to
/// the densest component of `G'[R]`, and a recursive path continues there.
/// For larger `S` the same stitching runs over the components of `G'`,
/// after a low-degree start has been handled by entering the densest
/// component left when the cycles through `v` are removed.
pub fn connectivity_or_longpath<R: RngCore>(
    g: &Digraph,
    v: usize,
    s: &[usize],
    params: &BoundParams,
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<Dichotomy, DensityError> {
    let mut solver = Solver::new(cfg, rng);
    solver.split_at_separator(g, v, s, params, 0)
}

struct Notes(Vec<(String, String)>);

impl Notes {
    fn add(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn path(mut self, branch: &str, p: PathWitness) -> Dichotomy {
        self.add("branch", branch);
        self.add("length", p.len());
        Dichotomy {
            outcome: DichotomyOutcome::Path(p),
            diagnostics: self.0,
        }
    }
}

/// Component with the highest average degree in `host`, ties to the first.
fn densest(host: &Digraph, comps: &[Vec<usize>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in comps.iter().enumerate() {
        if c.len() < 2 {
            continue;
        }
        let avg = host.induced(c).edge_count() as f64 / c.len() as f64;
        if best.is_none_or(|(_, b)| avg > b) {
            best = Some((i, avg));
        }
    }
    best.map(|(i, _)| i)
}

impl Solver<'_> {
    pub(crate) fn split_at_separator(
        &mut self,
        g: &Digraph,
        v: usize,
        s: &[usize],
        params: &BoundParams,
        depth: usize,
    ) -> Result<Dichotomy, DensityError> {
        if !g.is_eulerian() {
            return Err(DensityError::NotEulerian);
        }
        if !g.is_alive(v) || !s.contains(&v) {
            return Err(DensityError::PreconditionViolated(format!("{v} must be a vertex in S")));
        }
        if !is_weakly_connected(g) {
            return Err(DensityError::PreconditionViolated("graph is not connected".into()));
        }
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        let th = Thresholds::new(params, g.order(), &self.cfg.overrides);
        if s.len() > 1 && s.len() as f64 > th.separator_size {
            return Err(DensityError::SizeOfS {
                size: s.len(),
                max: th.separator_size,
            });
        }
        let mut notes = Notes(Vec::new());
        notes.add("s", s.len());
        if is_strongly_connected(&g.remove_vertices(&s)) {
            notes.add("branch", "certified");
            return Ok(Dichotomy {
                outcome: DichotomyOutcome::Certified,
                diagnostics: notes.0,
            });
        }
        let dec = decompose_into_cycles(g).map_err(|_| DensityError::NotEulerian)?;
        if s.len() == 1 {
            self.split_at_vertex(g, v, &dec, params, &th, depth, notes)
        } else {
            self.split_at_set(g, v, &s, &dec, params, &th, depth, notes)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split_at_vertex(
        &mut self,
        g: &Digraph,
        v: usize,
        dec: &CycleDecomposition,
        params: &BoundParams,
        th: &Thresholds,
        depth: usize,
        mut notes: Notes,
    ) -> Result<Dichotomy, DensityError> {
        let part = sccs(&g.remove_vertices(&[v]));
        let k = part.len();
        let mut touched = vec![false; k];
        for &(a, b) in &part.condensation_edges {
            touched[a] = true;
            touched[b] = true;
        }
        if let Some(i) = (0..k).find(|&i| !touched[i]) {
            // G[T + v] and G - T are both Eulerian and split the edges
            let witness = format!("component {:?} of G - {v} has no edge to the rest", part.components[i]);
            if self.cfg.strict_fullness {
                return Err(DensityError::NotDFull(witness));
            }
            notes.add("not_d_full", witness);
            let rest = g.remove_vertices(&[v]);
            return Ok(self.fallback(g, v, &rest, params, depth, notes));
        }
        let t = part.sources()[0];
        // first sink reachable from t in the condensation
        let mut seen = vec![false; k];
        let mut stack = vec![t];
        seen[t] = true;
        let mut r = t;
        while let Some(x) = stack.pop() {
            let succ: Vec<usize> = part
                .condensation_edges
                .range((x, 0)..(x + 1, 0))
                .map(|&(_, b)| b)
                .collect();
            if succ.is_empty() {
                r = x;
                break;
            }
            for y in succ.into_iter().rev() {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let t_set = &part.components[t];
        let r_set = &part.components[r];
        let gp = remove_cycles_through(g, dec, &[v], true).map_err(|_| DensityError::NotEulerian)?;
        self.check_components(&gp, params.d, &mut notes)?;

        let t_mask = mask_of(g.id_bound(), t_set);
        let f = g.out_neighbors(v).iter().filter(|&&x| t_mask[x]).count();
        notes.add("f", f);
        notes.add("t", t_set.len());
        notes.add("r", r_set.len());
        let t_comps = weak_components(&gp.induced(t_set));
        if f as f64 <= t_set.len() as f64 / (th.gamma * th.gamma) {
            let Some(i) = densest(&gp, &t_comps) else {
                return Ok(self.fallback(g, v, &gp, params, depth, notes));
            };
            notes.add("t_prime", t_comps[i].len());
            return Ok(match self.enter_and_recurse(g, v, &gp, &t_comps[i], params.d, depth) {
                Some(p) => notes.path("sparse_source", p),
                None => self.fallback(g, v, &gp, params, depth, notes),
            });
        }
        let r_comps = weak_components(&gp.induced(r_set));
        let w = self.rich_component(g, v, &gp, &t_comps, th);
        let u = densest(&gp, &r_comps);
        match (w, u) {
            (Some(w), Some(u)) => Ok(self.three_part(g, v, &gp, &t_comps[w], &r_comps[u], params, depth, notes)),
            _ => Ok(self.fallback(g, v, &gp, params, depth, notes)),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split_at_set(
        &mut self,
        g: &Digraph,
        v: usize,
        s: &[usize],
        dec: &CycleDecomposition,
        params: &BoundParams,
        th: &Thresholds,
        depth: usize,
        mut notes: Notes,
    ) -> Result<Dichotomy, DensityError> {
        notes.add("degree", g.out_degree(v));
        if (g.out_degree(v) as f64) < th.heavy {
            let gt = remove_cycles_through(g, dec, &[v], true).map_err(|_| DensityError::NotEulerian)?;
            let comps = weak_components(&gt);
            let found = densest(&gt, &comps).and_then(|i| self.enter_and_recurse(g, v, &gt, &comps[i], params.d, depth));
            return Ok(match found {
                Some(p) => notes.path("low_degree", PathWitness::new(p.vertices, BranchTag::LowDegree)),
                None => self.fallback(g, v, &gt, params, depth, notes),
            });
        }
        let gp = remove_cycles_through(g, dec, s, true).map_err(|_| DensityError::NotEulerian)?;
        self.check_components(&gp, params.d, &mut notes)?;
        let comps = weak_components(&gp);
        let Some(w) = self.rich_component(g, v, &gp, &comps, th) else {
            return Ok(self.fallback(g, v, &gp, params, depth, notes));
        };
        let others: Vec<Vec<usize>> = comps
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != w)
            .map(|(_, c)| c.clone())
            .collect();
        match densest(&gp, &others) {
            Some(u) => Ok(self.three_part(g, v, &gp, &comps[w], &others[u], params, depth, notes)),
            None => Ok(self.fallback(g, v, &gp, params, depth, notes)),
        }
    }

    /// A component of `G'` that is itself dense refutes fullness: an error
    /// in strict mode, otherwise a note.
    fn check_components(&self, gp: &Digraph, d: f64, notes: &mut Notes) -> Result<(), DensityError> {
        for c in weak_components(gp) {
            let e = gp.induced(&c).edge_count();
            if is_dense(e, c.len(), d) {
                let witness = format!("component {c:?} has {e} edges on {} vertices", c.len());
                if self.cfg.strict_fullness {
                    return Err(DensityError::NotDFull(witness));
                }
                notes.add("not_d_full", witness);
                return Ok(());
            }
        }
        Ok(())
    }

    /// Densest component in which at least a `gamma^-2 / 2` fraction of the
    /// vertices are out-neighbours of `v`.
    fn rich_component(
        &self,
        g: &Digraph,
        v: usize,
        gp: &Digraph,
        comps: &[Vec<usize>],
        th: &Thresholds,
    ) -> Option<usize> {
        let out = mask_of(g.id_bound(), g.out_neighbors(v));
        let rich: Vec<Vec<usize>> = comps
            .iter()
            .filter(|c| {
                let hits = c.iter().filter(|&&x| out[x]).count();
                hits > 0 && hits as f64 >= c.len() as f64 / (2.0 * th.gamma * th.gamma)
            })
            .cloned()
            .collect();
        let i = densest(gp, &rich)?;
        comps.iter().position(|c| *c == rich[i])
    }

    /// `v -> P1 -> P2 -> P3`: layered peel inside `W'` from an out-neighbour
    /// of `v` to `w`, shortest `W' -> U` connector in `G - v`, recursion in `U`.
    #[allow(clippy::too_many_arguments)]
    fn three_part(
        &mut self,
        g: &Digraph,
        v: usize,
        gp: &Digraph,
        w_set: &[usize],
        u_set: &[usize],
        params: &BoundParams,
        depth: usize,
        mut notes: Notes,
    ) -> Dichotomy {
        let n = g.id_bound();
        let b: Vec<usize> = g
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(|x| w_set.binary_search(x).is_ok())
            .collect();
        notes.add("w_prime", w_set.len());
        notes.add("b", b.len());
        notes.add("u", u_set.len());
        let Some(p2) = bfs_to_mask(&g.remove_vertices(&[v]), w_set, &mask_of(n, u_set)) else {
            return self.fallback(g, v, gp, params, depth, notes);
        };
        let (w, u) = (p2[0], p2[p2.len() - 1]);
        let t_cap = (2.0 * params.phi()).ceil().max(2.0) as usize;
        let p1 = match layered_peel_path(&gp.induced(w_set), w, &b, params.d, t_cap, true) {
            Ok(p) => p,
            Err(_) => return self.fallback(g, v, gp, params, depth, notes),
        };
        notes.add("p1", p1.path.len());
        notes.add("p1_bound", format!("{:.4}", p1.bound));
        notes.add("p2", p2.len() - 1);
        let p3 = self.recurse(&gp.induced(u_set), u, params.d, depth + 1);
        notes.add("p3", p3.len());
        let mut path = vec![v];
        path.extend_from_slice(&p1.path.vertices);
        path.extend_from_slice(&p2[1..]);
        path.extend_from_slice(&p3.vertices[1..]);
        if !check_path(g, &path) {
            notes.add("stitch", "invalid");
            return self.fallback(g, v, gp, params, depth, notes);
        }
        notes.path("three_part", PathWitness::new(path, BranchTag::Separator))
    }

    /// Shortest path from `v` into `comp`, then a recursive path inside
    /// `host[comp]`.
    fn enter_and_recurse(
        &mut self,
        g: &Digraph,
        v: usize,
        host: &Digraph,
        comp: &[usize],
        d: f64,
        depth: usize,
    ) -> Option<PathWitness> {
        let prefix = path_to_set(g, v, comp).ok()?;
        let x = prefix.end()?;
        let tail = self.recurse(&host.induced(comp), x, d, depth + 1);
        let p = prefix.join(&tail.vertices);
        check_path(g, &p.vertices).then_some(PathWitness::new(p.vertices, BranchTag::LowDegree))
    }

    /// Best effort when the construction's preconditions do not hold at
    /// this size: enter the densest component of `host` and recurse.
    fn fallback(
        &mut self,
        g: &Digraph,
        v: usize,
        host: &Digraph,
        params: &BoundParams,
        depth: usize,
        notes: Notes,
    ) -> Dichotomy {
        let comps = weak_components(host);
        let found = densest(host, &comps).and_then(|i| self.enter_and_recurse(g, v, host, &comps[i], params.d, depth));
        let greedy = PathWitness::new(greedy_longest_path(g, v, self.cfg.greedy_budget), BranchTag::Greedy);
        let p = match found {
            Some(p) if p.len() >= greedy.len() => p,
            _ => greedy,
        };
        notes.path("fallback", p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(g: &Digraph, v: usize, s: &[usize], d: f64) -> Result<Dichotomy, DensityError> {
        let params = BoundParams::new(0.01, 1.0 / 40.0, d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        connectivity_or_longpath(g, v, s, &params, &PipelineConfig::default(), &mut rng)
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    #[test]
    fn complete_is_certified() {
        let r = run(&dk(4), 0, &[0], 3.0).unwrap();
        assert_eq!(r.outcome, DichotomyOutcome::Certified);
    }

    #[test]
    fn cycle_gives_the_forced_path() {
        let e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = Digraph::new(5, &e).unwrap();
        let r = run(&g, 0, &[0], 1.0).unwrap();
        assert_eq!(r.path().unwrap().vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn bowtie_path_from_centre() {
        let g = Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let r = run(&g, 0, &[0], 1.0).unwrap();
        let p = r.path().unwrap();
        assert!(check_path(&g, &p.vertices));
        assert_eq!(p.start(), Some(0));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn rejects_large_separator() {
        let r = run(&dk(4), 0, &[0, 1, 2], 3.0);
        assert!(matches!(r, Err(DensityError::SizeOfS { .. })));
    }
}
