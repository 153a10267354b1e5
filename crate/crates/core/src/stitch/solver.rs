use rand::RngCore;

use crate::config::PipelineConfig;
use crate::cycles::{long_cycle_bounded_degree, min_outdegree_cycle, LongCycleParams};
use crate::density::{extract_d_full, BoundParams, DichotomyOutcome, Thresholds};
use crate::goodpath::{find_good_path, GoodPathReport};
use crate::graph::{
    check_path, greedy_longest_path, is_weakly_connected, path_to_set, weak_components, BranchTag, Digraph, PathWitness,
};

use super::detour::segment_of;
use super::{
    build_detour_set, extract_k, realize_fake_edges, reroute_avoiding, rewire, strip_problematic, DetourSet,
    RewiredGraph, StitchError, Trace,
};

/// Result of [`long_path_from`].
#[derive(Debug, Clone)]
pub struct LongPathOutcome {
    pub path: PathWitness,
    /// The path reaches `ceil(phi(d))` and came out of a branch of the
    /// construction rather than the greedy fallback.
    pub certified: bool,
    /// Measured average degree `e / n`.
    pub d: f64,
    pub phi: f64,
    pub target: usize,
    /// The recursion depth or call limit cut some branch short.
    pub truncated: bool,
    pub trace: Trace,
}

/// A directed path from `v` in a connected Eulerian digraph.
///
/// Measures `d = e(G)/|G|`, moves into a d-full subgraph and tries, in
/// order: a long cycle reached from the entry point and wound around, the
/// single-vertex separator split, and a random initial segment finished by
/// stripping, rewiring and recursing in the Eulerian core. Recursive calls
/// run with average degree at most `d - 1`. Whenever the guarantee is
/// vacuous or a branch falls short, the longer of the best branch and a
/// budgeted greedy search is returned.
pub fn long_path_from<R: RngCore>(
    g: &Digraph,
    v: usize,
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<LongPathOutcome, StitchError> {
    cfg.validate().map_err(|e| StitchError::Config(e.to_string()))?;
    if !g.is_alive(v) {
        return Err(StitchError::MissingVertex(v));
    }
    if !g.is_eulerian() {
        return Err(StitchError::NotEulerian);
    }
    if !is_weakly_connected(g) || (g.edge_count() > 0 && g.out_degree(v) == 0) {
        return Err(StitchError::NotConnected);
    }
    let d = if g.order() == 0 { 0.0 } else { g.edge_count() as f64 / g.order() as f64 };
    let mut solver = Solver::new(cfg, rng);
    let (path, certified, phi, target) = if d > 0.0 {
        let params = BoundParams::new(cfg.c, cfg.eps, d).map_err(|e| StitchError::Config(e.to_string()))?;
        let (p, ok) = solver.solve(g, v, d, 0);
        (p, ok, params.phi(), params.target_len())
    } else {
        (PathWitness::trivial(v, BranchTag::Greedy), false, 0.0, 0)
    };
    debug_assert!(check_path(g, &path.vertices) && path.start() == Some(v));
    solver.trace.push(
        "result",
        &[
            ("length", path.len().to_string()),
            ("target", target.to_string()),
            ("certified", certified.to_string()),
            ("calls", solver.calls.to_string()),
        ],
    );
    Ok(LongPathOutcome {
        path,
        certified,
        d,
        phi,
        target,
        truncated: solver.truncated,
        trace: solver.trace,
    })
}

/// Shared state of one pipeline run: configuration, randomness, trace and
/// the call budget.
pub(crate) struct Solver<'a> {
    pub(crate) cfg: &'a PipelineConfig,
    rng: &'a mut dyn RngCore,
    pub(crate) trace: Trace,
    calls: usize,
    truncated: bool,
}

/// Candidate path from the entry vertex of a d-full subgraph.
struct Candidate {
    branch: &'static str,
    path: PathWitness,
}

fn f(x: f64) -> String {
    format!("{x:.4}")
}

impl<'a> Solver<'a> {
    pub(crate) fn new<R: RngCore>(cfg: &'a PipelineConfig, rng: &'a mut R) -> Self {
        Solver {
            cfg,
            rng,
            trace: Trace::default(),
            calls: 0,
            truncated: false,
        }
    }

    fn greedy(&self, g: &Digraph, v: usize) -> PathWitness {
        let mut w = greedy_longest_path(g, v, self.cfg.greedy_budget);
        if w.is_empty() {
            w.push(v);
        }
        PathWitness::new(w, BranchTag::Greedy)
    }

    /// Path from `entry` in `host` for a recursive subproblem. The host need
    /// not be Eulerian or connected; the component of `entry` is solved
    /// with average degree capped at `d_parent - 1`.
    pub(crate) fn recurse(&mut self, host: &Digraph, entry: usize, d_parent: f64, depth: usize) -> PathWitness {
        if !host.is_alive(entry) {
            return PathWitness::trivial(entry, BranchTag::Greedy);
        }
        if host.out_degree(entry) == 0 {
            return PathWitness::trivial(entry, BranchTag::Greedy);
        }
        let Some(comp) = weak_components(host).into_iter().find(|c| c.binary_search(&entry).is_ok()) else {
            return PathWitness::trivial(entry, BranchTag::Greedy);
        };
        let sub = host.induced(&comp);
        if !sub.is_eulerian() {
            self.trace.push("recurse", &[("depth", depth.to_string()), ("eulerian", "false".into())]);
            return self.greedy(host, entry);
        }
        let measured = sub.edge_count() as f64 / sub.order() as f64;
        let d = measured.min(d_parent - 1.0);
        self.trace.push(
            "recurse",
            &[
                ("depth", depth.to_string()),
                ("n", sub.order().to_string()),
                ("m", sub.edge_count().to_string()),
                ("d_measured", f(measured)),
                ("d", f(d)),
            ],
        );
        if d <= 0.0 {
            return self.greedy(&sub, entry);
        }
        self.solve(&sub, entry, d, depth).0
    }

    /// `g` connected Eulerian with `e(g) >= |g| d`.
    fn solve(&mut self, g: &Digraph, v: usize, d: f64, depth: usize) -> (PathWitness, bool) {
        self.calls += 1;
        let params = match BoundParams::new(self.cfg.c, self.cfg.eps, d) {
            Ok(p) => p,
            Err(_) => return (self.greedy(g, v), false),
        };
        let target = params.target_len();
        self.trace.push(
            "solve",
            &[
                ("depth", depth.to_string()),
                ("v", v.to_string()),
                ("n", g.order().to_string()),
                ("m", g.edge_count().to_string()),
                ("d", f(d)),
                ("target", target.to_string()),
            ],
        );
        if depth > self.cfg.recursion_limit || self.calls > self.cfg.max_calls {
            self.truncated = true;
            self.trace.push("limit", &[("depth", depth.to_string()), ("calls", self.calls.to_string())]);
            return (self.greedy(g, v), false);
        }
        if d < self.cfg.d_min {
            self.trace.push("small_d", &[("d", f(d))]);
            return (self.greedy(g, v), false);
        }
        let h = match extract_d_full(g, d, &self.cfg.search) {
            Ok(h) => h,
            Err(e) => {
                self.trace.push("dfull_error", &[("error", e.to_string().replace(' ', "_"))]);
                return (self.greedy(g, v), false);
            }
        };
        self.trace.push("dfull", &[("n", h.order().to_string()), ("m", h.edge_count().to_string())]);
        let Ok(prefix) = path_to_set(g, v, &h.support()) else {
            return (self.greedy(g, v), false);
        };
        let w = prefix.end().expect("paths are nonempty");
        let need = target.saturating_sub(prefix.len());
        let cands = self.branches(&h, w, &params, need, depth);

        let mut best: Option<(PathWitness, &'static str)> = None;
        for c in cands {
            let joined = prefix.clone().join(&c.path.vertices);
            let full = PathWitness::new(joined.vertices, c.path.branch);
            if !check_path(g, &full.vertices) {
                self.trace.push("invalid", &[("branch", c.branch.into())]);
                continue;
            }
            if best.as_ref().is_none_or(|(b, _)| full.len() > b.len()) {
                best = Some((full, c.branch));
            }
        }
        let (mut path, mut branch) = best.unwrap_or_else(|| (prefix.clone(), "prefix"));
        let mut certified = path.len() >= target;
        if !certified {
            let greedy = self.greedy(g, v);
            if greedy.len() > path.len() {
                path = greedy;
                branch = "greedy";
            }
            certified = false;
        }
        self.trace.push(
            "chosen",
            &[
                ("depth", depth.to_string()),
                ("branch", branch.into()),
                ("length", path.len().to_string()),
                ("certified", certified.to_string()),
            ],
        );
        (path, certified)
    }

    /// Candidates from `w` inside the d-full graph `h`, stopping at the
    /// first one of length `need` unless every branch is requested.
    fn branches(&mut self, h: &Digraph, w: usize, params: &BoundParams, need: usize, depth: usize) -> Vec<Candidate> {
        let mut out = Vec::new();
        let all = self.cfg.run_all_branches;
        let done = |out: &Vec<Candidate>| !all && out.iter().any(|c| c.path.len() >= need);

        if let Some(p) = self.cycle_branch(h, w, params) {
            out.push(Candidate { branch: "cycle", path: p });
            if done(&out) {
                return out;
            }
        }

        match self.split_at_separator(h, w, &[w], params, depth) {
            Ok(dich) => {
                self.note_dichotomy("vertex", &dich.diagnostics);
                if let DichotomyOutcome::Path(p) = dich.outcome {
                    out.push(Candidate { branch: "separator", path: p });
                    if done(&out) {
                        return out;
                    }
                }
            }
            Err(e) => self.trace.push("separator_error", &[("error", e.to_string().replace(' ', "_"))]),
        }

        let th = Thresholds::new(params, h.order(), &self.cfg.overrides);
        let extension = th.segment_len.max(8);
        let report = match find_good_path(h, w, &th, &mut *self.rng, self.cfg.good_path_retries, extension) {
            Ok(r) => r,
            Err(e) => {
                self.trace.push("good_path_error", &[("error", e.to_string().replace(' ', "_"))]);
                return out;
            }
        };
        self.trace.push(
            "good_path",
            &[
                ("length", report.path.len().to_string()),
                ("heavy", report.y.len().to_string()),
                ("property1", report.property1.to_string()),
                ("property2", report.property2.to_string()),
                ("violations", report.property3_violations.to_string()),
                ("certified", report.certified.to_string()),
                ("attempts", report.attempts.to_string()),
            ],
        );
        out.push(Candidate {
            branch: "good_path",
            path: report.path.clone(),
        });
        if done(&out) {
            return out;
        }

        if !report.property2 && !report.path.is_empty() {
            let a = &report.path.vertices[..report.path.len()];
            match self.split_at_separator(h, w, a, params, depth) {
                Ok(dich) => {
                    self.note_dichotomy("set", &dich.diagnostics);
                    if let DichotomyOutcome::Path(p) = dich.outcome {
                        out.push(Candidate { branch: "set_separator", path: p });
                        if done(&out) {
                            return out;
                        }
                    }
                }
                Err(e) => self.trace.push("separator_error", &[("error", e.to_string().replace(' ', "_"))]),
            }
        }

        out.extend(self.finish(h, &report, params, &th, depth));
        out
    }

    fn note_dichotomy(&mut self, kind: &str, diagnostics: &[(String, String)]) {
        let mut fields = vec![("kind", kind.to_string())];
        fields.extend(diagnostics.iter().map(|(k, v)| (k.as_str(), v.replace(' ', "_"))));
        self.trace.push("dichotomy", &fields);
    }

    /// A long cycle of `h`, reached by a shortest path from `w` and then
    /// followed all the way round.
    fn cycle_branch(&mut self, h: &Digraph, w: usize, params: &BoundParams) -> Option<PathWitness> {
        let lp = LongCycleParams {
            d: params.d,
            max_resamples: self.cfg.max_resamples,
            d_min: self.cfg.d_min,
        };
        let cycle = match long_cycle_bounded_degree(h, lp, &mut *self.rng) {
            Ok(c) => c.cycle,
            Err(_) => min_outdegree_cycle(h).ok()?,
        };
        let route = path_to_set(h, w, &cycle).ok()?;
        let x = route.end()?;
        let at = cycle.iter().position(|&c| c == x)?;
        let wound: Vec<usize> = cycle[at..].iter().chain(&cycle[..at]).copied().collect();
        let p = route.join(&wound);
        let len = p.len();
        self.trace.push(
            "cycle",
            &[
                ("cycle_len", cycle.len().to_string()),
                ("path_len", len.to_string()),
                ("reaches_target", (len >= params.target_len()).to_string()),
            ],
        );
        check_path(h, &p.vertices).then(|| PathWitness::new(p.vertices, BranchTag::CycleRoute))
    }

    /// Strip, rewire, extract the core, recurse in its densest component
    /// and stitch the pieces back onto the initial segment. Also tries the
    /// anchored excursions that leave the segment early.
    fn finish(
        &mut self,
        h: &Digraph,
        report: &GoodPathReport,
        params: &BoundParams,
        th: &Thresholds,
        depth: usize,
    ) -> Vec<Candidate> {
        let p = &report.path;
        let Some(vp) = p.end() else { return Vec::new() };
        let ds = build_detour_set(h, p, &report.y, th);
        self.trace.push(
            "detours",
            &[
                ("heavy", ds.y.len().to_string()),
                ("retained", ds.y_prime.len().to_string()),
                ("crucial", ds.crucial.len().to_string()),
            ],
        );
        let strip = strip_problematic(h, p, params, th, self.cfg.problematic_search_budget);
        let longest = strip.removed.iter().map(|q| q.len() - 1).max().unwrap_or(0);
        self.trace.push(
            "strip",
            &[
                ("e_g", h.edge_count().to_string()),
                ("e_h0", strip.h0.edge_count().to_string()),
                ("removed", strip.removed.len().to_string()),
                ("longest", longest.to_string()),
                ("max_len", th.problematic_max_len.to_string()),
                ("edge_bound", f(strip.edge_bound)),
                ("complete", strip.complete.to_string()),
            ],
        );
        let rw = rewire(&strip.h0, p, &ds, th);
        for (i, s) in rw.steps.iter().enumerate() {
            self.trace.push(
                "rewire",
                &[
                    ("step", i.to_string()),
                    ("u", s.u.to_string()),
                    ("w", s.w.to_string()),
                    ("y", s.y.to_string()),
                    ("e_before", s.e_before.to_string()),
                    ("e_after", s.e_after.to_string()),
                    ("balance_ok", s.balance_ok.to_string()),
                ],
            );
        }
        let off_path_balanced = rw.unbalanced_off_path().is_none();
        self.trace.push(
            "checkpoint",
            &[
                ("e_h0", strip.h0.edge_count().to_string()),
                ("e_h", rw.edge_count().to_string()),
                ("steps", rw.steps.len().to_string()),
                ("base_balanced", rw.base_balanced.to_string()),
                ("balanced", off_path_balanced.to_string()),
            ],
        );
        let mut out = Vec::new();
        match extract_k(&rw) {
            Ok(k) => {
                // empirical constant in e(K) >= e(G) - C p n d^(1/2) / gamma
                let scale = p.len() as f64 * h.order() as f64 * params.d.sqrt() / th.gamma;
                let lost = h.edge_count().saturating_sub(k.edge_count()) as f64;
                self.trace.push(
                    "core",
                    &[
                        ("e_k", k.edge_count().to_string()),
                        ("eulerian", k.is_eulerian().to_string()),
                        ("c_measured", if scale > 0.0 { f(lost / scale) } else { "nan".into() }),
                    ],
                );
                if let Some(c) = self.through_core(h, p, vp, &k, &rw, &ds, params, th, depth) {
                    out.push(c);
                }
            }
            Err(e) => self.trace.push("core_error", &[("error", e.to_string().replace(' ', "_"))]),
        }
        if let Some(c) = self.anchored_excursion(h, p, &rw, &ds, th) {
            out.push(c);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn through_core(
        &mut self,
        h: &Digraph,
        p: &PathWitness,
        vp: usize,
        k: &Digraph,
        rw: &RewiredGraph,
        ds: &DetourSet,
        params: &BoundParams,
        th: &Thresholds,
        depth: usize,
    ) -> Option<Candidate> {
        let comps = weak_components(k);
        let comp = comps
            .iter()
            .filter(|c| c.len() >= 2)
            .max_by(|a, b| {
                let da = k.induced(a).edge_count() as f64 / a.len() as f64;
                let db = k.induced(b).edge_count() as f64 / b.len() as f64;
                da.total_cmp(&db).then(b[0].cmp(&a[0]))
            })?;
        let avoid: Vec<usize> = p.vertices[..p.len()].to_vec();
        let q = path_to_set(&h.remove_vertices(&avoid), vp, comp).ok()?;
        let z = q.end()?;
        let r = self.recurse(&k.induced(comp), z, params.d, depth + 1);
        let (r_real, s) = match realize_fake_edges(&r.vertices, rw, ds, h, th, None) {
            Ok(x) => x,
            Err(e) => {
                self.trace.push("realize_error", &[("error", e.to_string().replace(' ', "_"))]);
                let cut = real_prefix(&r.vertices, rw, h);
                realize_fake_edges(&r.vertices[..cut], rw, ds, h, th, None).ok()?
            }
        };
        let p_prime = match reroute_avoiding(h, p, ds, &s, None, th) {
            Ok(x) => x,
            Err(e) => {
                self.trace.push("reroute_error", &[("error", e.to_string().replace(' ', "_"))]);
                return None;
            }
        };
        self.trace.push(
            "stitch",
            &[
                ("p", p.len().to_string()),
                ("p_prime", p_prime.len().to_string()),
                ("q", q.len().to_string()),
                ("r", r_real.len().to_string()),
                ("detours", s.len().to_string()),
            ],
        );
        let full = p_prime.join(&q.vertices).join(&r_real.vertices);
        check_path(h, &full.vertices).then(|| Candidate {
            branch: "finish",
            path: PathWitness::new(full.vertices, BranchTag::GoodPathFinish),
        })
    }

    /// Leaves the segment at some `z`, runs a budgeted search in the rewired
    /// graph away from the rest of the segment, and reroutes the segment up
    /// to `z` around the detour vertices the excursion used.
    fn anchored_excursion(
        &mut self,
        h: &Digraph,
        p: &PathWitness,
        rw: &RewiredGraph,
        ds: &DetourSet,
        th: &Thresholds,
    ) -> Option<Candidate> {
        let live = rw.live();
        let budget = (self.cfg.greedy_budget / p.vertices.len()).max(1);
        let mut best: Option<PathWitness> = None;
        for (at, &z) in p.vertices.iter().enumerate() {
            let others: Vec<usize> = p.vertices.iter().copied().filter(|&x| x != z).collect();
            let host = live.remove_vertices(&others);
            let q = greedy_longest_path(&host, z, budget);
            if q.len() < 2 {
                continue;
            }
            let seg = segment_of(ds, at);
            let (q_real, s) = match realize_fake_edges(&q, rw, ds, h, th, Some(seg)) {
                Ok(x) => x,
                Err(_) => {
                    let cut = real_prefix(&q, rw, h);
                    match realize_fake_edges(&q[..cut], rw, ds, h, th, Some(seg)) {
                        Ok(x) => x,
                        Err(_) => continue,
                    }
                }
            };
            let Ok(front) = reroute_avoiding(h, p, ds, &s, Some(z), th) else { continue };
            let full = front.join(&q_real.vertices);
            if check_path(h, &full.vertices) && best.as_ref().is_none_or(|b| full.len() > b.len()) {
                best = Some(full);
            }
        }
        let best = best?;
        self.trace.push("anchored", &[("length", best.len().to_string())]);
        Some(Candidate {
            branch: "anchored",
            path: PathWitness::new(best.vertices, BranchTag::AnchoredExcursion),
        })
    }
}

/// Length of the prefix of `r` (in vertices) before its first fake edge
/// that is missing from `g`.
fn real_prefix(r: &[usize], rw: &RewiredGraph, g: &Digraph) -> usize {
    (0..r.len().saturating_sub(1))
        .find(|&k| rw.is_fake(r[k], r[k + 1]) && !g.has_edge(r[k], r[k + 1]))
        .map_or(r.len(), |k| k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(g: &Digraph, v: usize) -> LongPathOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        long_path_from(g, v, &PipelineConfig::default(), &mut rng).unwrap()
    }

    fn cycle(n: usize) -> Digraph {
        Digraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn blowup(k: usize, t: usize) -> Digraph {
        let mut e = Vec::new();
        for l in 0..k {
            for a in 0..t {
                for b in 0..t {
                    e.push((l * t + a, ((l + 1) % k) * t + b));
                }
            }
        }
        Digraph::new(k * t, &e).unwrap()
    }

    #[test]
    fn cycle_is_forced() {
        for n in [2, 3, 5, 9] {
            for v in 0..n {
                let o = run(&cycle(n), v);
                assert_eq!(o.path.len(), n - 1);
                assert_eq!(o.path.start(), Some(v));
            }
        }
    }

    #[test]
    fn bowtie_from_centre() {
        let g = Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let o = run(&g, 0);
        assert_eq!(o.path.len(), 2);
        assert!(check_path(&g, &o.path.vertices));
    }

    #[test]
    fn blowup_six_by_three() {
        let g = blowup(6, 3);
        let o = run(&g, 0);
        assert!(check_path(&g, &o.path.vertices));
        assert!(!o.path.is_empty() && o.path.len() <= 17);
        assert!((o.d - 3.0).abs() < 1e-12);
        assert_eq!(o.target, 1);
        assert!(o.certified);
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = PipelineConfig::default();
        let path = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(long_path_from(&path, 0, &cfg, &mut rng).unwrap_err(), StitchError::NotEulerian);
        let two = Digraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(long_path_from(&two, 0, &cfg, &mut rng).unwrap_err(), StitchError::NotConnected);
        assert_eq!(long_path_from(&two, 9, &cfg, &mut rng).unwrap_err(), StitchError::MissingVertex(9));
    }

    #[test]
    fn replay_stable() {
        let g = blowup(4, 4);
        let a = run(&g, 3);
        let b = run(&g, 3);
        assert_eq!(a.path, b.path);
        assert_eq!(a.trace, b.trace);
    }
}
