use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::PipelineConfig;
use crate::cycles::{decompose_into_cycles, min_outdegree_cycle, peel_low_degree, remove_cycles_through, short_cycle_sieve};
use crate::graph::{check_path, is_weakly_connected, sccs, Digraph};
use crate::stitch::long_path_from;

use super::{oracle_longest_cycle, oracle_longest_path_from, DEFAULT_ORACLE_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn add(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            ok,
            detail: detail.into(),
        });
    }

    pub fn to_text(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {} {}\n", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

/// Brute-force strong components: `u ~ v` iff each reaches the other.
fn reach_matrix(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.id_bound();
    let mut r = vec![vec![false; n]; n];
    for s in g.vertices() {
        let mut stack = vec![s];
        r[s][s] = true;
        while let Some(x) = stack.pop() {
            for &y in g.out_neighbors(x) {
                if !r[s][y] {
                    r[s][y] = true;
                    stack.push(y);
                }
            }
        }
    }
    r
}

/// Runs the invariant suite on one Eulerian digraph.
pub fn verify_graph(g: &Digraph, cfg: &PipelineConfig, seed: u64) -> VerifyReport {
    let mut rep = VerifyReport::default();
    rep.add("eulerian", g.is_eulerian(), format!("n={} m={}", g.order(), g.edge_count()));
    if !g.is_eulerian() {
        return rep;
    }
    let dec = match decompose_into_cycles(g) {
        Ok(d) => d,
        Err(e) => {
            rep.add("decomposition", false, e.to_string());
            return rep;
        }
    };
    rep.add("decomposition", dec.is_partition_of(g), format!("cycles={}", dec.len()));

    let mut bad = Vec::new();
    for v in g.vertices() {
        match remove_cycles_through(g, &dec, &[v], false) {
            Ok(h) if h.is_eulerian() => {}
            _ => bad.push(v),
        }
    }
    rep.add("remove_cycles_eulerian", bad.is_empty(), format!("failures={bad:?}"));

    let d = g.average_degree();
    let peeled = peel_low_degree(g, &dec, d / 2.0);
    let ok = peeled.as_ref().is_ok_and(|h| {
        h.is_eulerian() && h.support().iter().all(|&x| h.out_degree(x) as f64 >= d / 2.0)
    });
    rep.add("peel", ok, format!("theta={:.3}", d / 2.0));

    let part = sccs(g);
    let r = reach_matrix(g);
    let agree = g
        .vertices()
        .all(|u| g.vertices().all(|v| (part.component_of[u] == part.component_of[v]) == (r[u][v] && r[v][u])));
    rep.add("scc_brute_force", agree, format!("components={}", part.len()));

    if g.edge_count() > 0 {
        let delta = g.support().iter().map(|&x| g.out_degree(x)).min().unwrap_or(0);
        let cyc = min_outdegree_cycle(g);
        let ok = cyc.as_ref().is_ok_and(|c| c.len() > delta && check_path(g, c) && g.has_edge(c[c.len() - 1], c[0]));
        rep.add(
            "min_outdegree_cycle",
            ok,
            format!("delta={delta} len={}", cyc.map(|c| c.len()).unwrap_or(0)),
        );
    }

    let l = (d.cbrt().floor() as usize).max(2);
    match short_cycle_sieve(g, l) {
        Ok(s) => {
            let ok = if s.long_part.order() <= DEFAULT_ORACLE_CAP {
                let lp = s.long_part.without_isolated();
                let longest_short = short_cycle_oracle(&lp, l);
                longest_short.is_none()
            } else {
                true
            };
            rep.add("sieve", ok && s.long_part.is_eulerian(), format!("max_len={l}"));
        }
        Err(e) => rep.add("sieve", false, e.to_string()),
    }

    if is_weakly_connected(g) {
        let mut bad = Vec::new();
        for v in g.support().into_iter().take(8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match long_path_from(g, v, cfg, &mut rng) {
                Ok(o) => {
                    let valid = check_path(g, &o.path.vertices) && o.path.start() == Some(v);
                    let sandwich = if g.order() <= 12 {
                        oracle_longest_path_from(g, v, 12).is_ok_and(|m| o.path.len() <= m)
                    } else {
                        true
                    };
                    if !valid || !sandwich {
                        bad.push(v);
                    }
                }
                Err(_) => bad.push(v),
            }
        }
        rep.add("long_path", bad.is_empty(), format!("failures={bad:?}"));
    }
    if g.order() <= DEFAULT_ORACLE_CAP {
        if let Ok(c) = oracle_longest_cycle(g, DEFAULT_ORACLE_CAP) {
            rep.add("longest_cycle", true, format!("length={c}"));
        }
    }
    rep
}

/// A cycle of length at most `l` in `g`, by exhaustive search.
pub(crate) fn short_cycle_oracle(g: &Digraph, l: usize) -> Option<Vec<usize>> {
    fn go(g: &Digraph, s: usize, w: &mut Vec<usize>, l: usize) -> bool {
        let x = *w.last().expect("nonempty");
        if w.len() >= 2 && g.has_edge(x, s) {
            return true;
        }
        if w.len() == l {
            return false;
        }
        for &y in g.out_neighbors(x) {
            if y > s && !w.contains(&y) {
                w.push(y);
                if go(g, s, w, l) {
                    return true;
                }
                w.pop();
            }
        }
        false
    }
    for s in g.vertices() {
        let mut w = vec![s];
        if go(g, s, &mut w, l) {
            return Some(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{generate, GeneratorSpec};

    #[test]
    fn suite_passes_on_generators() {
        let cfg = PipelineConfig::default();
        for spec in [
            GeneratorSpec::Cycle { n: 6 },
            GeneratorSpec::Blowup { k: 3, t: 3 },
            GeneratorSpec::Complete { n: 5 },
            GeneratorSpec::SharedVertexTriangles { count: 3 },
        ] {
            let r = verify_graph(&generate(&spec).unwrap(), &cfg, 1);
            assert!(r.all_ok(), "{spec}: {}", r.to_text());
        }
    }

    #[test]
    fn non_eulerian_fails() {
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let r = verify_graph(&g, &PipelineConfig::default(), 0);
        assert!(!r.all_ok());
    }

    #[test]
    fn short_cycle_oracle_finds_digon() {
        let g = Digraph::new(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        assert!(short_cycle_oracle(&g, 2).is_some());
        let c = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(short_cycle_oracle(&c, 2).is_none());
        assert!(short_cycle_oracle(&c, 3).is_some());
    }
}
