use std::fmt::Write as _;

use crate::density::Thresholds;
use crate::graph::{check_path, is_strongly_connected, mask_of, Digraph, PathWitness};

use super::GoodPathError;

/// Path vertices of degree at least the heavy threshold, in path order.
pub fn heavy_vertices(g: &Digraph, path: &PathWitness, th: &Thresholds) -> Vec<usize> {
    path.vertices
        .iter()
        .copied()
        .filter(|&x| g.out_degree(x) as f64 >= th.heavy)
        .collect()
}

/// `|N+(a) ∩ N+(b)|` over sorted adjacency lists.
pub(crate) fn common_out(g: &Digraph, a: usize, b: usize) -> usize {
    let (x, y) = (g.out_neighbors(a), g.out_neighbors(b));
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// `y_i` is dangerous when no `a` in `[i - w, i)` has at least the quota
/// of indices `b` in `(i, i + w]` with large common out-neighbourhood.
pub fn dangerous_vertices(g: &Digraph, y: &[usize], th: &Thresholds) -> Vec<usize> {
    let w = th.window;
    let l = y.len();
    (0..l)
        .filter(|&i| {
            let safe = (i.saturating_sub(w)..i).any(|a| {
                let hits = (i + 1..=(i + w).min(l.saturating_sub(1)))
                    .filter(|&b| common_out(g, y[a], y[b]) as f64 >= th.overlap)
                    .count();
                hits as f64 >= th.danger_quota
            });
            !safe
        })
        .map(|i| y[i])
        .collect()
}

/// Chord `y_j -> succ(y_j')` with `i - w <= j < i < j' <= i + w`, given
/// the path positions of the heavy vertices. Shortest span first, then
/// lowest `j`. The path's last vertex has no successor and never serves as
/// `y_j'`.
pub(crate) fn chord_for(g: &Digraph, path: &[usize], pos: &[usize], i: usize, w: usize) -> Option<(usize, usize)> {
    let l = pos.len();
    let mut best: Option<(usize, usize)> = None;
    for j in i.saturating_sub(w)..i {
        for jp in i + 1..=(i + w).min(l.saturating_sub(1)) {
            let Some(&succ) = path.get(pos[jp] + 1) else { continue };
            if g.has_edge(path[pos[j]], succ) && best.is_none_or(|(bj, bjp)| jp - j < bjp - bj) {
                best = Some((j, jp));
            }
        }
    }
    best
}

/// Pairs `(i, j)`, `j < i`, of path indices for which at least the quota of
/// later indices `k > i` share many out-neighbours with `v_j`, while for the
/// first quota of them `succ(v_k)` is not an out-neighbour of `v_j`. Only
/// `k` below the last index is considered, where `succ` exists.
pub fn bad_pairs(g: &Digraph, path: &[usize], th: &Thresholds) -> Vec<(usize, usize)> {
    let p = path.len().saturating_sub(1);
    let need = th.bad_pair_quota.ceil().max(0.0) as usize;
    let mut out = Vec::new();
    if need == 0 {
        return out;
    }
    for j in 0..p {
        let overlaps: Vec<usize> = (j + 1..p)
            .filter(|&k| common_out(g, path[j], path[k]) as f64 >= th.overlap)
            .collect();
        for i in j + 1..=p {
            let later: Vec<usize> = overlaps.iter().copied().filter(|&k| k > i).take(need).collect();
            if later.len() == need && later.iter().all(|&k| !g.has_edge(path[j], path[k + 1])) {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodPathReport {
    pub path: PathWitness,
    /// Heavy vertices in path order.
    pub y: Vec<usize>,
    /// Length at least the initial-segment length.
    pub property1: bool,
    /// `G - A` strongly connected, `A` = path minus its endvertex.
    pub property2: bool,
    /// Heavy vertices without a chord in their window.
    pub property3_violations: usize,
    /// `gamma^-2 |Y| + gamma^7`.
    pub violation_cap: f64,
    pub dangerous_count: usize,
    pub bad_pairs: Vec<(usize, usize)>,
    /// `p <= gamma^-4 n / 200`, which the chord argument relies on.
    pub length_vs_n_ok: bool,
    pub certified: bool,
    /// Random walks drawn by the search that produced this report.
    pub attempts: usize,
}

impl GoodPathReport {
    /// Flat `key=value` block, one pair per line.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "path={}", join(&self.path.vertices));
        let _ = writeln!(s, "length={}", self.path.len());
        let _ = writeln!(s, "heavy={}", join(&self.y));
        let _ = writeln!(s, "property1={}", self.property1);
        let _ = writeln!(s, "property2={}", self.property2);
        let _ = writeln!(s, "property3_violations={}", self.property3_violations);
        let _ = writeln!(s, "violation_cap={}", self.violation_cap);
        let _ = writeln!(s, "dangerous={}", self.dangerous_count);
        let pairs: Vec<String> = self.bad_pairs.iter().map(|(i, j)| format!("{i}:{j}")).collect();
        let _ = writeln!(s, "bad_pairs={}", pairs.join(","));
        let _ = writeln!(s, "length_vs_n_ok={}", self.length_vs_n_ok);
        let _ = writeln!(s, "certified={}", self.certified);
        let _ = writeln!(s, "attempts={}", self.attempts);
        s
    }
}

/// Checks the three properties of an initial segment literally.
pub fn verify_good_path(g: &Digraph, path: &PathWitness, th: &Thresholds) -> Result<GoodPathReport, GoodPathError> {
    if !check_path(g, &path.vertices) {
        return Err(GoodPathError::InvalidPath);
    }
    let w = &path.vertices;
    let p = w.len() - 1;
    let property1 = p >= th.segment_len;
    let property2 = is_strongly_connected(&g.remove_vertices(&w[..p]));
    let y = heavy_vertices(g, path, th);
    let heavy = mask_of(g.id_bound(), &y);
    let pos: Vec<usize> = (0..w.len()).filter(|&k| heavy[w[k]]).collect();
    let property3_violations = (0..y.len())
        .filter(|&i| chord_for(g, w, &pos, i, th.window).is_none())
        .count();
    let violation_cap = y.len() as f64 / (th.gamma * th.gamma) + th.violation_slack;
    let dangerous_count = dangerous_vertices(g, &y, th).len();
    let length_vs_n_ok = p as f64 <= g.order() as f64 / th.gamma.powi(4) / 200.0;
    let certified = property1 && property2 && property3_violations as f64 <= violation_cap;
    Ok(GoodPathReport {
        path: path.clone(),
        y,
        property1,
        property2,
        property3_violations,
        violation_cap,
        dangerous_count,
        bad_pairs: bad_pairs(g, w, th),
        length_vs_n_ok,
        certified,
        attempts: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;
    use crate::density::BoundParams;
    use crate::graph::BranchTag;

    fn th(g: &Digraph, d: f64, o: Overrides) -> Thresholds {
        Thresholds::new(&BoundParams::new(0.01, 1.0 / 40.0, d).unwrap(), g.order(), &o)
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    fn pw(v: &[usize]) -> PathWitness {
        PathWitness::new(v.to_vec(), BranchTag::RandomGrowth)
    }

    /// Vertices 0..5 all point to {5, 6}, which point back to all of them.
    fn twin_hubs() -> Digraph {
        let mut e = Vec::new();
        for x in 0..5 {
            e.extend([(x, 5), (x, 6), (5, x), (6, x)]);
        }
        Digraph::new(7, &e).unwrap()
    }

    #[test]
    fn heavy_on_complete_four_is_empty() {
        let g = dk(4);
        let t = th(&g, 3.0, Overrides::default());
        assert!(heavy_vertices(&g, &pw(&[0, 1, 2, 3]), &t).is_empty());
        let t0 = th(&g, 3.0, Overrides { heavy_threshold: Some(0.0), ..Overrides::default() });
        assert_eq!(heavy_vertices(&g, &pw(&[0, 1, 2, 3]), &t0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn dangerous_edge_cases() {
        let g = dk(4);
        let t = th(&g, 3.0, Overrides::default());
        assert!(dangerous_vertices(&g, &[], &t).is_empty());
        assert_eq!(dangerous_vertices(&g, &[2], &t), vec![2]);
    }

    #[test]
    fn identical_neighbourhoods_protect_interior() {
        let g = twin_hubs();
        let o = Overrides {
            window: Some(2),
            danger_quota: Some(1.0),
            overlap: Some(1.0),
            ..Overrides::default()
        };
        let t = th(&g, 2.0, o);
        let y = [0, 1, 2, 3, 4];
        assert_eq!(dangerous_vertices(&g, &y, &t), vec![0, 4]);
    }

    #[test]
    fn verify_examples() {
        let c5 = Digraph::new(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        let r = verify_good_path(&c5, &pw(&[0, 1, 2, 3, 4]), &th(&c5, 1.0, Overrides::default())).unwrap();
        assert!(r.property1 && r.property2 && r.y.is_empty() && r.certified);

        let g = dk(4);
        let r = verify_good_path(&g, &pw(&[0, 1]), &th(&g, 3.0, Overrides::default())).unwrap();
        assert!(r.property2);

        // removing 1 leaves 2 unreachable from 0
        let bowtie = Digraph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let r = verify_good_path(&bowtie, &pw(&[1, 2]), &th(&bowtie, 1.0, Overrides::default())).unwrap();
        assert!(!r.property2);

        assert_eq!(
            verify_good_path(&g, &pw(&[0, 0]), &th(&g, 3.0, Overrides::default())),
            Err(GoodPathError::InvalidPath)
        );
    }

    #[test]
    fn report_text_is_flat() {
        let g = dk(4);
        let r = verify_good_path(&g, &pw(&[0, 1]), &th(&g, 3.0, Overrides::default())).unwrap();
        let text = r.to_text();
        assert!(text.lines().all(|l| l.contains('=')));
        assert!(text.contains("path=0,1\n"));
    }
}
