use std::collections::BTreeMap;

use crate::density::Thresholds;
use crate::goodpath::chord_for;
use crate::graph::{check_path, BranchTag, Digraph, PathWitness};

use super::StitchError;

/// Heavy vertices of an initial segment together with their chords.
/// Indices into `y` are zero-based; the windows compare them with the
/// one-based numbering `y_1..y_l`, which only matters for gap sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DetourSet {
    /// Heavy vertices in path order.
    pub y: Vec<usize>,
    /// Path index of each heavy vertex.
    pub pos: Vec<usize>,
    /// Retained vertices: not crucial and with a chord.
    pub y_prime: Vec<usize>,
    pub crucial: Vec<usize>,
    /// `t_0..t_l`: path lengths before `y_1`, between consecutive heavy
    /// vertices, and after `y_l`.
    pub gaps: Vec<usize>,
    /// Heavy index `i` to chord `(j, j')`: edge `y_j -> succ(y_j')`.
    pub chord_index: BTreeMap<usize, (usize, usize)>,
    /// Chord window the set was built with.
    pub window: usize,
}

impl DetourSet {
    /// Index of `x` in `y`.
    pub fn index_of(&self, x: usize) -> Option<usize> {
        self.y.iter().position(|&v| v == x)
    }

    pub fn is_retained(&self, x: usize) -> bool {
        self.y_prime.contains(&x)
    }
}

/// Gap sums, crucial vertices, chords and the retained set `Y'`.
pub fn build_detour_set(g: &Digraph, path: &PathWitness, y: &[usize], th: &Thresholds) -> DetourSet {
    let w = &path.vertices;
    let p = w.len().saturating_sub(1);
    let pos: Vec<usize> = y
        .iter()
        .map(|x| w.iter().position(|v| v == x).expect("heavy vertices lie on the path"))
        .collect();
    let l = y.len();
    let mut gaps = Vec::with_capacity(l + 1);
    let mut last = 0;
    for &q in &pos {
        gaps.push(q - last);
        last = q;
    }
    gaps.push(p - last);

    let win = th.window;
    let limit = th.crucial(p);
    let mut crucial = Vec::new();
    let mut y_prime = Vec::new();
    let mut chord_index = BTreeMap::new();
    for k in 0..l {
        // y[k] is y_{k+1}; sum t_j over |j - (k + 1)| <= win
        let centre = k + 1;
        let lo = centre.saturating_sub(win);
        let hi = (centre + win).min(l);
        let sum: usize = gaps[lo..=hi].iter().sum();
        let is_crucial = sum as f64 >= limit;
        if is_crucial {
            crucial.push(y[k]);
        }
        if let Some(c) = chord_for(g, w, &pos, k, win) {
            chord_index.insert(k, c);
            if !is_crucial {
                y_prime.push(y[k]);
            }
        }
    }
    DetourSet {
        y: y.to_vec(),
        pos,
        y_prime,
        crucial,
        gaps,
        chord_index,
        window: win,
    }
}

/// Number of heavy vertices at or before path index `at`, i.e. the `h`
/// with the vertex between `y_h` and `y_{h+1}`.
pub(crate) fn segment_of(ds: &DetourSet, at: usize) -> usize {
    ds.pos.iter().filter(|&&q| q <= at).count()
}

/// The path with each vertex of `s` bypassed along its chord.
///
/// Without `z` the result runs from the start to the last vertex. With
/// `z`, only members of `s` before `z` are bypassed and the path is cut at
/// `z`; every member must then sit more than a window away from the
/// segment of `z`.
pub fn reroute_avoiding(
    g: &Digraph,
    path: &PathWitness,
    ds: &DetourSet,
    s: &[usize],
    z: Option<usize>,
    th: &Thresholds,
) -> Result<PathWitness, StitchError> {
    let w = &path.vertices;
    let mut idx: Vec<usize> = Vec::with_capacity(s.len());
    for &x in s {
        if !ds.is_retained(x) {
            return Err(StitchError::PreconditionViolated(format!("{x} is not a retained heavy vertex")));
        }
        idx.push(ds.index_of(x).expect("retained vertices are heavy"));
    }
    idx.sort_unstable();
    idx.dedup();
    if !s.is_empty() && s.len() as f64 >= th.detour_limit {
        return Err(StitchError::PreconditionViolated(format!(
            "{} detour vertices, limit {}",
            s.len(),
            th.detour_limit
        )));
    }
    if idx.windows(2).any(|p| p[1] - p[0] <= th.spacing) {
        return Err(StitchError::PreconditionViolated("detour vertices too close".into()));
    }
    let cut = match z {
        Some(z) => {
            let at = w
                .iter()
                .position(|&x| x == z)
                .ok_or_else(|| StitchError::PreconditionViolated(format!("{z} is not on the path")))?;
            let h = segment_of(ds, at);
            if idx.iter().any(|&k| (k + 1).abs_diff(h) <= ds.window) {
                return Err(StitchError::PreconditionViolated("detour vertex too close to the end".into()));
            }
            idx.retain(|&k| k < h);
            at
        }
        None => w.len() - 1,
    };
    let mut out = Vec::with_capacity(cut + 1);
    let mut next = 0;
    for &k in &idx {
        let &(j, jp) = ds.chord_index.get(&k).ok_or(StitchError::MissingChord(ds.y[k]))?;
        let (from, to) = (ds.pos[j], ds.pos[jp] + 1);
        if from < next {
            return Err(StitchError::PreconditionViolated("chords overlap".into()));
        }
        out.extend_from_slice(&w[next..=from]);
        next = to;
    }
    if next > cut {
        return Err(StitchError::PreconditionViolated("chord jumps past the end".into()));
    }
    out.extend_from_slice(&w[next..=cut]);
    if !check_path(g, &out) || s.iter().any(|x| out.contains(x)) {
        return Err(StitchError::MissingChord(s.first().copied().unwrap_or(w[0])));
    }
    Ok(PathWitness::new(out, BranchTag::AnchoredExcursion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;
    use crate::density::BoundParams;

    fn line_with(n: usize, extra: &[(usize, usize)]) -> Digraph {
        let mut e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        e.extend_from_slice(extra);
        Digraph::new(n, &e).unwrap()
    }

    fn th(n: usize, o: Overrides) -> Thresholds {
        Thresholds::new(&BoundParams::new(0.01, 1.0 / 40.0, 1.0).unwrap(), n, &o)
    }

    fn all_heavy(window: usize) -> Overrides {
        Overrides {
            heavy_threshold: Some(0.0),
            window: Some(window),
            ..Overrides::default()
        }
    }

    #[test]
    fn empty_heavy_set() {
        let g = line_with(4, &[]);
        let p = PathWitness::new(vec![0, 1, 2, 3], BranchTag::RandomGrowth);
        let ds = build_detour_set(&g, &p, &[], &th(4, Overrides::default()));
        assert!(ds.y_prime.is_empty() && ds.crucial.is_empty());
        assert_eq!(ds.gaps, vec![3]);
    }

    #[test]
    fn single_heavy_without_chord() {
        let g = line_with(4, &[]);
        let p = PathWitness::new(vec![0, 1, 2, 3], BranchTag::RandomGrowth);
        let ds = build_detour_set(&g, &p, &[2], &th(4, all_heavy(2)));
        assert!(ds.y_prime.is_empty());
        assert_eq!(ds.gaps, vec![2, 1]);
    }

    #[test]
    fn planted_chord_on_twelve_vertices() {
        // chord 3 -> 6 = succ(5) covers only y index 4 with window 2
        let g = line_with(12, &[(3, 6)]);
        let p = PathWitness::new((0..12).collect(), BranchTag::RandomGrowth);
        let t = th(12, all_heavy(2));
        let y: Vec<usize> = (0..12).collect();
        let ds = build_detour_set(&g, &p, &y, &t);
        // gaps 0,1,...,1,0; every window sum is at most 5 < 11/2
        assert!(ds.crucial.is_empty());
        assert_eq!(ds.y_prime, vec![4]);
        assert_eq!(ds.chord_index.get(&4), Some(&(3, 5)));
        assert_eq!(ds.gaps.iter().sum::<usize>(), 11);
    }

    #[test]
    fn reroute_examples() {
        let g = line_with(11, &[(4, 7)]);
        let p = PathWitness::new((0..11).collect(), BranchTag::RandomGrowth);
        let o = Overrides {
            crucial_threshold: Some(100.0),
            detour_limit: Some(2.0),
            ..all_heavy(2)
        };
        let t = th(11, o);
        let y: Vec<usize> = (0..11).collect();
        let ds = build_detour_set(&g, &p, &y, &t);
        assert!(ds.is_retained(5));

        let same = reroute_avoiding(&g, &p, &ds, &[], None, &t).unwrap();
        assert_eq!(same.vertices, p.vertices);

        let r = reroute_avoiding(&g, &p, &ds, &[5], None, &t).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3, 4, 7, 8, 9, 10]);
        assert!(r.len() >= 5);

        let to_z = reroute_avoiding(&g, &p, &ds, &[5], Some(10), &t).unwrap();
        assert_eq!(to_z.end(), Some(10));
        assert!(!to_z.vertices.contains(&5));
    }

    #[test]
    fn reroute_rejects_crowded_sets() {
        let g = line_with(11, &[(4, 7), (5, 8)]);
        let p = PathWitness::new((0..11).collect(), BranchTag::RandomGrowth);
        let o = Overrides {
            crucial_threshold: Some(100.0),
            detour_limit: Some(5.0),
            spacing: Some(3),
            ..all_heavy(2)
        };
        let t = th(11, o);
        let y: Vec<usize> = (0..11).collect();
        let ds = build_detour_set(&g, &p, &y, &t);
        assert!(ds.is_retained(5) && ds.is_retained(6));
        assert!(matches!(
            reroute_avoiding(&g, &p, &ds, &[5, 6], None, &t),
            Err(StitchError::PreconditionViolated(_))
        ));
    }
}
