use rand::Rng;

use crate::density::Thresholds;
use crate::graph::{BranchTag, Digraph, PathWitness};

use super::{verify_good_path, GoodPathError, GoodPathReport};

/// One random walk from `v`: each step is uniform over the out-neighbours
/// not yet on the path. Fails with `DeadEnd` (carrying the walk so far)
/// when no such neighbour exists before length `p`.
pub fn try_grow<R: Rng + ?Sized>(g: &Digraph, v: usize, p: usize, rng: &mut R) -> Result<PathWitness, GoodPathError> {
    if !g.is_alive(v) {
        return Err(GoodPathError::InvalidPath);
    }
    let mut on_path = vec![false; g.id_bound()];
    let mut walk = vec![v];
    on_path[v] = true;
    let mut free = Vec::new();
    while walk.len() <= p {
        let x = *walk.last().expect("walk is nonempty");
        free.clear();
        free.extend(g.out_neighbors(x).iter().copied().filter(|&y| !on_path[y]));
        if free.is_empty() {
            return Err(GoodPathError::DeadEnd { walk });
        }
        let y = free[rng.gen_range(0..free.len())];
        debug_assert!(!on_path[y]);
        on_path[y] = true;
        walk.push(y);
    }
    Ok(PathWitness::new(walk, BranchTag::RandomGrowth))
}

/// Random path of length exactly `p` from `v`, retrying dead ends.
pub fn grow_random_path<R: Rng + ?Sized>(
    g: &Digraph,
    v: usize,
    p: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<PathWitness, GoodPathError> {
    if p + 1 > g.order() {
        return Err(GoodPathError::TargetUnreachable { p, tries: 0 });
    }
    for _ in 0..max_retries.max(1) {
        match try_grow(g, v, p, rng) {
            Ok(path) => return Ok(path),
            Err(GoodPathError::DeadEnd { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GoodPathError::TargetUnreachable {
        p,
        tries: max_retries.max(1),
    })
}

fn score(r: &GoodPathReport) -> (bool, bool, bool, std::cmp::Reverse<usize>, usize) {
    (
        r.certified,
        r.property1,
        r.property2,
        std::cmp::Reverse(r.property3_violations),
        r.path.len(),
    )
}

/// Initial segment from `v` with the three properties.
///
/// Each attempt draws a fresh random walk. Property 1 only bounds the
/// length from below, so the walk is checked at every length from the
/// segment length up to `extension` steps beyond it and stops at the first
/// certified prefix. After `max_retries` attempts the best report is
/// returned with `certified = false`.
pub fn find_good_path<R: Rng + ?Sized>(
    g: &Digraph,
    v: usize,
    th: &Thresholds,
    rng: &mut R,
    max_retries: usize,
    extension: usize,
) -> Result<GoodPathReport, GoodPathError> {
    if !g.is_alive(v) {
        return Err(GoodPathError::InvalidPath);
    }
    let p = th.segment_len.min(g.order().saturating_sub(1));
    let longest = (th.segment_len + extension).min(g.order().saturating_sub(1));
    let mut best: Option<GoodPathReport> = None;
    let tries = max_retries.max(1);
    for attempt in 1..=tries {
        let walk = match try_grow(g, v, longest, rng) {
            Ok(w) => w.vertices,
            Err(GoodPathError::DeadEnd { walk }) => walk,
            Err(e) => return Err(e),
        };
        let from = p.min(walk.len() - 1);
        for len in from..walk.len() {
            let prefix = PathWitness::new(walk[..=len].to_vec(), BranchTag::RandomGrowth);
            let mut r = verify_good_path(g, &prefix, th)?;
            r.attempts = attempt;
            if r.certified {
                return Ok(r);
            }
            if best.as_ref().is_none_or(|b| score(&r) > score(b)) {
                best = Some(r);
            }
        }
    }
    let mut r = best.expect("at least one attempt ran");
    r.attempts = tries;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;
    use crate::density::BoundParams;
    use crate::graph::check_path;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Digraph {
        Digraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn dk(n: usize) -> Digraph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(n, &e).unwrap()
    }

    fn th(g: &Digraph, d: f64) -> Thresholds {
        Thresholds::new(&BoundParams::new(0.01, 1.0 / 40.0, d).unwrap(), g.order(), &Overrides::default())
    }

    #[test]
    fn forced_walk_on_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = grow_random_path(&cycle(5), 0, 4, &mut rng, 8).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn complete_four_hamiltonian() {
        let g = dk(4);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = grow_random_path(&g, 0, 3, &mut rng, 8).unwrap();
            assert!(check_path(&g, &p.vertices));
            assert_eq!(p.start(), Some(0));
            assert_eq!(p.len(), 3);
        }
    }

    #[test]
    fn too_long_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            grow_random_path(&cycle(3), 0, 3, &mut rng, 8),
            Err(GoodPathError::TargetUnreachable { .. })
        ));
    }

    #[test]
    fn find_on_cycle_extends_to_the_end() {
        let g = cycle(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = find_good_path(&g, 0, &th(&g, 1.0), &mut rng, 4, 8).unwrap();
        assert!(r.certified);
        assert_eq!(r.path.vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn find_on_complete_four_single_edge() {
        let g = dk(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = find_good_path(&g, 0, &th(&g, 3.0), &mut rng, 4, 8).unwrap();
        assert!(r.certified);
        assert_eq!(r.path.len(), 1);
    }
}
