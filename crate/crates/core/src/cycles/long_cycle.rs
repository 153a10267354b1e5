use rand::Rng;

use crate::graph::Digraph;

use super::{decompose_into_cycles, min_outdegree_cycle, peel_low_degree, short_cycle_sieve, CycleError};

/// Knobs for [`long_cycle_bounded_degree`].
#[derive(Debug, Clone, Copy)]
pub struct LongCycleParams {
    /// Average-degree parameter.
    pub d: f64,
    /// Partition draws before falling back to the minimum-degree cycle.
    pub max_resamples: usize,
    /// Smallest admissible `d`.
    pub d_min: f64,
}

impl LongCycleParams {
    pub fn new(d: f64) -> Self {
        LongCycleParams {
            d,
            max_resamples: 100,
            d_min: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleCase {
    /// Short cycles carry at least half the edges; peel and take a min-degree cycle.
    ShortCycles,
    /// The long part carries more than half; class-rotating walk.
    RotatingWalk,
    /// Peeling emptied the part or resampling ran out; min-degree cycle used instead.
    Fallback,
}

#[derive(Debug, Clone)]
pub struct LongCycle {
    pub cycle: Vec<usize>,
    pub case: CycleCase,
    /// Number of classes in the random partition (rotating walk only).
    pub classes: usize,
    /// Sieve threshold, `floor(d^(1/3))`.
    pub sieve_len: usize,
    /// Partitions drawn.
    pub resamples: usize,
    /// First repeat `(a, b)` of the walk, `v_a == v_b`.
    pub walk_span: Option<(usize, usize)>,
    /// Whether `b - a >= (classes - 1) * sieve_len` held for this walk.
    pub span_bound_held: Option<bool>,
}

/// Long cycle in an Eulerian digraph of bounded maximum degree.
///
/// Short cycles (length at most `d^(1/3)`) are sieved out first. If they
/// carry at least `nd/2` edges (ties included), the short part is peeled to
/// minimum degree `d^(2/3)/4` and a greedy minimum-degree cycle is taken.
/// Otherwise the long part is peeled to minimum degree `d^(1/3)/4`, its
/// vertices are split uniformly into `t = max(1, floor(d^(1/3) / (200 ln d)))`
/// classes, resampled until every vertex sees every class among its
/// successors, and a walk that stays in a class for `d^(1/3)` steps before
/// moving to the next class is followed until it repeats.
pub fn long_cycle_bounded_degree<R: Rng + ?Sized>(
    g: &Digraph,
    params: LongCycleParams,
    rng: &mut R,
) -> Result<LongCycle, CycleError> {
    let d = params.d;
    if !g.is_eulerian() {
        return Err(CycleError::NotEulerian);
    }
    if g.edge_count() == 0 {
        return Err(CycleError::NoEdges);
    }
    if !(d >= params.d_min) {
        return Err(CycleError::PreconditionViolated(format!(
            "d = {d} below floor {}",
            params.d_min
        )));
    }
    if g.average_degree() + 1e-9 < d {
        return Err(CycleError::PreconditionViolated(format!(
            "average degree {} below d = {d}",
            g.average_degree()
        )));
    }
    if g.max_out_degree() as f64 > d.powi(20) {
        return Err(CycleError::PreconditionViolated(
            "maximum degree exceeds d^20".into(),
        ));
    }

    let sieve_len = d.cbrt().floor() as usize;
    let sieve = short_cycle_sieve(g, sieve_len)?;
    let half = g.order() as f64 * d / 2.0;
    let mut out = LongCycle {
        cycle: Vec::new(),
        case: CycleCase::ShortCycles,
        classes: 0,
        sieve_len,
        resamples: 0,
        walk_span: None,
        span_bound_held: None,
    };

    if sieve.short_part.edge_count() as f64 >= half {
        let core = peel_low_degree(&sieve.short_part, &sieve.removed_cycles, d.powf(2.0 / 3.0) / 4.0)?;
        if core.edge_count() > 0 {
            out.cycle = min_outdegree_cycle(&core)?;
        } else {
            out.case = CycleCase::Fallback;
            out.cycle = min_outdegree_cycle(g)?;
        }
        return Ok(out);
    }

    let long = &sieve.long_part;
    let dec = decompose_into_cycles(long)?;
    let core = peel_low_degree(long, &dec, d.cbrt() / 4.0)?;
    if core.edge_count() == 0 {
        out.case = CycleCase::Fallback;
        out.cycle = min_outdegree_cycle(long)?;
        return Ok(out);
    }

    let classes = if d > 1.0 {
        ((d.cbrt() / (200.0 * d.ln())).floor() as usize).max(1)
    } else {
        1
    };
    out.classes = classes;
    let vertices = core.support();
    let mut class = vec![usize::MAX; core.id_bound()];
    let mut good = false;
    for _ in 0..params.max_resamples.max(1) {
        out.resamples += 1;
        for &v in &vertices {
            class[v] = rng.gen_range(0..classes);
        }
        if every_class_reachable(&core, &vertices, &class, classes) {
            good = true;
            break;
        }
    }
    if !good {
        out.case = CycleCase::Fallback;
        out.cycle = min_outdegree_cycle(&core).map_err(|_| CycleError::ResampleBudgetExhausted)?;
        return Ok(out);
    }

    out.case = CycleCase::RotatingWalk;
    let (cycle, a, b) = rotating_walk(&core, &vertices, &class, classes, sieve_len);
    out.cycle = cycle;
    out.walk_span = Some((a, b));
    out.span_bound_held = Some(b - a >= (classes - 1) * sieve_len);
    Ok(out)
}

fn every_class_reachable(g: &Digraph, vertices: &[usize], class: &[usize], classes: usize) -> bool {
    let mut hit = vec![false; classes];
    vertices.iter().all(|&v| {
        hit.iter_mut().for_each(|h| *h = false);
        let mut count = 0;
        for &w in g.out_neighbors(v) {
            let c = class[w];
            if !hit[c] {
                hit[c] = true;
                count += 1;
            }
        }
        count == classes
    })
}

/// Returns the closed cycle and the first repeat indices `(a, b)`.
fn rotating_walk(
    g: &Digraph,
    vertices: &[usize],
    class: &[usize],
    classes: usize,
    stay: usize,
) -> (Vec<usize>, usize, usize) {
    let start = *vertices
        .iter()
        .find(|&&v| class[v] == 0)
        .expect("class 0 is nonempty when every vertex sees it");
    let mut pos = vec![usize::MAX; g.id_bound()];
    let mut seq = vec![start];
    pos[start] = 0;
    let mut run = 1usize; // trailing vertices in the current class
    loop {
        let x = *seq.last().expect("walk is nonempty");
        let j = class[x];
        let target = if run > stay { (j + 1) % classes } else { j };
        let y = *g
            .out_neighbors(x)
            .iter()
            .find(|&&y| class[y] == target)
            .expect("partition guarantees a successor in every class");
        if pos[y] != usize::MAX {
            let a = pos[y];
            let b = seq.len();
            return (seq.split_off(a), a, b);
        }
        run = if class[y] == j { run + 1 } else { 1 };
        pos[y] = seq.len();
        seq.push(y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn is_closed_cycle(g: &Digraph, c: &[usize]) -> bool {
        crate::graph::check_path(g, c) && c.len() >= 2 && g.has_edge(*c.last().unwrap(), c[0])
    }

    #[test]
    fn triangle_returns_itself() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = long_cycle_bounded_degree(&g, LongCycleParams::new(1.0), &mut rng).unwrap();
        assert_eq!(r.cycle, vec![0, 1, 2]);
    }

    #[test]
    fn digon_returns_itself() {
        let g = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = long_cycle_bounded_degree(&g, LongCycleParams::new(1.0), &mut rng).unwrap();
        assert_eq!(r.cycle.len(), 2);
        assert!(is_closed_cycle(&g, &r.cycle));
    }

    #[test]
    fn preconditions_are_checked() {
        let g = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            long_cycle_bounded_degree(&g, LongCycleParams::new(2.0), &mut rng),
            Err(CycleError::PreconditionViolated(_))
        ));
        let mut p = LongCycleParams::new(1.0);
        p.d_min = 1.5;
        assert!(matches!(
            long_cycle_bounded_degree(&g, p, &mut rng),
            Err(CycleError::PreconditionViolated(_))
        ));
    }
}
