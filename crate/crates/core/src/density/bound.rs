use crate::config::Overrides;

use super::DensityError;

/// The bound's parameters: constant `c`, exponent slack `eps` and the
/// average-degree parameter `d`. `gamma = d^eps` is always recomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub c: f64,
    pub eps: f64,
    pub d: f64,
}

impl BoundParams {
    pub fn new(c: f64, eps: f64, d: f64) -> Result<Self, DensityError> {
        if !(c > 0.0) || !(eps > 0.0 && eps < 0.5) {
            return Err(DensityError::InvalidParams { c, eps });
        }
        if !(d > 0.0) {
            return Err(DensityError::NonpositiveD(d));
        }
        Ok(BoundParams { c, eps, d })
    }

    pub fn with_d(self, d: f64) -> Self {
        BoundParams { d, ..self }
    }

    pub fn gamma(&self) -> f64 {
        self.d.powf(self.eps)
    }

    /// `c * d^(1/2 + eps)`, assuming `d > 0`.
    pub fn phi(&self) -> f64 {
        self.c * self.d.powf(0.5 + self.eps)
    }

    /// Smallest integer path length meeting the bound.
    pub fn target_len(&self) -> usize {
        self.phi().ceil().max(0.0) as usize
    }
}

pub fn phi(params: &BoundParams) -> Result<f64, DensityError> {
    if !(params.d > 0.0) {
        return Err(DensityError::NonpositiveD(params.d));
    }
    Ok(params.phi())
}

/// Relative guard band used when comparing the two sides in floating point.
pub const PHI_GUARD: f64 = 1e-12;

/// Evaluates `phi(d - lambda d^(1/2) / gamma) >= phi(d) - 2 c lambda` for
/// `0 <= lambda <= d^(1/2) gamma / 4`.
pub fn check_phi_inequality(params: &BoundParams, lambda: f64) -> Result<bool, DensityError> {
    if !(params.d > 0.0) {
        return Err(DensityError::NonpositiveD(params.d));
    }
    let gamma = params.gamma();
    let max_lambda = params.d.sqrt() * gamma / 4.0;
    if !(lambda >= 0.0 && lambda <= max_lambda) {
        return Err(DensityError::LambdaOutOfRange { lambda, max: max_lambda });
    }
    let shifted = params.with_d(params.d - lambda * params.d.sqrt() / gamma);
    let lhs = shifted.phi();
    let rhs = params.phi() - 2.0 * params.c * lambda;
    Ok(lhs + PHI_GUARD * params.phi().max(1.0) >= rhs)
}

/// Every numeric threshold of the construction for one graph, with
/// overrides applied. Counts compared against real thresholds use `>=`
/// on floats; index windows are floored.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    pub gamma: f64,
    pub heavy: f64,
    pub window: usize,
    pub danger_quota: f64,
    pub bad_pair_quota: f64,
    pub overlap: f64,
    pub violation_slack: f64,
    pub detour_limit: f64,
    pub spacing: usize,
    pub rewire: f64,
    pub problematic_max_len: usize,
    pub problematic_hits: f64,
    /// Largest admissible separator, `d^(1/2) gamma^-5`.
    pub separator_size: f64,
    /// Initial segment length, `max(1, floor(d^(1/2) gamma^-5))`.
    pub segment_len: usize,
    crucial_override: Option<f64>,
}

impl Thresholds {
    /// `n` is the number of vertices of the host graph.
    pub fn new(params: &BoundParams, n: usize, o: &Overrides) -> Self {
        let g = params.gamma();
        let n = n as f64;
        let root = params.d.sqrt();
        Thresholds {
            gamma: g,
            heavy: o.heavy_threshold.unwrap_or(n / (g * g)),
            window: o.window.unwrap_or(g.powi(9).floor() as usize),
            danger_quota: o.danger_quota.unwrap_or(4.0 * g.powf(4.5)),
            bad_pair_quota: o.bad_pair_quota.unwrap_or(g.powf(4.5)),
            overlap: o.overlap.unwrap_or(n / g.powi(4) / 100.0),
            violation_slack: o.violation_slack.unwrap_or(g.powi(7)),
            detour_limit: o.detour_limit.unwrap_or(g * g),
            spacing: o.spacing.unwrap_or((3.0 * g.powi(9)).floor() as usize),
            rewire: o.rewire_threshold.unwrap_or(7.0 * g.powi(11)),
            problematic_max_len: o.problematic_max_len.unwrap_or((root * g).floor() as usize),
            problematic_hits: o.problematic_hits.unwrap_or(g * g),
            separator_size: root / g.powi(5),
            segment_len: o
                .segment_len
                .unwrap_or(((root / g.powi(5)).floor() as usize).max(1))
                .max(1),
            crucial_override: o.crucial_threshold,
        }
    }

    /// Segment-sum level at which a heavy vertex of a length-`p` path is crucial.
    pub fn crucial(&self, p: usize) -> f64 {
        self.crucial_override
            .unwrap_or(p as f64 / (2.0 * self.gamma * self.gamma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: f64, d: f64) -> BoundParams {
        BoundParams::new(c, 1.0 / 40.0, d).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&p(1.0, 1.0)).unwrap(), 1.0);
        // 2^(40 * 0.525) = 2^21; powf is only correctly rounded up to a few ulps
        let big = phi(&p(1.0, 2f64.powi(40))).unwrap();
        assert!((big / 2f64.powi(21) - 1.0).abs() < 1e-12);
        // 0.01 * 10^1.05, high-precision value 0.112201845430196...
        let v = phi(&p(0.01, 100.0)).unwrap();
        assert!((v - 0.112_201_845_430_196_3).abs() < 1e-15);
        assert!(matches!(
            BoundParams::new(1.0, 0.025, 0.0),
            Err(DensityError::NonpositiveD(_))
        ));
    }

    #[test]
    fn inequality_examples() {
        assert!(check_phi_inequality(&p(0.3, 50.0), 0.0).unwrap());
        assert!(check_phi_inequality(&p(1.0, 1e6), 10.0).unwrap());
        let q = p(1.0, 16.0);
        let max = 16f64.sqrt() * q.gamma() / 4.0;
        assert!(check_phi_inequality(&q, max).unwrap());
        assert!(matches!(
            check_phi_inequality(&q, max * 1.01),
            Err(DensityError::LambdaOutOfRange { .. })
        ));
        assert!(check_phi_inequality(&q, -1.0).is_err());
    }

    #[test]
    fn thresholds_at_d3() {
        let t = Thresholds::new(&p(0.01, 3.0), 4, &Overrides::default());
        assert!((t.heavy - 3.786).abs() < 1e-3);
        assert_eq!(t.segment_len, 1);
        assert_eq!(t.window, 1);
    }
}
