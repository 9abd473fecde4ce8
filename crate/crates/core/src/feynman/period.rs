use super::graph::Graph;
use super::kirchhoff::{is_primitive_log_divergent, kirchhoff_polynomial, GraphPolynomial};
use crate::error::{Error, Result};
use crate::numerics::montecarlo::sample_mean;
use crate::numerics::MonteCarloEstimate;

/// Integrand on the unit cube for the chart `x_chart = 1`.
///
/// Each remaining variable is `x = t^k` with `t = u/(1 − u)`, Jacobian
/// `k·t^{k−1}/(1 − u)²`; `k = 1` is the plain rational substitution. Larger
/// `k` flattens the integrand near the coordinate hyperplanes.
pub struct ChartIntegrand {
    psi: GraphPolynomial,
    chart: usize,
    labels: usize,
    warp: u32,
}

impl ChartIntegrand {
    pub fn new(psi: GraphPolynomial, labels: usize, chart: usize, warp: u32) -> Self {
        assert!(chart < labels && warp >= 1);
        ChartIntegrand { psi, chart, labels, warp }
    }

    pub fn dimension(&self) -> usize {
        self.labels - 1
    }

    /// Value at `u ∈ [0,1)^{N−1}`; points where the value is not finite
    /// (measure zero) count as 0.
    pub fn eval(&self, u: &[f64], x: &mut [f64]) -> f64 {
        let k = self.warp as i32;
        let mut jacobian = 1.0;
        let mut coords = u.iter();
        for (label, slot) in x.iter_mut().enumerate().take(self.labels) {
            if label == self.chart {
                *slot = 1.0;
                continue;
            }
            let ui = *coords.next().expect("point has N − 1 coordinates");
            let s = 1.0 - ui;
            let t = ui / s;
            *slot = t.powi(k);
            jacobian *= k as f64 * t.powi(k - 1) / (s * s);
        }
        let p = self.psi.eval(x);
        let v = jacobian / (p * p);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }
}

/// Warp exponent used by [`period_monte_carlo`]. With `k = 1` the estimator
/// has a heavy tail on the wheels and its error is underestimated.
pub const DEFAULT_WARP: u32 = 2;

/// Monte-Carlo estimate of `∫ Ω_G/Ψ_G²` over the positive orthant, on the
/// chart of the last edge.
pub fn period_monte_carlo(g: &Graph, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    period_monte_carlo_with(g, samples, seed, DEFAULT_WARP)
}

pub fn period_monte_carlo_with(g: &Graph, samples: u64, seed: u64, warp: u32) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is needed".into()));
    }
    if warp == 0 {
        return Err(Error::Domain("warp exponent must be at least 1".into()));
    }
    if !is_primitive_log_divergent(g)? {
        return Err(Error::Domain(format!("graph {g} is not primitive log-divergent; its period integral diverges")));
    }
    let labels = g.edge_count();
    let integrand = ChartIntegrand::new(kirchhoff_polynomial(g)?, labels, labels - 1, warp);
    Ok(sample_mean(samples, seed, integrand.dimension(), |u| {
        let mut x = [0.0; 64];
        integrand.eval(u, &mut x[..labels])
    }))
}
