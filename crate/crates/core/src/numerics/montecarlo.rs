use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples per independent substream. Fixed, so the estimate does not depend
/// on the number of threads.
pub(crate) const CHUNK: u64 = 1 << 16;

/// Mean of a Monte-Carlo integrand with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

/// Averages `f` over `samples` uniform points of `[0,1)^dim`. Chunk `i` draws
/// from ChaCha8 seeded with `seed` on stream `i`; chunk sums are combined in
/// order.
pub(crate) fn sample_mean<F>(samples: u64, seed: u64, dim: usize, f: F) -> MonteCarloEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let n = CHUNK.min(samples - i * CHUNK);
            let mut point = vec![0.0; dim];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                for x in point.iter_mut() {
                    *x = rng.random::<f64>();
                }
                let v = f(&point);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s / n;
    let standard_error = if samples > 1 {
        ((s2 / n - mean * mean).max(0.0) / (n - 1.0)).sqrt()
    } else {
        f64::INFINITY
    };
    MonteCarloEstimate { estimate: mean, standard_error, samples }
}

/// `1/(1 − xy)`, whose integral over the unit square is ζ(2).
pub fn hypercube_integrand(x: f64, y: f64) -> f64 {
    1.0 / (1.0 - x * y)
}

/// Monte-Carlo estimate of `∬_{[0,1]²} dx dy/(1 − xy) = ζ(2)`.
pub fn hypercube_zeta2(samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is needed".into()));
    }
    Ok(sample_mean(samples, seed, 2, |p| hypercube_integrand(p[0], p[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrand_values() {
        assert_eq!(hypercube_integrand(0.0, 0.0), 1.0);
        assert_eq!(hypercube_integrand(0.5, 0.5), 4.0 / 3.0);
    }

    #[test]
    fn deterministic_and_consistent() {
        let a = hypercube_zeta2(200_000, 7).unwrap();
        let b = hypercube_zeta2(200_000, 7).unwrap();
        assert_eq!(a, b);
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((a.estimate - exact).abs() < 4.0 * a.standard_error);
        assert!(hypercube_zeta2(0, 1).is_err());
        assert!(hypercube_zeta2(1, 1).unwrap().standard_error.is_infinite());
    }

    #[test]
    fn error_scales_like_inverse_sqrt() {
        let small = hypercube_zeta2(10_000, 3).unwrap().standard_error;
        let large = hypercube_zeta2(1_000_000, 3).unwrap().standard_error;
        let ratio = small / large;
        assert!(ratio > 5.0 && ratio < 20.0, "ratio {ratio}");
    }
}
