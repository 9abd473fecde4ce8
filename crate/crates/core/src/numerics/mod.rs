//! Arbitrary-precision evaluation: big reals, Bernoulli numbers, ζ(s),
//! multiple polylogarithms and MZVs.

mod bernoulli;
mod bigreal;
pub(crate) mod montecarlo;
mod polylog;
mod zeta;

pub use bernoulli::bernoulli;
pub use bigreal::{BigReal, Precision, DEFAULT_GUARD};
pub use montecarlo::{hypercube_integrand, hypercube_zeta2, MonteCarloEstimate};
pub use polylog::{multiple_polylog, mzv_eval, mzv_eval_lc};
pub use zeta::{euler_maclaurin, zeta_euler_maclaurin, zeta_even_closed_form};
