//! Graphs, Kirchhoff polynomials and parametric periods.

mod graph;
mod kirchhoff;
mod matching;
mod period;

pub use graph::{Edge, Graph, MAX_EDGES};
pub use kirchhoff::{
    is_primitive_log_divergent, kirchhoff_polynomial, matrix_tree_count, spanning_trees, GraphPolynomial,
    MAX_PRIMITIVITY_EDGES,
};
pub use matching::{known_periods, match_period, KnownPeriod, PeriodCandidate, MATCH_WEIGHT_CAP};
pub use period::{period_monte_carlo, period_monte_carlo_with, ChartIntegrand, DEFAULT_WARP};
