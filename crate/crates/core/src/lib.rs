//! Exact and numeric toolkit for multiple zeta values.
//!
//! The crate has two pillars that check each other:
//!
//! * a symbolic pillar over exact rationals: compositions and binary words
//!   ([`words`]), finite linear combinations ([`lincomb`]), the shuffle and
//!   quasi-shuffle products with their regularizations ([`algebra`]), the
//!   double-shuffle relation generator with exact elimination
//!   ([`double_shuffle`], [`linalg`]) and the dimension counts
//!   ([`dimensions`]);
//! * a numeric pillar: fixed-point big reals, Bernoulli numbers, zeta and
//!   multiple zeta evaluation to arbitrary precision ([`numerics`]), integer
//!   relation detection by lattice reduction ([`detect`]) and Feynman graph
//!   polynomials and periods ([`feynman`]).
//!
//! Compositions follow the convention `ζ(n₁,…,n_r) = Σ_{k₁<…<k_r} k₁^{-n₁}…k_r^{-n_r}`:
//! the *last* part controls convergence.

pub mod algebra;
pub mod detect;
pub mod dimensions;
pub mod double_shuffle;
pub mod error;
pub mod expr;
pub mod feynman;
pub mod lincomb;
pub mod linalg;
pub mod numerics;
pub mod words;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use numerics::{BigReal, Precision};
pub use words::{BinaryWord, Composition, FLetter, Letter, Word};
