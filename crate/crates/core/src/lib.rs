//! Differential invariants of Taylor-truncated Lie algebras of point
//! operators.
//!
//! The crate is layered bottom-up:
//!
//! - [`exprcore`]: exact rational functions over jet coordinates, with a
//!   parser and printer.
//! - [`jetspace`]: the coordinate registry, total derivatives and metric
//!   contraction.
//! - [`liealg`]: vector fields, prolongation, commutators and the operator
//!   families obtained by expanding arbitrary-function coefficients in
//!   powers of the dependent variable.
//! - [`rankcalc`]: generic rank of prolonged systems by exact evaluation at
//!   seeded random points, invariant counts, truncation scans and greedy
//!   generating sets.
//! - [`invcheck`]: absolute/relative invariance tests, the tensor `θ` for
//!   the eikonal algebra, its traces `S_k`, and basis verification.

pub mod exprcore;
pub mod invcheck;
pub mod jetspace;
pub mod liealg;
pub mod rankcalc;

#[cfg(test)]
mod testutil;
