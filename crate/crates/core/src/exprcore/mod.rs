//! Exact arithmetic over jet coordinates.
//!
//! [`Poly`] is a sparse polynomial with [`Rat`] coefficients kept in
//! graded-lexicographic order; [`Expr`] is a reduced quotient of two such
//! polynomials. Both are canonical, so equality and zero tests are
//! structural. The textual grammar lives in [`parse`] and [`print`].

mod expr;
mod gcd;
pub mod parse;
mod poly;
pub mod print;

use num_rational::BigRational;
use thiserror::Error;

use crate::jetspace::JetCoord;

pub use expr::{arith, ArithOp, Expr, Point};
pub use gcd::poly_gcd;
pub use parse::{parse_expr, parse_expr_with_params};
pub use poly::{Monomial, Poly};
pub use print::{print_expr, print_expr_in};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at column {}: {message}", pos + 1)]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at column {}", pos + 1)]
    UnknownVariable { name: String, pos: usize },
    #[error("zero denominator at column {}", pos + 1)]
    ZeroDenominator { pos: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("no value assigned to {0}")]
    MissingAssignment(JetCoord),
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
}

/// Formal partial derivative of `e` with respect to the coordinate `v`.
pub fn diff_partial(e: &Expr, v: JetCoord) -> Expr {
    e.diff(v)
}

pub fn pow_int(e: &Expr, k: i64) -> Result<Expr, ExprError> {
    e.pow_int(k)
}

pub fn eval_at(e: &Expr, point: &Point) -> Result<Rat, ExprError> {
    e.eval_at(point)
}

/// `Some(q)` with `a = q·b`, or `None` when `b` does not divide `a`.
///
/// Panics if `b` is zero.
pub fn divide_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    a.divide_exact(b)
}

#[cfg(test)]
mod tests;
