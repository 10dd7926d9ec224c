//! Absolute and relative invariance checks, functional independence, and
//! the symmetric tensor `θ` of the eikonal algebra with its traces.

mod theta;

use rayon::prelude::*;
use thiserror::Error;

use crate::exprcore::{poly_gcd, Expr};
use crate::jetspace::{enumerate_jet_coords, SpaceSpec};
use crate::liealg::{Gradient, LieError, ProlongedField, VectorField};
use crate::rankcalc::{bareiss_rank, prolong_all, EvaluatedSystem, RankError, Sampling};

pub use theta::{
    build_theta, eikonal_form, trace_power, trace_powers, verify_basis, verify_covariance, BasisReport,
    IdentityFailure, Theta,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvError {
    #[error("the zero expression cannot be tested for invariance")]
    ZeroExpression,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("expected a single dependent variable, found {0}")]
    DependentCount(usize),
}

/// Outcome of an invariance test against a list of operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantVerdict {
    /// `pr X (F) = 0` for every operator.
    Absolute,
    /// `pr X (F) = λ_X F` for every operator; multipliers in operator order,
    /// some possibly zero.
    Relative { multipliers: Vec<(String, Expr)> },
    /// The first operator, in input order, for which neither holds.
    NotInvariant { witness: String },
}

impl InvariantVerdict {
    pub fn is_invariant(&self) -> bool {
        !matches!(self, InvariantVerdict::NotInvariant { .. })
    }

    /// `absolute`, `relative` or `not_invariant`.
    pub fn kind(&self) -> &'static str {
        match self {
            InvariantVerdict::Absolute => "absolute",
            InvariantVerdict::Relative { .. } => "relative",
            InvariantVerdict::NotInvariant { .. } => "not_invariant",
        }
    }
}

/// Which verdicts count as invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Absolute,
    #[default]
    Relative,
}

/// The multiplier `λ` with `X(F) = λ·F`, if it is admissible.
///
/// For polynomial `F` and polynomial `X(F)` this is exact division. In
/// general, with `F = N/D`, `λ = X(F)/F` is admissible when its
/// denominator shares no factor with `N` or `D`: the multiplier may only be
/// singular where the operator coefficients are.
pub fn relative_multiplier(xf: &Expr, f: &Expr) -> Option<Expr> {
    if xf.is_zero() {
        return Some(Expr::zero());
    }
    if f.is_polynomial() && xf.is_polynomial() {
        return xf.num().divide_exact(f.num()).map(Expr::from_poly);
    }
    let lambda = xf.checked_div(f).expect("F is nonzero");
    let admissible =
        poly_gcd(lambda.den(), f.num()).is_constant() && poly_gcd(lambda.den(), f.den()).is_constant();
    admissible.then_some(lambda)
}

/// Invariance of `F` under already prolonged operators.
pub fn classify_prolonged(f: &Expr, fields: &[ProlongedField], mode: Mode) -> Result<InvariantVerdict, InvError> {
    if f.is_zero() {
        return Err(InvError::ZeroExpression);
    }
    let grad = Gradient::of(f);
    let results: Vec<Result<Option<Expr>, LieError>> = fields
        .par_iter()
        .map(|x| {
            let xf = x.apply_gradient(&grad)?;
            Ok(match mode {
                Mode::Absolute => xf.is_zero().then(Expr::zero),
                Mode::Relative => relative_multiplier(&xf, f),
            })
        })
        .collect();
    let mut multipliers = Vec::with_capacity(fields.len());
    for (x, r) in fields.iter().zip(results) {
        match r? {
            Some(l) => multipliers.push((x.label().to_string(), l)),
            None => return Ok(InvariantVerdict::NotInvariant { witness: x.label().to_string() }),
        }
    }
    if multipliers.iter().all(|(_, l)| l.is_zero()) {
        Ok(InvariantVerdict::Absolute)
    } else {
        Ok(InvariantVerdict::Relative { multipliers })
    }
}

/// Relative-mode invariance of `F` under the order-`r` prolongations.
pub fn classify_invariant(
    f: &Expr,
    operators: &[VectorField],
    r: usize,
    space: &SpaceSpec,
) -> Result<InvariantVerdict, InvError> {
    classify_prolonged(f, &prolong_all(operators, r, space), Mode::Relative)
}

/// Whether the Jacobian of `exprs` with respect to all jet coordinates up to
/// order `r` has full row rank at one of the sampled points.
pub fn functional_independence(
    exprs: &[Expr],
    r: usize,
    space: &SpaceSpec,
    sampling: Sampling,
) -> Result<bool, InvError> {
    if let Some(needed) = exprs.iter().map(Expr::max_order).max().filter(|&o| o > r) {
        return Err(LieError::OrderExceeded { needed, available: r }.into());
    }
    let columns = enumerate_jet_coords(space, r);
    let jacobian: Vec<Vec<Expr>> = exprs
        .par_iter()
        .map(|e| columns.iter().map(|&c| e.diff(c)).collect())
        .collect();
    let system = EvaluatedSystem::from_table(&jacobian, &columns, sampling)?;
    Ok((0..system.point_count()).any(|i| bareiss_rank(system.matrix(i)) == exprs.len()))
}
