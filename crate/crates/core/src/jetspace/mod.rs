//! Jet space: coordinate registry, enumeration, total derivatives and
//! metric contraction.

mod coord;

use num_integer::binomial;
use thiserror::Error;

use crate::exprcore::{Expr, Poly};

pub use coord::{CoordKind, JetCoord, Metric, MultiIndex, SpaceError, SpaceSpec, MAX_DEPENDENTS, MAX_INDEPENDENTS, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("index families have lengths {left} and {right}, expected {expected}")]
    LengthMismatch { left: usize, right: usize, expected: usize },
}

/// All coordinates of the order-`r` jet space: independents, dependents,
/// then derivatives by order, dependent index and multi-index.
pub fn enumerate_jet_coords(space: &SpaceSpec, r: usize) -> Vec<JetCoord> {
    let mut out: Vec<JetCoord> = (0..space.p()).map(JetCoord::indep).collect();
    out.extend((0..space.q()).map(JetCoord::dep));
    for s in 1..=r {
        let jets = MultiIndex::all_of_order(space.p(), s);
        for alpha in 0..space.q() {
            out.extend(jets.iter().map(|j| JetCoord::deriv(alpha, *j)));
        }
    }
    out
}

/// `p + q·C(p + r, r)`, the closed form of `enumerate_jet_coords(..).len()`.
pub fn jet_dimension(space: &SpaceSpec, r: usize) -> usize {
    space.p() + space.q() * binomial(space.p() + r, r)
}

/// Total derivative `D_i` of a polynomial.
///
/// Panics if `p` involves a derivative of order greater than `r_cap`.
pub fn total_derivative_poly(p: &Poly, i: usize, space: &SpaceSpec, r_cap: usize) -> Poly {
    assert!(i < space.p(), "independent index {i} out of range");
    let mut acc = Poly::zero();
    for v in p.variables() {
        let shifted = match v.kind() {
            CoordKind::Indep(j) if j == i => None,
            CoordKind::Indep(_) => continue,
            CoordKind::Dep(a) => Some(JetCoord::deriv(a, MultiIndex::new([i]))),
            CoordKind::Deriv(a, j) => {
                assert!(
                    j.order() <= r_cap,
                    "coordinate {v} exceeds the jet order cap {r_cap}"
                );
                Some(JetCoord::deriv(a, j.with(i)))
            }
        };
        let d = p.diff(v);
        acc = match shifted {
            None => acc.add(&d),
            Some(c) => acc.add(&d.mul(&Poly::var(c))),
        };
    }
    acc
}

/// Total derivative `D_i F = ∂F/∂x_i + Σ u^α_{J,i} ∂F/∂u^α_J`.
///
/// Panics if `e` involves a derivative of order greater than `r_cap`.
pub fn total_derivative(e: &Expr, i: usize, space: &SpaceSpec, r_cap: usize) -> Expr {
    let dn = total_derivative_poly(e.num(), i, space, r_cap);
    if e.is_polynomial() {
        return Expr::from_poly(dn);
    }
    let dd = total_derivative_poly(e.den(), i, space, r_cap);
    e.quotient_rule(dn, dd)
}

/// `Σ_μ g_μ a_μ b_μ`.
pub fn contract(a: &[Expr], b: &[Expr], metric: &Metric) -> Result<Expr, JetError> {
    if a.len() != metric.dim() || b.len() != metric.dim() {
        return Err(JetError::LengthMismatch {
            left: a.len(),
            right: b.len(),
            expected: metric.dim(),
        });
    }
    let mut acc = Expr::zero();
    for (mu, (x, y)) in a.iter().zip(b).enumerate() {
        let t = x * y;
        acc = if metric.sign(mu) > 0 { &acc + &t } else { &acc - &t };
    }
    Ok(acc)
}

/// Covariant components `x_μ = g_μ x^μ`.
pub fn lower_coordinates(space: &SpaceSpec) -> Vec<Expr> {
    (0..space.p())
        .map(|mu| {
            let x = Expr::var(JetCoord::indep(mu));
            if space.metric().sign(mu) > 0 {
                x
            } else {
                -x
            }
        })
        .collect()
}

/// First-derivative family `(u^α_0, …, u^α_{p-1})`.
pub fn gradient_family(space: &SpaceSpec, alpha: usize) -> Vec<Expr> {
    (0..space.p()).map(|mu| Expr::var(JetCoord::jet(alpha, &[mu]))).collect()
}

#[cfg(test)]
mod tests;
