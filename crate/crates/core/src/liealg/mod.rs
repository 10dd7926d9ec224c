//! Point vector fields, their prolongations to jet space, commutators, and
//! the operator families obtained by Taylor-truncating arbitrary-function
//! coefficients.

mod families;

use std::sync::OnceLock;

use thiserror::Error;

use crate::exprcore::{Expr, Poly};
use crate::jetspace::{total_derivative, CoordKind, JetCoord, MultiIndex, SpaceSpec};

pub use families::{
    build_classical_generating_set, build_eikonal_algebra, dilation, family_members, instantiate_family, template_field,
    OperatorFamily, Template, EIKONAL_FAMILIES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("expected {expected} coefficients on {what}, got {got}")]
    CoefficientCount { what: &'static str, expected: usize, got: usize },
    #[error("coefficient of `{label}` involves the derivative coordinate {coord}")]
    DerivativeInCoefficient { label: String, coord: JetCoord },
    #[error("expression has order {needed} but the prolongation has order {available}")]
    OrderExceeded { needed: usize, available: usize },
}

/// `X = Σ ξ^i ∂/∂x_i + Σ η^α ∂/∂u^α` with coefficients depending on `x`
/// and `u` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    label: String,
    xi: Vec<Expr>,
    eta: Vec<Expr>,
}

impl VectorField {
    pub fn new(label: impl Into<String>, xi: Vec<Expr>, eta: Vec<Expr>, space: &SpaceSpec) -> Result<Self, LieError> {
        let label = label.into();
        if xi.len() != space.p() {
            return Err(LieError::CoefficientCount { what: "independents", expected: space.p(), got: xi.len() });
        }
        if eta.len() != space.q() {
            return Err(LieError::CoefficientCount { what: "dependents", expected: space.q(), got: eta.len() });
        }
        for e in xi.iter().chain(&eta) {
            if let Some(coord) = e.variables().into_iter().find(|c| !c.is_point_coord()) {
                return Err(LieError::DerivativeInCoefficient { label, coord });
            }
        }
        Ok(VectorField { label, xi, eta })
    }

    pub fn zero(label: impl Into<String>, space: &SpaceSpec) -> Self {
        VectorField {
            label: label.into(),
            xi: vec![Expr::zero(); space.p()],
            eta: vec![Expr::zero(); space.q()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn xi(&self) -> &[Expr] {
        &self.xi
    }

    pub fn eta(&self) -> &[Expr] {
        &self.eta
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().chain(&self.eta).all(Expr::is_zero)
    }

    /// Coefficient on a point coordinate; zero for derivative coordinates.
    pub fn point_coefficient(&self, c: JetCoord) -> Expr {
        match c.kind() {
            CoordKind::Indep(i) => self.xi[i].clone(),
            CoordKind::Dep(a) => self.eta[a].clone(),
            CoordKind::Deriv(..) => Expr::zero(),
        }
    }

    /// `a·X + b·Y` coefficient-wise, for constants `a` and `b`.
    pub fn linear_combination(a: &Expr, x: &VectorField, b: &Expr, y: &VectorField) -> VectorField {
        let comb = |s: &[Expr], t: &[Expr]| s.iter().zip(t).map(|(p, q)| &(a * p) + &(b * q)).collect();
        VectorField {
            label: format!("({a})*{} + ({b})*{}", x.label, y.label),
            xi: comb(&x.xi, &y.xi),
            eta: comb(&x.eta, &y.eta),
        }
    }

    /// First-order action on a function of `x` and `u`.
    pub fn act(&self, f: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for v in f.variables() {
            let c = self.point_coefficient(v);
            if !c.is_zero() {
                acc = &acc + &(&c * &f.diff(v));
            }
        }
        acc
    }
}

/// `[X, Y]`, whose coefficient on each point coordinate `z` is
/// `X(Y(z)) − Y(X(z))`.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    let bracket = |cx: &Expr, cy: &Expr| &x.act(cy) - &y.act(cx);
    VectorField {
        label: format!("[{},{}]", x.label, y.label),
        xi: x.xi.iter().zip(&y.xi).map(|(a, b)| bracket(a, b)).collect(),
        eta: x.eta.iter().zip(&y.eta).map(|(a, b)| bracket(a, b)).collect(),
    }
}

/// The order-`r` prolongation of a point field.
///
/// Coefficients of each derivative order are computed on first use and then
/// kept; the cache is shared safely between threads.
#[derive(Debug)]
pub struct ProlongedField {
    base: VectorField,
    space: SpaceSpec,
    order: usize,
    /// `d_xi[i][j] = D_i ξ^j`.
    d_xi: Vec<Vec<Expr>>,
    /// `levels[s - 1]`: coefficients on order-`s` coordinates, sorted by coordinate.
    levels: Vec<OnceLock<Vec<(JetCoord, Expr)>>>,
}

pub fn prolong(x: &VectorField, r: usize, space: &SpaceSpec) -> ProlongedField {
    let d_xi = (0..space.p())
        .map(|i| x.xi.iter().map(|xi| total_derivative(xi, i, space, 0)).collect())
        .collect();
    ProlongedField {
        base: x.clone(),
        space: space.clone(),
        order: r,
        d_xi,
        levels: (0..r).map(|_| OnceLock::new()).collect(),
    }
}

impl ProlongedField {
    pub fn base(&self) -> &VectorField {
        &self.base
    }

    pub fn label(&self) -> &str {
        &self.base.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Coefficients on all derivative coordinates of order `s`, in
    /// coordinate order. Panics if `s` is 0 or exceeds the order.
    pub fn level(&self, s: usize) -> &[(JetCoord, Expr)] {
        assert!(s >= 1 && s <= self.order, "order {s} outside 1..={}", self.order);
        self.levels[s - 1].get_or_init(|| self.compute_level(s))
    }

    fn compute_level(&self, s: usize) -> Vec<(JetCoord, Expr)> {
        let p = self.space.p();
        let mut out = Vec::new();
        for alpha in 0..self.space.q() {
            for k in MultiIndex::all_of_order(p, s) {
                let (j, i) = k.split_last().expect("order ≥ 1");
                // η^{α,(J,i)} = D_i η^{α,J} − Σ_l (D_i ξ^l) u^α_{J∪{l}}
                let prev = if s == 1 {
                    self.base.eta[alpha].clone()
                } else {
                    self.lookup(JetCoord::deriv(alpha, j))
                };
                let mut c = total_derivative(&prev, i, &self.space, s - 1);
                for (l, dxi) in self.d_xi[i].iter().enumerate() {
                    if !dxi.is_zero() {
                        c = &c - &(dxi * &Expr::var(JetCoord::deriv(alpha, j.with(l))));
                    }
                }
                out.push((JetCoord::deriv(alpha, k), c));
            }
        }
        out.sort_by_key(|(c, _)| *c);
        out
    }

    fn lookup(&self, c: JetCoord) -> Expr {
        let level = self.level(c.order());
        let pos = level.binary_search_by_key(&c, |(k, _)| *k).expect("coordinate belongs to its level");
        level[pos].1.clone()
    }

    /// Coefficient on any jet coordinate up to the prolongation order.
    pub fn coefficient(&self, c: JetCoord) -> Result<Expr, LieError> {
        match c.kind() {
            CoordKind::Deriv(..) if c.order() > self.order => Err(LieError::OrderExceeded {
                needed: c.order(),
                available: self.order,
            }),
            CoordKind::Deriv(..) => Ok(self.lookup(c)),
            _ => Ok(self.base.point_coefficient(c)),
        }
    }

    /// `pr X (F)`.
    pub fn apply(&self, f: &Expr) -> Result<Expr, LieError> {
        self.apply_gradient(&Gradient::of(f))
    }

    /// `pr X (F)` from a precomputed gradient of `F`.
    pub fn apply_gradient(&self, g: &Gradient) -> Result<Expr, LieError> {
        if g.order > self.order {
            return Err(LieError::OrderExceeded { needed: g.order, available: self.order });
        }
        let xn = self.apply_parts(&g.num_parts)?;
        if g.f.is_polynomial() {
            return Ok(xn);
        }
        let xd = self.apply_parts(&g.den_parts)?;
        if xn.is_polynomial() && xd.is_polynomial() {
            return Ok(g.f.quotient_rule(xn.num().clone(), xd.num().clone()));
        }
        let (n, d) = (Expr::from_poly(g.f.num().clone()), Expr::from_poly(g.f.den().clone()));
        Ok((&(&xn * &d) - &(&n * &xd)).checked_div(&(&d * &d)).expect("nonzero denominator"))
    }

    fn apply_parts(&self, parts: &[(JetCoord, Poly)]) -> Result<Expr, LieError> {
        let mut acc = Expr::zero();
        for (v, d) in parts {
            let c = self.coefficient(*v)?;
            if c.is_zero() {
                continue;
            }
            acc = if c.is_polynomial() && acc.is_polynomial() {
                Expr::from_poly(acc.num().add(&c.num().mul(d)))
            } else {
                &acc + &(&c * &Expr::from_poly(d.clone()))
            };
        }
        Ok(acc)
    }
}

/// Partial derivatives of the numerator and denominator of an expression,
/// reusable across many operators.
#[derive(Clone, Debug)]
pub struct Gradient {
    f: Expr,
    num_parts: Vec<(JetCoord, Poly)>,
    den_parts: Vec<(JetCoord, Poly)>,
    order: usize,
}

impl Gradient {
    pub fn of(f: &Expr) -> Self {
        let parts = |p: &Poly| -> Vec<(JetCoord, Poly)> {
            p.variables().into_iter().map(|v| (v, p.diff(v))).collect()
        };
        Gradient {
            f: f.clone(),
            num_parts: parts(f.num()),
            den_parts: if f.is_polynomial() { Vec::new() } else { parts(f.den()) },
            order: f.max_order(),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.f
    }
}

/// Commutator of two prolonged fields as first-order operators on the
/// order-`r` jet space: the coefficient on `c` is `prX(prY c) − prY(prX c)`,
/// listed for every coordinate of `enumerate_jet_coords(space, r)`.
pub fn jet_commutator(x: &ProlongedField, y: &ProlongedField, r: usize) -> Result<Vec<(JetCoord, Expr)>, LieError> {
    crate::jetspace::enumerate_jet_coords(&x.space, r)
        .into_iter()
        .map(|c| {
            let a = x.apply(&y.coefficient(c)?)?;
            let b = y.apply(&x.coefficient(c)?)?;
            Ok((c, &a - &b))
        })
        .collect()
}
