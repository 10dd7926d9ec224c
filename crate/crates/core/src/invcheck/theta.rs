//! The tensor `θ_{μν}` on second-order jets, its traces `S_k`, and the
//! checks built on them.

use rayon::prelude::*;

use super::{classify_prolonged, functional_independence, InvError, InvariantVerdict, Mode};
use crate::exprcore::{Expr, Rat};
use crate::jetspace::{contract, gradient_family, JetCoord, Metric, SpaceSpec};
use crate::liealg::{build_eikonal_algebra, Gradient, ProlongedField};
use crate::rankcalc::{generic_rank, prolong_all, RankQuery, Sampling};

/// Symmetric `p × p` array of second-order expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    comps: Vec<Vec<Expr>>,
}

impl Theta {
    /// All components zero.
    pub fn zero(p: usize) -> Self {
        Theta { comps: vec![vec![Expr::zero(); p]; p] }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn get(&self, mu: usize, nu: usize) -> &Expr {
        &self.comps[mu][nu]
    }
}

/// `W = u_λ u_λ`, contracted with the metric.
pub fn eikonal_form(space: &SpaceSpec) -> Expr {
    let du = gradient_family(space, 0);
    contract(&du, &du, space.metric()).expect("families have length p")
}

/// `θ_{μν} = u_μ A_ν + u_ν A_μ − u_μ u_ν L − W u_{μν}` with
/// `A_ν = u_λ u_{λν}`, `L = u_{λλ}`, `W = u_λ u_λ`, every repeated `λ`
/// contracted with the metric. Uses the first dependent variable.
pub fn build_theta(space: &SpaceSpec) -> Result<Theta, InvError> {
    if space.q() != 1 {
        return Err(InvError::DependentCount(space.q()));
    }
    let p = space.p();
    let g = space.metric();
    let du = gradient_family(space, 0);
    let hess = |a: usize, b: usize| Expr::var(JetCoord::jet(0, &[a, b]));
    let a: Vec<Expr> = (0..p)
        .map(|nu| contract(&du, &(0..p).map(|l| hess(l, nu)).collect::<Vec<_>>(), g).expect("length p"))
        .collect();
    let w = eikonal_form(space);
    let l = contract(&vec![Expr::one(); p], &(0..p).map(|l| hess(l, l)).collect::<Vec<_>>(), g).expect("length p");
    let mut comps = vec![vec![Expr::zero(); p]; p];
    for mu in 0..p {
        for nu in mu..p {
            let t = &(&(&du[mu] * &a[nu]) + &(&du[nu] * &a[mu])) - &(&(&du[mu] * &du[nu]) * &l);
            let t = &t - &(&w * &hess(mu, nu));
            comps[mu][nu] = t.clone();
            comps[nu][mu] = t;
        }
    }
    Ok(Theta { comps })
}

/// `M = Gθ`, so that cyclic contractions become matrix traces.
fn mixed(theta: &Theta, metric: &Metric) -> Vec<Vec<Expr>> {
    theta
        .comps
        .iter()
        .enumerate()
        .map(|(mu, row)| {
            if metric.sign(mu) > 0 {
                row.clone()
            } else {
                row.iter().map(|e| -e.clone()).collect()
            }
        })
        .collect()
}

fn mat_mul(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let p = a.len();
    (0..p)
        .into_par_iter()
        .map(|i| {
            (0..p)
                .map(|j| (0..p).fold(Expr::zero(), |acc, l| &acc + &(&a[i][l] * &b[l][j])))
                .collect()
        })
        .collect()
}

/// `tr(P·M)` without forming the product.
fn trace_of_product(pm: &[Vec<Expr>], m: &[Vec<Expr>]) -> Expr {
    let p = m.len();
    (0..p)
        .flat_map(|i| (0..p).map(move |j| (i, j)))
        .fold(Expr::zero(), |acc, (i, j)| &acc + &(&pm[i][j] * &m[j][i]))
}

/// `S_k = θ_{μ1μ2} θ_{μ2μ3} ⋯ θ_{μkμ1}`, `k` factors, all indices
/// contracted with the metric. Panics if `k = 0`.
pub fn trace_power(theta: &Theta, k: usize, metric: &Metric) -> Expr {
    trace_powers(theta, k, metric).pop().expect("k ≥ 1")
}

/// `[S_1, …, S_kmax]`.
pub fn trace_powers(theta: &Theta, k_max: usize, metric: &Metric) -> Vec<Expr> {
    assert!(k_max >= 1, "trace powers start at k = 1");
    let m = mixed(theta, metric);
    let mut out = Vec::with_capacity(k_max);
    let mut power: Option<Vec<Vec<Expr>>> = None;
    for k in 1..=k_max {
        let s = match &power {
            None => (0..m.len()).fold(Expr::zero(), |acc, i| &acc + &m[i][i]),
            Some(pm) => trace_of_product(pm, &m),
        };
        out.push(s);
        if k < k_max {
            power = Some(match power {
                None => m.clone(),
                Some(pm) => mat_mul(&pm, &m),
            });
        }
    }
    out
}

/// Verdicts for `S_1 … S_{p-1}` under order-2 prolonged operators.
pub fn verify_covariance(
    theta: &Theta,
    fields: &[ProlongedField],
    space: &SpaceSpec,
) -> Result<Vec<(usize, InvariantVerdict)>, InvError> {
    let n = space.p() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    trace_powers(theta, n, space.metric())
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let v = if s.is_zero() {
                InvariantVerdict::Absolute
            } else {
                classify_prolonged(&s, fields, Mode::Relative)?
            };
            Ok((i + 1, v))
        })
        .collect()
}

/// An operator violating `2 λ_X(S_k) = 3k λ_X(W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub k: usize,
    pub operator: String,
    /// `2 X(S_k) − 3k λ_X(W) S_k`, or `X(W)` when `W` itself is not relative.
    pub residual: Expr,
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub n: usize,
    pub k_max: u32,
    pub operator_count: usize,
    /// `λ_X(W)` per operator, in operator order.
    pub eikonal_multipliers: Vec<(String, Expr)>,
    pub failures: Vec<IdentityFailure>,
    /// Number of `k` for which `S_k² / W^{3k}` is an absolute invariant.
    pub absolute_count: usize,
    pub independent: bool,
    /// `jet_dimension − rank` at order 2.
    pub invariant_count: usize,
}

impl BasisReport {
    pub fn identities_hold(&self) -> bool {
        self.failures.is_empty()
    }

    /// Identities, independence, and the count all agree with `n`.
    pub fn holds(&self) -> bool {
        self.identities_hold() && self.independent && self.invariant_count == self.n && self.absolute_count == self.n
    }
}

/// Checks that `S_k / W^{3k/2}`, `k = 1..n`, form a basis of the
/// second-order absolute invariants of the eikonal family truncated at
/// `k_max`.
///
/// Absolute invariance is tested through `2 X(S_k) = 3k λ_X(W) S_k`, which
/// avoids half-integer powers.
pub fn verify_basis(n: usize, k_max: u32, sampling: Sampling) -> Result<BasisReport, InvError> {
    let space = SpaceSpec::lorentz(n);
    let ops = build_eikonal_algebra(n, k_max);
    let fields = prolong_all(&ops, 2, &space);
    let w = eikonal_form(&space);
    let s = trace_powers(&build_theta(&space)?, n, space.metric());
    let w_grad = Gradient::of(&w);
    let s_grads: Vec<Gradient> = s.par_iter().map(Gradient::of).collect();

    let per_op: Vec<Result<(Expr, Vec<IdentityFailure>), InvError>> = fields
        .par_iter()
        .map(|x| {
            let xw = x.apply_gradient(&w_grad)?;
            let Some(lw) = super::relative_multiplier(&xw, &w) else {
                let fails = (1..=n)
                    .map(|k| IdentityFailure { k, operator: x.label().to_string(), residual: xw.clone() })
                    .collect();
                return Ok((Expr::zero(), fails));
            };
            let mut fails = Vec::new();
            for (i, (sk, g)) in s.iter().zip(&s_grads).enumerate() {
                let k = i + 1;
                let lhs = x.apply_gradient(g)?.scale(&Rat::from_integer(2.into()));
                let rhs = (&lw * sk).scale(&Rat::from_integer((3 * k).into()));
                let residual = &lhs - &rhs;
                if !residual.is_zero() {
                    fails.push(IdentityFailure { k, operator: x.label().to_string(), residual });
                }
            }
            Ok((lw, fails))
        })
        .collect();

    let mut eikonal_multipliers = Vec::new();
    let mut failures = Vec::new();
    for (x, r) in fields.iter().zip(per_op) {
        let (lw, f) = r?;
        eikonal_multipliers.push((x.label().to_string(), lw));
        failures.extend(f);
    }
    let absolute_count = (1..=n).filter(|k| failures.iter().all(|f| f.k != *k)).count();
    let independent = functional_independence(&s, 2, &space, sampling)?;
    let invariant_count = generic_rank(&RankQuery { operators: ops.clone(), order: 2, space, sampling })?.invariant_count;
    Ok(BasisReport {
        n,
        k_max,
        operator_count: ops.len(),
        eikonal_multipliers,
        failures,
        absolute_count,
        independent,
        invariant_count,
    })
}
