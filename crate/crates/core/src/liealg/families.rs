//! Operator templates `u^k·(base field)` and the fixed algebras built from
//! them.

use super::VectorField;
use crate::exprcore::Expr;
use crate::jetspace::{lower_coordinates, JetCoord, SpaceSpec};

/// One base field of a family; every instance is multiplied by `u^k`, where
/// `u` is the first dependent variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Template {
    /// `x_μ ∂_ν − x_ν ∂_μ` with lowered coordinates, `μ < ν`.
    Rotation { mu: usize, nu: usize },
    /// `∂_μ`.
    Translation { mu: usize },
    /// `∂_u`.
    DependentScaling,
}

/// A family of templates ranging over all admissible indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorFamily {
    Rotations,
    Translations,
    DependentScaling,
}

pub const EIKONAL_FAMILIES: [OperatorFamily; 3] =
    [OperatorFamily::Rotations, OperatorFamily::Translations, OperatorFamily::DependentScaling];

impl OperatorFamily {
    /// Templates in lexicographic index order.
    pub fn templates(self, p: usize) -> Vec<Template> {
        match self {
            OperatorFamily::Rotations => (0..p)
                .flat_map(|mu| (mu + 1..p).map(move |nu| Template::Rotation { mu, nu }))
                .collect(),
            OperatorFamily::Translations => (0..p).map(|mu| Template::Translation { mu }).collect(),
            OperatorFamily::DependentScaling => vec![Template::DependentScaling],
        }
    }
}

/// `u^k` times the base field of `t`, labelled `J^k_{μν}`, `P^k_μ` or `P^k_u`.
///
/// Panics if an index is out of range or a rotation has `μ ≥ ν`.
pub fn template_field(t: Template, k: u32, space: &SpaceSpec) -> VectorField {
    let uk = Expr::var(JetCoord::dep(0)).pow_int(k as i64).expect("nonnegative power");
    let mut xi = vec![Expr::zero(); space.p()];
    let mut eta = vec![Expr::zero(); space.q()];
    let label = match t {
        Template::Rotation { mu, nu } => {
            assert!(mu < nu && nu < space.p(), "rotation indices ({mu}, {nu}) invalid");
            let low = lower_coordinates(space);
            xi[nu] = &uk * &low[mu];
            xi[mu] = -(&uk * &low[nu]);
            format!("J^{k}_{{{mu}{nu}}}")
        }
        Template::Translation { mu } => {
            xi[mu] = uk;
            format!("P^{k}_{mu}")
        }
        Template::DependentScaling => {
            eta[0] = uk;
            format!("P^{k}_u")
        }
    };
    VectorField::new(label, xi, eta, space).expect("point coefficients of the right shape")
}

/// Families in the given order, `k = 0..=k_max` ascending within each
/// family, then templates in index order.
pub fn instantiate_family(families: &[OperatorFamily], k_max: u32, space: &SpaceSpec) -> Vec<VectorField> {
    family_members(families, k_max, space).into_iter().map(|(_, x)| x).collect()
}

/// [`instantiate_family`] with each operator tagged by its power `k`.
pub fn family_members(families: &[OperatorFamily], k_max: u32, space: &SpaceSpec) -> Vec<(u32, VectorField)> {
    let mut out = Vec::new();
    for fam in families {
        let templates = fam.templates(space.p());
        for k in 0..=k_max {
            out.extend(templates.iter().map(|&t| (k, template_field(t, k, space))));
        }
    }
    out
}

/// The truncated eikonal family on `SpaceSpec::lorentz(n)`.
pub fn build_eikonal_algebra(n: usize, k_max: u32) -> Vec<VectorField> {
    instantiate_family(&EIKONAL_FAMILIES, k_max, &SpaceSpec::lorentz(n))
}

/// `D = x_μ ∂_μ`; both index placements carry the metric sign, so
/// `ξ^μ = x^μ`.
pub fn dilation(space: &SpaceSpec) -> VectorField {
    let xi = (0..space.p()).map(|mu| Expr::var(JetCoord::indep(mu))).collect();
    VectorField::new("D", xi, vec![Expr::zero(); space.q()], space).expect("point coefficients")
}

/// Rotations `J_{μν}`, the dilation `D`, `P^0_u` and the translations
/// `P^0_μ` on `SpaceSpec::lorentz(n)`.
pub fn build_classical_generating_set(n: usize) -> Vec<VectorField> {
    let space = SpaceSpec::lorentz(n);
    let p = space.p();
    let mut out: Vec<VectorField> = OperatorFamily::Rotations
        .templates(p)
        .into_iter()
        .map(|t| {
            let Template::Rotation { mu, nu } = t else { unreachable!() };
            template_field(t, 0, &space).with_label(format!("J_{{{mu}{nu}}}"))
        })
        .collect();
    out.push(dilation(&space));
    out.push(template_field(Template::DependentScaling, 0, &space));
    out.extend((0..p).map(|mu| template_field(Template::Translation { mu }, 0, &space)));
    out
}
