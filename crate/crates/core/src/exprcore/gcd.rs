//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive scheme: pick a variable common to both inputs, split off the
//! contents (gcds of the coefficients, computed recursively), then run a
//! primitive pseudo-remainder sequence on the primitive parts.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Monomial, Poly};
use super::Rat;
use crate::jetspace::JetCoord;

/// Greatest common divisor, normalized to coprime integer coefficients with
/// a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        return monomial_content_gcd(a, b);
    }
    let va = a.variables();
    let vb = b.variables();
    let common: Vec<JetCoord> = va.iter().copied().filter(|x| vb.binary_search(x).is_ok()).collect();
    // A common factor involves only shared variables, and only those whose
    // degree bound from univariate images is positive.
    let candidates: Vec<JetCoord> =
        common.into_iter().filter(|&v| degree_bound(a, b, v, &va, &vb) != Some(0)).collect();
    if candidates.is_empty() {
        return Poly::one();
    }
    // Keep the smaller input as `b` and prefer a variable in which its
    // leading coefficient is constant: it is then primitive in `v` and
    // pseudo-division does not inflate coefficients.
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let v = candidates
        .iter()
        .copied()
        .find(|&v| b.coefficients_in(v).pop().is_some_and(|c| c.is_constant()))
        .unwrap_or(candidates[0]);

    let cb = content_in(b, v);
    if cb.is_constant() {
        // b is primitive in v, so no factor free of v can be common
        return primitive_part_in(&primitive_prs(a.clone(), b.clone(), v), v);
    }
    let ca = content_in(a, v);
    let c = poly_gcd(&ca, &cb);
    let pa = a.divide_exact(&ca).expect("content divides");
    let pb = b.divide_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    c.mul(&g).primitive()
}

/// Upper bound on `deg_v gcd(a, b)` from univariate images.
///
/// All other variables are set to small integers. When the leading
/// coefficients in `v` survive the substitution, the gcd of the images has
/// at least the degree of the image of the true gcd, which has full degree.
/// Returns `None` if no tried point keeps both leading coefficients.
fn degree_bound(a: &Poly, b: &Poly, v: JetCoord, va: &[JetCoord], vb: &[JetCoord]) -> Option<u32> {
    let others: Vec<JetCoord> = va.iter().chain(vb.iter()).copied().filter(|&x| x != v).collect();
    for attempt in 0..4i64 {
        let value = |x: JetCoord| -> Rat {
            let k = others.iter().position(|&y| y == x).unwrap_or(0) as i64;
            // distinct, deterministic, small
            Rat::from_integer(BigInt::from(((k * 7 + attempt * 13 + 3) % 29) - 14))
        };
        let (Some(ua), Some(ub)) = (univariate_image(a, v, &value), univariate_image(b, v, &value)) else {
            continue;
        };
        return Some(univariate_gcd_degree(ua, ub));
    }
    None
}

/// Dense coefficients of `a(v)` with every other variable substituted, or
/// `None` if the leading coefficient in `v` vanishes.
fn univariate_image(a: &Poly, v: JetCoord, value: &dyn Fn(JetCoord) -> Rat) -> Option<Vec<Rat>> {
    let d = a.degree_in(v) as usize;
    let mut out = vec![Rat::zero(); d + 1];
    for (m, c) in a.terms() {
        let mut t = c.clone();
        let mut e = 0;
        for &(x, k) in m.factors() {
            if x == v {
                e = k as usize;
            } else {
                t *= num_traits::pow(value(x), k as usize);
            }
        }
        out[e] += t;
    }
    if out[d].is_zero() {
        None
    } else {
        Some(out)
    }
}

fn univariate_gcd_degree(mut a: Vec<Rat>, mut b: Vec<Rat>) -> u32 {
    fn trim(p: &mut Vec<Rat>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = a.last().unwrap() / &lb;
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &f * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1) as u32
}

/// gcd of the coefficients of `a` viewed as a polynomial in `v`.
fn content_in(a: &Poly, v: JetCoord) -> Poly {
    let mut coeffs: Vec<Poly> = a.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.iter().any(Poly::is_constant) {
        return Poly::one();
    }
    coeffs.sort_by_key(Poly::len);
    let mut g = Poly::zero();
    for c in coeffs {
        g = poly_gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive_part_in(a: &Poly, v: JetCoord) -> Poly {
    let c = content_in(a, v);
    a.divide_exact(&c).expect("content divides").primitive()
}

/// gcd of two polynomials, `b` primitive with respect to `v`, up to a
/// factor free of `v`.
fn primitive_prs(a: Poly, b: Poly, v: JetCoord) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.degree_in(v) == 0 {
            // b is free of v and primitive in v, hence a unit in this variable.
            return Poly::one();
        }
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return b.primitive();
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

/// `lc(b)^e · a mod b` with respect to `v`.
fn pseudo_remainder(a: &Poly, b: &Poly, v: JetCoord) -> Poly {
    let db = b.degree_in(v);
    let lcb = b.coefficients_in(v).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coefficients_in(v).pop().expect("nonzero");
        let shift = Poly::monomial(Monomial::from_factors([(v, dr - db)]), num_traits::One::one());
        r = lcb.mul(&r).sub(&lcr.mul(&shift).mul(b));
    }
    r
}

/// gcd when one side is a single term: the monomial gcd over all terms.
fn monomial_content_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut g: Option<Monomial> = None;
    for (m, _) in a.terms().iter().chain(b.terms().iter()) {
        g = Some(match g {
            None => m.clone(),
            Some(acc) => acc.gcd(m),
        });
        if g.as_ref().is_some_and(|m| m.is_one()) {
            break;
        }
    }
    Poly::monomial(g.unwrap_or_default(), num_traits::One::one())
}
