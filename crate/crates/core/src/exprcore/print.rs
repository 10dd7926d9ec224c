use num_traits::{One, Signed};

use super::expr::Expr;
use super::poly::{Monomial, Poly};
use super::Rat;
use crate::jetspace::{JetCoord, SpaceSpec};

/// Prints with the standard names (`x0`, `u`, `u_01`, ...).
pub fn print_expr(e: &Expr) -> String {
    print_expr_with(e, &|c| c.to_string())
}

/// Prints with the names registered in `space`.
pub fn print_expr_in(e: &Expr, space: &SpaceSpec) -> String {
    print_expr_with(e, &|c| space.name(c))
}

pub(crate) fn print_expr_with(e: &Expr, name: &dyn Fn(JetCoord) -> String) -> String {
    let num = print_poly(e.num(), name);
    if e.is_polynomial() {
        return num;
    }
    let num = if e.num().len() > 1 { format!("({num})") } else { num };
    let den = print_poly(e.den(), name);
    let bare = matches!(e.den().terms(), [(m, c)] if c.is_one() && m.factors().len() == 1);
    if bare {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

pub(crate) fn print_poly(p: &Poly, name: &dyn Fn(JetCoord) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&print_term(m, &c.abs(), name));
    }
    out
}

fn print_term(m: &Monomial, c: &Rat, name: &dyn Fn(JetCoord) -> String) -> String {
    if m.is_one() {
        return c.to_string();
    }
    let body = m
        .factors()
        .iter()
        .map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{e}", name(v)) })
        .collect::<Vec<_>>()
        .join("*");
    if c.is_one() {
        body
    } else {
        format!("{c}*{body}")
    }
}
