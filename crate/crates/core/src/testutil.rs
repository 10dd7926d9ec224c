//! Random generators shared by the unit-test suites.

use proptest::prelude::*;

use crate::exprcore::{Expr, Monomial, Poly, Rat};
use crate::jetspace::JetCoord;

/// Random polynomial with up to `max_terms` terms of degree ≤ `max_deg`
/// over `coords`, small integer coefficients.
pub fn arb_poly(coords: Vec<JetCoord>, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    let n = coords.len();
    proptest::collection::vec(
        (
            -5i64..=5,
            proptest::collection::vec((0..n, 1..=max_deg), 0..=max_deg as usize),
        ),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().map(|(c, fs)| {
            let mut deg = 0;
            let factors: Vec<(JetCoord, u32)> = fs
                .into_iter()
                .filter_map(|(i, e)| {
                    if deg + e > max_deg {
                        return None;
                    }
                    deg += e;
                    Some((coords[i], e))
                })
                .collect();
            (Monomial::from_factors(factors), Rat::from_integer(c.into()))
        }))
    })
}

/// Random expression; one in four is a genuine quotient.
pub fn arb_expr(coords: Vec<JetCoord>) -> impl Strategy<Value = Expr> {
    (
        arb_poly(coords.clone(), 4, 3),
        arb_poly(coords, 2, 1),
        0u8..4,
    )
        .prop_map(|(n, d, pick)| {
            if pick == 0 && !d.is_zero() {
                Expr::new(n, d.add(&Poly::from_int(7))).unwrap_or_else(|_| Expr::zero())
            } else {
                Expr::from_poly(n)
            }
        })
}
