use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::exprcore::{parse_expr, Point, Rat};
use crate::testutil::{arb_expr, arb_poly};

/// Brute force: every sequence of indices of length `s`, deduplicated as
/// sorted multisets.
fn brute_force_count(p: usize, q: usize, r: usize) -> usize {
    let mut count = p + q;
    for s in 1..=r {
        let mut seen = BTreeSet::new();
        let total = p.pow(s as u32);
        for code in 0..total {
            let mut idx: Vec<usize> = (0..s).map(|k| (code / p.pow(k as u32)) % p).collect();
            idx.sort_unstable();
            seen.insert(idx);
        }
        count += q * seen.len();
    }
    count
}

#[test]
fn jet_coordinate_counts() {
    let s3 = SpaceSpec::lorentz(3);
    assert_eq!(enumerate_jet_coords(&s3, 1).len(), 9);
    assert_eq!(brute_force_count(4, 1, 2), 19);
    assert_eq!(enumerate_jet_coords(&s3, 2).len(), 19);
    for p in 1..=4 {
        let s = SpaceSpec::euclidean(p);
        assert_eq!(enumerate_jet_coords(&s, 0).len(), p + 1);
    }
}

#[test]
fn enumeration_order_is_graded() {
    let s = SpaceSpec::lorentz(1);
    let names: Vec<String> = enumerate_jet_coords(&s, 2).into_iter().map(|c| s.name(c)).collect();
    assert_eq!(names, ["x0", "x1", "u", "u_0", "u_1", "u_00", "u_01", "u_11"]);
    let cs = enumerate_jet_coords(&SpaceSpec::lorentz(3), 3);
    assert!(cs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn total_derivative_examples() {
    let s = SpaceSpec::lorentz(2);
    let e = |t: &str| parse_expr(t, &s).unwrap();
    assert!(total_derivative(&e("x0"), 0, &s, 1).is_one());
    for i in 0..3 {
        assert_eq!(total_derivative(&e("u"), i, &s, 0), Expr::var(JetCoord::jet(0, &[i])));
    }
    assert_eq!(total_derivative(&e("u_1"), 0, &s, 1), e("u_01"));
    assert_eq!(total_derivative(&e("x1*u_0^2"), 1, &s, 1), e("u_0^2 + 2*x1*u_0*u_01"));
    assert_eq!(total_derivative(&e("1/u"), 2, &s, 0), e("-u_2/u^2"));
}

#[test]
#[should_panic(expected = "exceeds the jet order cap")]
fn total_derivative_enforces_cap() {
    let s = SpaceSpec::lorentz(1);
    total_derivative(&parse_expr("u_01", &s).unwrap(), 0, &s, 1);
}

#[test]
fn contraction_examples() {
    let s = SpaceSpec::lorentz(2);
    let du = gradient_family(&s, 0);
    assert_eq!(contract(&du, &du, s.metric()).unwrap(), parse_expr("u_0^2 - u_1^2 - u_2^2", &s).unwrap());
    let zeros = vec![Expr::zero(); 3];
    assert!(contract(&zeros, &du, s.metric()).unwrap().is_zero());
    let e0 = vec![Expr::one(), Expr::zero(), Expr::zero()];
    assert!(contract(&e0, &e0, s.metric()).unwrap().is_one());
    assert_eq!(
        contract(&e0[..2], &e0, s.metric()),
        Err(JetError::LengthMismatch { left: 2, right: 3, expected: 3 })
    );
}

#[test]
fn lowered_coordinates() {
    let s = SpaceSpec::lorentz(2);
    let low = lower_coordinates(&s);
    assert_eq!(low[0], Expr::var(JetCoord::indep(0)));
    assert_eq!(low[1], -Expr::var(JetCoord::indep(1)));
    for (mu, x) in lower_coordinates(&SpaceSpec::euclidean(3)).into_iter().enumerate() {
        assert_eq!(x, Expr::var(JetCoord::indep(mu)));
    }
}

fn order1_coords(p: usize) -> Vec<JetCoord> {
    enumerate_jet_coords(&SpaceSpec::euclidean(p), 1)
}

fn order2_coords(p: usize) -> Vec<JetCoord> {
    enumerate_jet_coords(&SpaceSpec::euclidean(p), 2)
}

/// All derivatives `∂^J f` up to order `r` of a polynomial in the
/// independents, keyed by jet coordinate.
fn jets_of(f: &Poly, space: &SpaceSpec, r: usize) -> BTreeMap<JetCoord, Expr> {
    let mut out = BTreeMap::new();
    out.insert(JetCoord::dep(0), Expr::from_poly(f.clone()));
    for c in enumerate_jet_coords(space, r) {
        if let CoordKind::Deriv(0, j) = c.kind() {
            let mut d = f.clone();
            for &i in j.indices() {
                d = d.diff(JetCoord::indep(i as usize));
            }
            out.insert(c, Expr::from_poly(d));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn count_formula_matches_enumeration(p in 1usize..=4, q in 1usize..=4, r in 0usize..=3) {
        let space = SpaceSpec::standard(q, Metric::euclidean(p)).unwrap();
        let n = enumerate_jet_coords(&space, r).len();
        prop_assert_eq!(n, jet_dimension(&space, r));
        prop_assert_eq!(n, p + q * num_integer::binomial(p + r, r));
        prop_assert_eq!(n, brute_force_count(p, q, r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn total_derivatives_commute(f in arb_expr(order2_coords(3)), i in 0usize..3, j in 0usize..3) {
        let s = SpaceSpec::euclidean(3);
        let a = total_derivative(&total_derivative(&f, j, &s, 2), i, &s, 3);
        let b = total_derivative(&total_derivative(&f, i, &s, 2), j, &s, 3);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn total_derivative_matches_substitution(
        f in arb_poly(vec![JetCoord::indep(0), JetCoord::indep(1)], 5, 3),
        big_f in arb_expr(order2_coords(2)),
        i in 0usize..2,
    ) {
        let s = SpaceSpec::euclidean(2);
        let jets = jets_of(&f, &s, 3);
        let lhs = total_derivative(&big_f, i, &s, 2).substitute(&jets);
        let composed = big_f.substitute(&jets);
        match (lhs, composed) {
            (Ok(l), Ok(c)) => prop_assert_eq!(l, c.diff(JetCoord::indep(i))),
            // the substituted denominator vanished identically
            (Err(_), Err(_)) => {}
            (l, c) => prop_assert!(false, "mismatch: {:?} vs {:?}", l, c),
        }
    }

    #[test]
    fn contraction_is_symmetric_and_bilinear(
        a in proptest::collection::vec(arb_poly(order1_coords(3), 3, 2), 3),
        b in proptest::collection::vec(arb_poly(order1_coords(3), 3, 2), 3),
        c in proptest::collection::vec(arb_poly(order1_coords(3), 3, 2), 3),
        vals in proptest::collection::vec(-20i64..=20, 7),
        k in -4i64..=4,
    ) {
        let s = SpaceSpec::lorentz(2);
        let to = |v: Vec<Poly>| v.into_iter().map(Expr::from_poly).collect::<Vec<_>>();
        let (a, b, c) = (to(a), to(b), to(c));
        let pt: Point = order1_coords(3).into_iter().zip(vals).map(|(x, v)| (x, Rat::from_integer(v.into()))).collect();
        let m = s.metric();
        let ev = |e: Expr| e.eval_at(&pt).unwrap();
        prop_assert_eq!(ev(contract(&a, &b, m).unwrap()), ev(contract(&b, &a, m).unwrap()));
        let kk = Expr::int(k);
        let lin: Vec<Expr> = a.iter().zip(&c).map(|(x, y)| &(&kk * x) + y).collect();
        let lhs = ev(contract(&lin, &b, m).unwrap());
        let rhs = Rat::from_integer(k.into()) * ev(contract(&a, &b, m).unwrap()) + ev(contract(&c, &b, m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
