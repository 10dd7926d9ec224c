use proptest::prelude::*;

use super::*;
use crate::jetspace::{JetCoord, SpaceSpec};

fn space1() -> SpaceSpec {
    SpaceSpec::lorentz(1)
}

fn p(text: &str) -> Expr {
    parse_expr(text, &space1()).unwrap()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[test]
fn parse_eikonal_slice() {
    let e = p("u_0^2 - u_1^2");
    assert!(e.is_polynomial());
    let u0 = Poly::var(JetCoord::jet(0, &[0]));
    let u1 = Poly::var(JetCoord::jet(0, &[1]));
    assert_eq!(e.num(), &u0.mul(&u0).sub(&u1.mul(&u1)));
    assert_eq!(print_expr(&e), "u_0^2 - u_1^2");
}

#[test]
fn parse_zero_and_symmetric_jets() {
    assert!(p("0").is_zero());
    assert_eq!(print_expr(&p("0")), "0");
    assert_eq!(p("u_10"), p("u_01"));
    assert_eq!(print_expr(&p("u_10")), "u_01");
}

#[test]
fn reduced_rationals_print() {
    assert_eq!(print_expr(&p("3/6")), "1/2");
    assert_eq!(print_expr(&p("3/6*u_0")), "1/2*u_0");
    assert_eq!(print_expr(&p("-4/6")), "-2/3");
}

#[test]
fn parse_errors() {
    let s = space1();
    assert!(matches!(parse_expr("u_0 +", &s), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse_expr("(u_0", &s), Err(ExprError::Syntax { .. })));
    assert_eq!(
        parse_expr("x0 + y", &s),
        Err(ExprError::UnknownVariable { name: "y".into(), pos: 5 })
    );
    assert_eq!(parse_expr("1/0", &s), Err(ExprError::ZeroDenominator { pos: 1 }));
    assert!(matches!(parse_expr("u_2", &s), Err(ExprError::UnknownVariable { .. })));
    assert!(matches!(parse_expr("2x0", &s), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse_expr("u^x0", &s), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse_expr("u # 1", &s), Err(ExprError::Syntax { pos: 2, .. })));
}

#[test]
fn parameters_bind_integers() {
    let s = space1();
    let e = parse_expr_with_params("k*u^(k-1)", &s, &[("k", 3)]).unwrap();
    assert_eq!(e, p("3*u^2"));
    let e = parse_expr_with_params("u^k", &s, &[("k", 0)]).unwrap();
    assert!(e.is_one());
}

#[test]
fn arith_examples() {
    let a = p("u_0");
    assert!(arith(&a, &a, ArithOp::Sub).unwrap().is_zero());
    let q = arith(&p("u_0^2 - u_1^2"), &p("u_0 + u_1"), ArithOp::Div).unwrap();
    assert_eq!(q, p("u_0 - u_1"));
    assert!(q.is_polynomial());
    let s = arith(&p("1/2"), &p("1/3"), ArithOp::Add).unwrap();
    assert_eq!(s.as_constant(), Some(r(5, 6)));
    assert_eq!(arith(&a, &Expr::zero(), ArithOp::Div), Err(ExprError::DivisionByZero));
}

#[test]
fn integer_powers() {
    assert_eq!(pow_int(&p("u_0"), 3).unwrap(), p("u_0*u_0*u_0"));
    assert!(pow_int(&p("x0 + u_01"), 0).unwrap().is_one());
    let inv = pow_int(&p("u_0 + 1"), -1).unwrap();
    assert_eq!(inv.num(), &Poly::one());
    assert_eq!(inv.den(), p("u_0 + 1").num());
    assert_eq!(print_expr(&inv), "1/(u_0 + 1)");
    assert_eq!(pow_int(&Expr::zero(), -2), Err(ExprError::ZeroToNegativePower));
}

#[test]
fn partial_derivatives() {
    let u0 = JetCoord::jet(0, &[0]);
    let u1 = JetCoord::jet(0, &[1]);
    assert_eq!(diff_partial(&p("u_0^2"), u0), p("2*u_0"));
    assert!(diff_partial(&p("x0"), u0).is_zero());
    assert_eq!(diff_partial(&p("u_0/u_1"), u1), p("-u_0/u_1^2"));
}

#[test]
fn evaluation() {
    let u0 = JetCoord::jet(0, &[0]);
    let u1 = JetCoord::jet(0, &[1]);
    let pt: Point = [(u0, r(2, 1)), (u1, r(1, 1))].into_iter().collect();
    assert_eq!(eval_at(&p("u_0^2 - u_1^2"), &pt).unwrap(), r(3, 1));
    assert_eq!(eval_at(&p("5/7"), &Point::new()).unwrap(), r(5, 7));
    let zero: Point = [(u0, r(0, 1))].into_iter().collect();
    assert_eq!(eval_at(&p("1/u_0"), &zero), Err(ExprError::DenominatorVanishes));
    assert_eq!(eval_at(&p("x1"), &zero), Err(ExprError::MissingAssignment(JetCoord::indep(1))));
}

#[test]
fn exact_division_examples() {
    assert_eq!(divide_exact(p("u_0^2 - u_1^2").num(), p("u_0 - u_1").num()), Some(p("u_0 + u_1").num().clone()));
    assert_eq!(divide_exact(p("u_0^2 + 1").num(), p("u_0").num()), None);
    assert_eq!(divide_exact(&Poly::zero(), p("u_0 - u_1").num()), Some(Poly::zero()));
}

#[test]
fn canonical_denominator_sign_and_scale() {
    assert_eq!(p("u_0/(2*u_1)"), p("(-u_0)/(-2*u_1)"));
    assert_eq!(p("(2*u_0)/(4*u_1 - 2)"), p("u_0/(2*u_1 - 1)"));
    assert_eq!(print_expr(&p("(2*u_0)/(4*u_1 - 2)")), "u_0/(2*u_1 - 1)");
    assert_eq!(p("(x0^2 - u^2)/(x0*u + u^2)"), p("(x0 - u)/u"));
}

#[test]
#[should_panic(expected = "exponent overflow")]
fn exponent_overflow_aborts() {
    let big = Monomial::from_factors([(JetCoord::dep(0), u32::MAX)]);
    let _ = big.mul(&Monomial::var(JetCoord::dep(0)));
}

// ---- random expression trees ----

#[derive(Clone, Debug)]
enum Tree {
    Int(i64),
    Var(usize),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Div(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, i64),
}

fn coords() -> Vec<JetCoord> {
    vec![
        JetCoord::indep(0),
        JetCoord::indep(1),
        JetCoord::dep(0),
        JetCoord::jet(0, &[0]),
        JetCoord::jet(0, &[1]),
        JetCoord::jet(0, &[0, 1]),
    ]
}

fn build(t: &Tree) -> Expr {
    match t {
        Tree::Int(n) => Expr::int(*n),
        Tree::Var(i) => Expr::var(coords()[*i]),
        Tree::Add(a, b) => &build(a) + &build(b),
        Tree::Sub(a, b) => &build(a) - &build(b),
        Tree::Mul(a, b) => &build(a) * &build(b),
        Tree::Div(a, b) => {
            let d = build(b);
            if d.is_zero() {
                build(a)
            } else {
                build(a).checked_div(&d).unwrap()
            }
        }
        Tree::Pow(a, k) => {
            let base = build(a);
            if base.is_zero() && *k < 0 {
                base
            } else {
                base.pow_int(*k).unwrap()
            }
        }
    }
}

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![(-3i64..=3).prop_map(Tree::Int), (0usize..6).prop_map(Tree::Var)];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Sub(Box::new(a), Box::new(b))),
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Div(Box::new(a), Box::new(b))),
            1 => (inner, -1i64..=2).prop_map(|(a, k)| Tree::Pow(Box::new(a), k)),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    proptest::collection::vec((-50i64..=50, 1i64..=7), 6).prop_map(|vals| {
        coords()
            .into_iter()
            .zip(vals)
            .map(|(c, (n, d))| (c, Rat::new(n.into(), d.into())))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rearrangements_are_identical(a in tree(), b in tree(), c in tree()) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(&(&a + &b) * &c, &(&c * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            prop_assert_eq!((&c * &a).checked_div(&b).unwrap(), &c * &a.checked_div(&b).unwrap());
        }
    }

    #[test]
    fn field_ops_commute_with_evaluation(a in tree(), b in tree(), pt in point()) {
        let (a, b) = (build(&a), build(&b));
        let (Ok(va), Ok(vb)) = (a.eval_at(&pt), b.eval_at(&pt)) else { return Ok(()); };
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
            let Ok(e) = arith(&a, &b, op) else {
                prop_assert!(b.is_zero());
                continue;
            };
            let expected = match op {
                ArithOp::Add => &va + &vb,
                ArithOp::Sub => &va - &vb,
                ArithOp::Mul => &va * &vb,
                ArithOp::Div => {
                    if num_traits::Zero::is_zero(&vb) { continue; }
                    &va / &vb
                }
            };
            // A reduced denominator may vanish only where an input's did.
            if let Ok(v) = e.eval_at(&pt) {
                prop_assert_eq!(v, expected);
            }
        }
    }

    #[test]
    fn partial_derivative_is_a_derivation(a in tree(), b in tree(), which in 0usize..6) {
        let (a, b) = (build(&a), build(&b));
        let v = coords()[which];
        let lhs = diff_partial(&(&a * &b), v);
        let rhs = &(&a * &diff_partial(&b, v)) + &(&b * &diff_partial(&a, v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip(a in tree()) {
        let e = build(&a);
        let text = print_expr(&e);
        let back = parse_expr(&text, &space1()).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn divide_exact_is_sound(a in tree(), b in tree(), c in tree()) {
        let (a, b, c) = (build(&a).num().clone(), build(&b).num().clone(), build(&c).num().clone());
        prop_assume!(!b.is_zero());
        let prod = a.mul(&b);
        prop_assert_eq!(divide_exact(&prod, &b), Some(a.clone()));
        let target = prod.add(&c);
        if let Some(q) = divide_exact(&target, &b) {
            prop_assert_eq!(q.mul(&b), target);
        }
    }
}
