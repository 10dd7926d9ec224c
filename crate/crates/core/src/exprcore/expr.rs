use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::Poly;
use super::{ExprError, Rat};
use crate::jetspace::JetCoord;

/// A point of jet space: exact values for some coordinates.
pub type Point = BTreeMap<JetCoord, Rat>;

/// Canonical rational function `num / den`.
///
/// `num` and `den` are coprime, `den` has coprime integer coefficients with
/// a positive leading coefficient, and a constant denominator is always 1.
/// Structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

/// The four field operations accepted by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &Expr, b: &Expr, op: ArithOp) -> Result<Expr, ExprError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl Expr {
    pub fn zero() -> Self {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Expr::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Expr::from_poly(Poly::from_int(n))
    }

    pub fn var(c: JetCoord) -> Self {
        Expr::from_poly(Poly::var(c))
    }

    pub fn from_poly(num: Poly) -> Self {
        Expr { num, den: Poly::one() }
    }

    /// Normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Expr::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(k) = den.as_constant() {
            return Expr::from_poly(num.scale(&k.recip()));
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.divide_exact(&g).expect("gcd divides numerator"),
                den.divide_exact(&g).expect("gcd divides denominator"),
            )
        };
        if let Some(k) = den.as_constant() {
            return Expr::from_poly(num.scale(&k.recip()));
        }
        let s = den.content();
        let inv = s.recip();
        Expr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// `num / den` already known to be coprime; only fixes the scale of `den`.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(k) = den.as_constant() {
            return Expr::from_poly(num.scale(&k.recip()));
        }
        let s = den.content();
        if s.is_one() {
            return Expr { num, den };
        }
        let inv = s.recip();
        Expr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// `(dn·d − n·dd) / d²` for a derivation applied to `n / d`, where `dn`
    /// and `dd` are the images of `n` and `d`.
    ///
    /// With `n ⊥ d`, a common factor of the result and `d` must divide
    /// `gcd(d, dd)`, so only that small gcd is needed.
    pub(crate) fn quotient_rule(&self, dn: Poly, dd: Poly) -> Expr {
        if self.is_polynomial() {
            return Expr::from_poly(dn);
        }
        if dd.is_zero() {
            return Expr::from_coprime(dn, self.den.clone());
        }
        let g = poly_gcd(&self.den, &dd);
        if g.is_constant() {
            let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
            return Expr::from_coprime(num, self.den.mul(&self.den));
        }
        // d = g·d1, dd = g·e1 with d1 ⊥ e1: the result is
        // (dn·d1 − n·e1) / (g·d1²) and only g can cancel.
        let d1 = self.den.divide_exact(&g).expect("gcd divides");
        let e1 = dd.divide_exact(&g).expect("gcd divides");
        let m = dn.mul(&d1).sub(&self.num.mul(&e1));
        if m.is_zero() {
            return Expr::zero();
        }
        let h = poly_gcd(&m, &g);
        let (m, g) = if h.is_constant() {
            (m, g)
        } else {
            (m.divide_exact(&h).expect("gcd divides"), g.divide_exact(&h).expect("gcd divides"))
        };
        Expr::from_coprime(m, g.mul(&d1).mul(&d1))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Coordinates occurring in numerator or denominator, sorted.
    pub fn variables(&self) -> Vec<JetCoord> {
        let mut v = self.num.variables();
        if !self.is_polynomial() {
            v.extend(self.den.variables());
            v.sort_unstable();
            v.dedup();
        }
        v
    }

    /// Highest derivative order among the occurring coordinates.
    pub fn max_order(&self) -> usize {
        self.variables().iter().map(|c| c.order()).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &Rat) -> Expr {
        if k.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, b: &Expr) -> Result<Expr, ExprError> {
        if b.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if let Some(k) = b.as_constant() {
            return Ok(self.scale(&k.recip()));
        }
        Ok(Expr::reduced_product(&self.num, &self.den, &b.den, &b.num))
    }

    /// `(an·bn) / (ad·bd)` for coprime pairs `an ⊥ ad`, `bn ⊥ bd`: only the
    /// cross gcds can cancel.
    fn reduced_product(an: &Poly, ad: &Poly, bn: &Poly, bd: &Poly) -> Expr {
        if an.is_zero() || bn.is_zero() {
            return Expr::zero();
        }
        let g1 = poly_gcd(an, bd);
        let g2 = poly_gcd(bn, ad);
        let cut = |p: &Poly, g: &Poly| if g.is_constant() { p.clone() } else { p.divide_exact(g).expect("gcd divides") };
        let num = cut(an, &g1).mul(&cut(bn, &g2));
        let den = cut(ad, &g2).mul(&cut(bd, &g1));
        // sign of the denominator may have flipped after division by b.num
        Expr::from_coprime(num, den)
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        Expr::one().checked_div(self)
    }

    /// Exact integer power; negative powers invert.
    pub fn pow_int(&self, k: i64) -> Result<Expr, ExprError> {
        let e = u32::try_from(k.unsigned_abs()).map_err(|_| ExprError::ExponentOverflow)?;
        if k < 0 {
            if self.is_zero() {
                return Err(ExprError::ZeroToNegativePower);
            }
            return Ok(Expr {
                num: self.num.pow(e),
                den: self.den.pow(e),
            }
            .recip()
            .expect("nonzero"));
        }
        // Powers of coprime polynomials stay coprime, and a positive leading
        // coefficient stays positive.
        Ok(Expr::reduced_pow(self, e))
    }

    fn reduced_pow(&self, e: u32) -> Expr {
        let den = self.den.pow(e);
        let s = den.content();
        if s.is_one() {
            Expr { num: self.num.pow(e), den }
        } else {
            Expr::normalize(self.num.pow(e), den)
        }
    }

    /// Formal partial derivative treating every coordinate as independent.
    pub fn diff(&self, v: JetCoord) -> Expr {
        if self.is_polynomial() {
            return Expr::from_poly(self.num.diff(v));
        }
        self.quotient_rule(self.num.diff(v), self.den.diff(v))
    }

    pub fn eval_at(&self, point: &Point) -> Result<Rat, ExprError> {
        self.eval_with(|c| point.get(&c).cloned())
    }

    pub fn eval_with<F>(&self, lookup: F) -> Result<Rat, ExprError>
    where
        F: Fn(JetCoord) -> Option<Rat>,
    {
        let n = self.num.eval_with(&lookup).map_err(ExprError::MissingAssignment)?;
        if self.is_polynomial() {
            return Ok(n);
        }
        let d = self.den.eval_with(&lookup).map_err(ExprError::MissingAssignment)?;
        if d.is_zero() {
            return Err(ExprError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    /// Replaces coordinates by expressions; unmapped coordinates stay.
    pub fn substitute(&self, map: &BTreeMap<JetCoord, Expr>) -> Result<Expr, ExprError> {
        let n = substitute_poly(&self.num, map);
        if self.is_polynomial() {
            return Ok(n);
        }
        n.checked_div(&substitute_poly(&self.den, map))
    }

    pub fn num_terms(&self) -> usize {
        self.num.len() + if self.is_polynomial() { 0 } else { self.den.len() }
    }
}

fn substitute_poly(p: &Poly, map: &BTreeMap<JetCoord, Expr>) -> Expr {
    let mut total = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::constant(c.clone());
        for &(v, e) in m.factors() {
            let f = match map.get(&v) {
                Some(x) => x.reduced_pow(e),
                None => Expr::var(v).reduced_pow(e),
            };
            t = &t * &f;
        }
        total = &total + &t;
    }
    total
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, b: &Expr) -> Expr {
        if self.is_polynomial() && b.is_polynomial() {
            return Expr::from_poly(self.num.add(&b.num));
        }
        // With g = gcd(ad, bd): N = an·(bd/g) + bn·(ad/g) over ad·bd/g, and
        // any cancellation divides g.
        let g = poly_gcd(&self.den, &b.den);
        if g.is_constant() {
            return Expr::from_coprime(
                self.num.mul(&b.den).add(&b.num.mul(&self.den)),
                self.den.mul(&b.den),
            );
        }
        let ad = self.den.divide_exact(&g).expect("gcd divides");
        let bd = b.den.divide_exact(&g).expect("gcd divides");
        let num = self.num.mul(&bd).add(&b.num.mul(&ad));
        if num.is_zero() {
            return Expr::zero();
        }
        let h = poly_gcd(&num, &g);
        let (num, g) = if h.is_constant() {
            (num, g)
        } else {
            (num.divide_exact(&h).expect("gcd divides"), g.divide_exact(&h).expect("gcd divides"))
        };
        Expr::from_coprime(num, ad.mul(&bd).mul(&g))
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, b: &Expr) -> Expr {
        self + &(-b)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, b: &Expr) -> Expr {
        if self.is_polynomial() && b.is_polynomial() {
            return Expr::from_poly(self.num.mul(&b.num));
        }
        Expr::reduced_product(&self.num, &self.den, &b.num, &b.den)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, b: Expr) -> Expr {
                (&self).$m(&b)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<Poly> for Expr {
    fn from(p: Poly) -> Self {
        Expr::from_poly(p)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_expr_with(self, &|c| c.to_string()))
    }
}

