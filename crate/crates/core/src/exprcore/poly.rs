//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order, so two
//! equal polynomials have identical term vectors and zero-testing is an
//! emptiness check.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::Rat;
use crate::jetspace::JetCoord;

/// A power product of jet coordinates. Exponents are positive; the factor
/// list is sorted by coordinate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(JetCoord, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(c: JetCoord) -> Self {
        Monomial(vec![(c, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (JetCoord, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<JetCoord, u32> = BTreeMap::new();
        for (c, e) in factors {
            if e > 0 {
                let slot = map.entry(c).or_insert(0);
                *slot = slot.checked_add(e).expect("exponent overflow");
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(JetCoord, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, c: JetCoord) -> u32 {
        match self.0.binary_search_by(|(v, _)| v.cmp(&c)) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea.checked_add(eb).expect("exponent overflow")));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(a, ea) in &self.0 {
            if j < other.0.len() && other.0[j].0 < a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == a {
                let eb = other.0[j].1;
                j += 1;
                match ea.cmp(&eb) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((a, ea - eb)),
                }
            } else {
                out.push((a, ea));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((a, ea.min(eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    fn without(&self, c: JetCoord) -> (Monomial, u32) {
        let e = self.exponent(c);
        (Monomial(self.0.iter().copied().filter(|(v, _)| *v != c).collect()), e)
    }
}

/// Graded lexicographic: total degree first, then the exponent of the
/// smallest coordinate, and so on.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with nonzero rational coefficients, terms sorted
/// descending in graded-lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rat::from_integer(n.into()))
    }

    pub fn var(c: JetCoord) -> Self {
        Poly {
            terms: vec![(Monomial::var(c), Rat::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(terms: I) -> Self {
        let mut acc: FxHashMap<Monomial, Rat> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Rat>) -> Self {
        let mut terms: Vec<(Monomial, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    /// Sorted set of coordinates that occur.
    pub fn variables(&self) -> Vec<JetCoord> {
        let mut vs: Vec<JetCoord> = self.terms.iter().flat_map(|(m, _)| m.factors().iter().map(|f| f.0)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Multiplication by a single term; order is preserved because the
    /// monomial order is compatible with multiplication.
    pub fn mul_term(&self, m: &Monomial, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: FxHashMap<Monomial, Rat> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * other.terms.len(), Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to `c`.
    pub fn diff(&self, c: JetCoord) -> Poly {
        // Dividing every surviving term by `c` preserves their relative order.
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, k)| {
                let e = m.exponent(c);
                if e == 0 {
                    return None;
                }
                let mut f = m.factors().to_vec();
                let pos = f.iter().position(|(v, _)| *v == c).unwrap();
                if e == 1 {
                    f.remove(pos);
                } else {
                    f[pos].1 -= 1;
                }
                Some((Monomial(f), k * Rat::from_integer(BigInt::from(e))))
            })
            .collect();
        Poly { terms }
    }

    /// Exact evaluation. Fails with the first occurring coordinate that
    /// `lookup` does not assign.
    pub fn eval_with<F>(&self, lookup: F) -> Result<Rat, JetCoord>
    where
        F: Fn(JetCoord) -> Option<Rat>,
    {
        let mut cache: FxHashMap<JetCoord, Rat> = FxHashMap::default();
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let base = match cache.get(&v) {
                    Some(b) => b.clone(),
                    None => {
                        let b = lookup(v).ok_or(v)?;
                        cache.insert(v, b.clone());
                        b
                    }
                };
                t *= num_traits::pow(base, e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide `self`.
    ///
    /// Multivariate division by leading terms: if `a = q·b` then the leading
    /// monomial of every intermediate remainder is divisible by that of `b`.
    pub fn divide_exact(&self, b: &Poly) -> Option<Poly> {
        assert!(!b.is_zero(), "divide_exact by the zero polynomial");
        if let Some(k) = b.as_constant() {
            return Some(self.scale(&k.recip()));
        }
        let (lb_m, lb_c) = b.leading().unwrap();
        let mut q = Vec::new();
        let mut r = self.clone();
        while let Some((lr_m, lr_c)) = r.leading() {
            let m = lr_m.div(lb_m)?;
            let c = lr_c / lb_c;
            r = r.sub(&b.mul_term(&m, &c));
            q.push((m, c));
        }
        Some(Poly { terms: q })
    }

    /// Highest power of `c` occurring.
    pub fn degree_in(&self, c: JetCoord) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(c)).max().unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a polynomial in `c`, indexed by
    /// power.
    pub fn coefficients_in(&self, c: JetCoord) -> Vec<Poly> {
        let d = self.degree_in(c) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); d + 1];
        for (m, k) in &self.terms {
            let (rest, e) = m.without(c);
            buckets[e as usize].push((rest, k.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly { terms: t }
            })
            .collect()
    }

    /// Rational content `s` with `self = s·P`, `P` having coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let s = Rat::new(g, l);
        if self.leading_coeff().is_negative() {
            -s
        } else {
            s
        }
    }

    /// `self` divided by its [`content`](Self::content).
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.content().recip())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}
