//! Jet-space coordinates, multi-indices, metrics and the variable registry.
//!
//! A [`JetCoord`] is packed into a single `u64` whose numeric order is the
//! canonical coordinate order: independents, then dependents, then
//! derivatives by (order, dependent index, sorted multi-index). Monomial
//! orders in `exprcore` are built on top of this order.

use std::fmt;

use thiserror::Error;

/// Largest derivative order a [`MultiIndex`] can carry.
pub const MAX_ORDER: usize = 12;

/// Largest number of independent variables. Jet names spell each index
/// with a single decimal digit, so this is 10.
pub const MAX_INDEPENDENTS: usize = 10;

/// Largest number of dependent variables.
pub const MAX_DEPENDENTS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("at least one independent and one dependent variable are required")]
    Empty,
    #[error("too many independent variables ({0}, at most {MAX_INDEPENDENTS})")]
    TooManyIndependents(usize),
    #[error("too many dependent variables ({0}, at most {MAX_DEPENDENTS})")]
    TooManyDependents(usize),
    #[error("metric has {got} signs but there are {expected} independent variables")]
    MetricLength { expected: usize, got: usize },
    #[error("invalid variable name `{0}`")]
    BadName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
}

/// Sorted multiset of independent-variable indices naming a symmetric
/// derivative. `u_{10}` and `u_{01}` are the same `MultiIndex`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    len: u8,
    idx: [u8; MAX_ORDER],
}

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex {
            len: 0,
            idx: [0; MAX_ORDER],
        }
    }

    /// Builds the canonical (sorted) multi-index from any ordering.
    ///
    /// Panics if more than [`MAX_ORDER`] indices are given or an index does
    /// not fit in a nibble.
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut m = MultiIndex::empty();
        for i in indices {
            m = m.with(i);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.len as usize
    }

    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    /// The multi-index `J ∪ {i}`.
    pub fn with(&self, i: usize) -> Self {
        assert!(
            (self.len as usize) < MAX_ORDER,
            "derivative order exceeds MAX_ORDER = {MAX_ORDER}"
        );
        assert!(i < 16, "independent index {i} out of range");
        let mut out = *self;
        let pos = self.indices().partition_point(|&x| x as usize <= i);
        out.idx.copy_within(pos..self.len as usize, pos + 1);
        out.idx[pos] = i as u8;
        out.len += 1;
        out
    }

    /// Splits off the largest index: `K = J ∪ {i}` with `i = max K`.
    pub fn split_last(&self) -> Option<(MultiIndex, usize)> {
        if self.len == 0 {
            return None;
        }
        let mut j = *self;
        j.len -= 1;
        let i = j.idx[j.len as usize] as usize;
        j.idx[j.len as usize] = 0;
        Some((j, i))
    }

    /// All canonical multi-indices of exactly `order` over `p` indices, in
    /// lexicographic order.
    pub fn all_of_order(p: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(p: usize, left: usize, start: usize, cur: MultiIndex, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(cur);
                return;
            }
            for i in start..p {
                rec(p, left - 1, i, cur.with(i), out);
            }
        }
        let mut out = Vec::new();
        rec(p, order, 0, MultiIndex::empty(), &mut out);
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// Unpacked view of a [`JetCoord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordKind {
    Indep(usize),
    Dep(usize),
    Deriv(usize, MultiIndex),
}

/// A coordinate of jet space: `x^i`, `u^α` or `u^α_J`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetCoord(u64);

const TAG_SHIFT: u32 = 62;
const ORDER_SHIFT: u32 = 56;
const ALPHA_SHIFT: u32 = 48;

impl JetCoord {
    pub fn indep(i: usize) -> Self {
        assert!(i < 16, "independent index {i} out of range");
        JetCoord(i as u64)
    }

    pub fn dep(alpha: usize) -> Self {
        assert!(alpha < MAX_DEPENDENTS, "dependent index {alpha} out of range");
        JetCoord((1 << TAG_SHIFT) | alpha as u64)
    }

    /// `u^α_J`. An empty multi-index gives the dependent variable itself.
    pub fn deriv(alpha: usize, j: MultiIndex) -> Self {
        if j.order() == 0 {
            return JetCoord::dep(alpha);
        }
        assert!(alpha < MAX_DEPENDENTS, "dependent index {alpha} out of range");
        let mut bits = (2u64 << TAG_SHIFT) | ((j.order() as u64) << ORDER_SHIFT) | ((alpha as u64) << ALPHA_SHIFT);
        for (slot, &i) in j.indices().iter().enumerate() {
            bits |= (i as u64) << (44 - 4 * slot as u32);
        }
        JetCoord(bits)
    }

    /// Shorthand for `u^α_J` with the indices given in any order.
    pub fn jet(alpha: usize, indices: &[usize]) -> Self {
        JetCoord::deriv(alpha, MultiIndex::new(indices.iter().copied()))
    }

    pub fn kind(&self) -> CoordKind {
        match self.0 >> TAG_SHIFT {
            0 => CoordKind::Indep(self.0 as usize & 0xff),
            1 => CoordKind::Dep(self.0 as usize & 0xff),
            _ => {
                let order = ((self.0 >> ORDER_SHIFT) & 0x3f) as usize;
                let alpha = ((self.0 >> ALPHA_SHIFT) & 0xff) as usize;
                let j = MultiIndex::new((0..order).map(|slot| ((self.0 >> (44 - 4 * slot as u32)) & 0xf) as usize));
                CoordKind::Deriv(alpha, j)
            }
        }
    }

    /// Differential order: 0 for `x^i` and `u^α`, `|J|` for `u^α_J`.
    pub fn order(&self) -> usize {
        if self.0 >> TAG_SHIFT == 2 {
            ((self.0 >> ORDER_SHIFT) & 0x3f) as usize
        } else {
            0
        }
    }

    pub fn is_point_coord(&self) -> bool {
        self.order() == 0
    }

    /// Dependent index and multi-index of `u^α` / `u^α_J`.
    pub fn dependent_part(&self) -> Option<(usize, MultiIndex)> {
        match self.kind() {
            CoordKind::Indep(_) => None,
            CoordKind::Dep(a) => Some((a, MultiIndex::empty())),
            CoordKind::Deriv(a, j) => Some((a, j)),
        }
    }
}

impl fmt::Debug for JetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Standard naming: `x<i>`, `u` (or `u<α>` for `α > 0`), `u_<digits>`.
impl fmt::Display for JetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            CoordKind::Indep(i) => write!(f, "x{i}"),
            CoordKind::Dep(a) => f.write_str(&standard_dep_name(a)),
            CoordKind::Deriv(a, j) => {
                write!(f, "{}_", standard_dep_name(a))?;
                for i in j.indices() {
                    write!(f, "{i}")?;
                }
                Ok(())
            }
        }
    }
}

fn standard_dep_name(alpha: usize) -> String {
    if alpha == 0 {
        "u".to_string()
    } else {
        format!("u{alpha}")
    }
}

/// Diagonal metric with entries ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Metric {
    signs: Vec<i8>,
}

impl Metric {
    /// Panics unless every entry is `+1` or `-1`.
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| *s == 1 || *s == -1), "metric entries must be ±1");
        Metric { signs }
    }

    /// `(+, −, …, −)` on `p` coordinates.
    pub fn lorentz(p: usize) -> Self {
        Metric::new((0..p).map(|i| if i == 0 { 1 } else { -1 }).collect())
    }

    pub fn euclidean(p: usize) -> Self {
        Metric::new(vec![1; p])
    }

    pub fn sign(&self, mu: usize) -> i8 {
        self.signs[mu]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }
}

/// Registry of independent and dependent variables with their names and the
/// metric used for repeated-index contractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    indep: Vec<String>,
    dep: Vec<String>,
    metric: Metric,
}

impl SpaceSpec {
    pub fn new(indep: Vec<String>, dep: Vec<String>, metric: Metric) -> Result<Self, SpaceError> {
        if indep.is_empty() || dep.is_empty() {
            return Err(SpaceError::Empty);
        }
        if indep.len() > MAX_INDEPENDENTS {
            return Err(SpaceError::TooManyIndependents(indep.len()));
        }
        if dep.len() > MAX_DEPENDENTS {
            return Err(SpaceError::TooManyDependents(dep.len()));
        }
        if metric.dim() != indep.len() {
            return Err(SpaceError::MetricLength {
                expected: indep.len(),
                got: metric.dim(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in indep.iter().chain(dep.iter()) {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric());
            if !valid {
                return Err(SpaceError::BadName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(SpaceError::DuplicateName(name.clone()));
            }
        }
        Ok(SpaceSpec { indep, dep, metric })
    }

    /// Standard names `x0..x{p-1}` and `u`, `u1`, `u2`, ... with the given metric.
    pub fn standard(q: usize, metric: Metric) -> Result<Self, SpaceError> {
        let p = metric.dim();
        SpaceSpec::new(
            (0..p).map(|i| format!("x{i}")).collect(),
            (0..q).map(standard_dep_name).collect(),
            metric,
        )
    }

    /// `n` space variables plus time `x0`, one dependent `u`, metric `(+, −, …, −)`.
    pub fn lorentz(n: usize) -> Self {
        SpaceSpec::standard(1, Metric::lorentz(n + 1)).expect("n + 1 <= MAX_INDEPENDENTS")
    }

    pub fn euclidean(p: usize) -> Self {
        SpaceSpec::standard(1, Metric::euclidean(p)).expect("p <= MAX_INDEPENDENTS")
    }

    pub fn p(&self) -> usize {
        self.indep.len()
    }

    pub fn q(&self) -> usize {
        self.dep.len()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn indep_names(&self) -> &[String] {
        &self.indep
    }

    pub fn dep_names(&self) -> &[String] {
        &self.dep
    }

    pub fn contains(&self, c: JetCoord) -> bool {
        match c.kind() {
            CoordKind::Indep(i) => i < self.p(),
            CoordKind::Dep(a) => a < self.q(),
            CoordKind::Deriv(a, j) => a < self.q() && j.indices().iter().all(|&i| (i as usize) < self.p()),
        }
    }

    pub fn name(&self, c: JetCoord) -> String {
        match c.kind() {
            CoordKind::Indep(i) => self.indep[i].clone(),
            CoordKind::Dep(a) => self.dep[a].clone(),
            CoordKind::Deriv(a, j) => {
                let mut s = format!("{}_", self.dep[a]);
                for i in j.indices() {
                    s.push(char::from(b'0' + i));
                }
                s
            }
        }
    }

    /// Resolves a variable name; jet names are `<dep>_<digits>` with the
    /// digits in any order.
    pub fn resolve(&self, name: &str) -> Option<JetCoord> {
        if let Some(i) = self.indep.iter().position(|n| n == name) {
            return Some(JetCoord::indep(i));
        }
        if let Some(a) = self.dep.iter().position(|n| n == name) {
            return Some(JetCoord::dep(a));
        }
        let (base, digits) = name.split_once('_')?;
        let a = self.dep.iter().position(|n| n == base)?;
        if digits.is_empty() || digits.len() > MAX_ORDER || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let idx: Vec<usize> = digits.bytes().map(|b| (b - b'0') as usize).collect();
        if idx.iter().any(|&i| i >= self.p()) {
            return None;
        }
        Some(JetCoord::jet(a, &idx))
    }
}
