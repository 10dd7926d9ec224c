//! Generic rank of prolonged operator systems.
//!
//! Coefficients are evaluated exactly at seeded random integer points and
//! the rank of each evaluated matrix is computed by fraction-free
//! elimination; the generic rank is the maximum over the points.

mod elimination;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exprcore::{Expr, ExprError, Point, Rat};
use crate::jetspace::{enumerate_jet_coords, JetCoord, SpaceSpec};
use crate::liealg::{prolong, LieError, ProlongedField, VectorField};

pub use elimination::{bareiss_rank, integer_row, IncrementalEchelon};

pub const DEFAULT_POINTS: usize = 3;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BOUND: u64 = 1_000_000;
/// Fresh draws per point before the point is given up.
pub const MAX_RESAMPLES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("all {points} sample points were degenerate (seed {seed}); try another seed")]
    AllPointsDegenerate { points: usize, seed: u64 },
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("invalid sampling: {0}")]
    BadSampling(&'static str),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Where and how many points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub points: usize,
    pub seed: u64,
    /// Coordinates are uniform integers in `[-bound, bound]`.
    pub bound: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { points: DEFAULT_POINTS, seed: DEFAULT_SEED, bound: DEFAULT_BOUND }
    }
}

impl Sampling {
    fn validate(&self) -> Result<(), RankError> {
        if self.points == 0 {
            return Err(RankError::BadSampling("at least one point is required"));
        }
        if self.bound < 2 || self.bound > i64::MAX as u64 {
            return Err(RankError::BadSampling("bound must be at least 2"));
        }
        Ok(())
    }

    /// Successive candidate points for point index `i`. The generator is
    /// split per index, so points do not depend on evaluation order.
    fn candidates(&self, i: usize, columns: &[JetCoord]) -> impl Iterator<Item = Point> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        let b = self.bound as i64;
        let columns = columns.to_vec();
        (0..=MAX_RESAMPLES).map(move |_| {
            columns
                .iter()
                .map(|&c| (c, Rat::from_integer(BigInt::from(rng.gen_range(-b..=b)))))
                .collect()
        })
    }
}

/// A rank computation request.
#[derive(Clone, Debug)]
pub struct RankQuery {
    pub operators: Vec<VectorField>,
    pub order: usize,
    pub space: SpaceSpec,
    pub sampling: Sampling,
}

impl RankQuery {
    pub fn new(operators: Vec<VectorField>, order: usize, space: SpaceSpec) -> Self {
        RankQuery { operators, order, space, sampling: Sampling::default() }
    }

    pub fn points(mut self, m: usize) -> Self {
        self.sampling.points = m;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.sampling.seed = seed;
        self
    }

    pub fn bound(mut self, b: u64) -> Self {
        self.sampling.bound = b;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub jet_dimension: usize,
    pub invariant_count: usize,
    pub per_point_ranks: Vec<usize>,
    pub seed: u64,
}

impl RankReport {
    fn from_ranks(per_point_ranks: Vec<usize>, jet_dimension: usize, seed: u64) -> Self {
        let rank = per_point_ranks.iter().copied().max().unwrap_or(0);
        RankReport {
            rank,
            jet_dimension,
            invariant_count: jet_dimension - rank,
            per_point_ranks,
            seed,
        }
    }
}

/// Rows of the prolonged coefficient matrix at `point`; columns follow
/// `enumerate_jet_coords(space, r)`.
pub fn prolonged_matrix_at(
    fields: &[ProlongedField],
    r: usize,
    space: &SpaceSpec,
    point: &Point,
) -> Result<Vec<Vec<Rat>>, RankError> {
    let columns = enumerate_jet_coords(space, r);
    let coeffs = coefficient_table(fields, &columns)?;
    evaluate_rows(&coeffs, point)
}

fn coefficient_table(fields: &[ProlongedField], columns: &[JetCoord]) -> Result<Vec<Vec<Expr>>, RankError> {
    fields
        .par_iter()
        .map(|f| columns.iter().map(|&c| f.coefficient(c).map_err(RankError::from)).collect())
        .collect()
}

fn evaluate_rows(coeffs: &[Vec<Expr>], point: &Point) -> Result<Vec<Vec<Rat>>, RankError> {
    coeffs
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e.eval_at(point) {
                    Ok(v) => Ok(v),
                    Err(ExprError::DenominatorVanishes) => Err(RankError::DenominatorVanishes),
                    Err(other) => panic!("coefficient outside the jet space: {other}"),
                })
                .collect()
        })
        .collect()
}

/// A set of prolonged operators evaluated at shared sample points.
#[derive(Clone, Debug)]
pub struct EvaluatedSystem {
    jet_dimension: usize,
    seed: u64,
    /// `matrices[point][operator]`; degenerate points are dropped.
    matrices: Vec<Vec<Vec<Rat>>>,
}

impl EvaluatedSystem {
    /// Evaluates every operator at `sampling.points` points, resampling a
    /// point while any coefficient denominator vanishes there.
    pub fn new(fields: &[ProlongedField], r: usize, space: &SpaceSpec, sampling: Sampling) -> Result<Self, RankError> {
        let columns = enumerate_jet_coords(space, r);
        let coeffs = coefficient_table(fields, &columns)?;
        EvaluatedSystem::from_table(&coeffs, &columns, sampling)
    }

    /// Evaluates a table of expressions (one row per item) at sample points
    /// over `columns`; every expression must only involve those coordinates.
    pub fn from_table(coeffs: &[Vec<Expr>], columns: &[JetCoord], sampling: Sampling) -> Result<Self, RankError> {
        sampling.validate()?;
        let matrices: Vec<Option<Vec<Vec<Rat>>>> = (0..sampling.points)
            .into_par_iter()
            .map(|i| sampling.candidates(i, columns).find_map(|pt| evaluate_rows(coeffs, &pt).ok()))
            .collect();
        let matrices: Vec<_> = matrices.into_iter().flatten().collect();
        if matrices.is_empty() {
            return Err(RankError::AllPointsDegenerate { points: sampling.points, seed: sampling.seed });
        }
        Ok(EvaluatedSystem { jet_dimension: columns.len(), seed: sampling.seed, matrices })
    }

    pub fn operator_count(&self) -> usize {
        self.matrices[0].len()
    }

    pub fn point_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, point: usize) -> &[Vec<Rat>] {
        &self.matrices[point]
    }

    /// Rank report for the operators at the given indices.
    pub fn report(&self, subset: &[usize]) -> RankReport {
        let ranks = self
            .matrices
            .par_iter()
            .map(|m| {
                let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| m[i].clone()).collect();
                bareiss_rank(&rows)
            })
            .collect();
        RankReport::from_ranks(ranks, self.jet_dimension, self.seed)
    }

    pub fn report_all(&self) -> RankReport {
        self.report(&(0..self.operator_count()).collect::<Vec<_>>())
    }
}

pub fn prolong_all(operators: &[VectorField], r: usize, space: &SpaceSpec) -> Vec<ProlongedField> {
    operators.iter().map(|x| prolong(x, r, space)).collect()
}

pub fn generic_rank(q: &RankQuery) -> Result<RankReport, RankError> {
    if q.operators.is_empty() {
        q.sampling.validate()?;
        let dim = enumerate_jet_coords(&q.space, q.order).len();
        return Ok(RankReport::from_ranks(vec![0; q.sampling.points], dim, q.sampling.seed));
    }
    let fields = prolong_all(&q.operators, q.order, &q.space);
    Ok(EvaluatedSystem::new(&fields, q.order, &q.space, q.sampling)?.report_all())
}

/// `jet_dimension − generic rank` with default sampling.
pub fn invariant_count(operators: &[VectorField], r: usize, space: &SpaceSpec) -> Result<usize, RankError> {
    Ok(generic_rank(&RankQuery::new(operators.to_vec(), r, space.clone()))?.invariant_count)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    /// `(K, rank)` for `K = 0..=k_max`.
    pub rows: Vec<(u32, usize)>,
    /// Smallest `K` from which the rank stays constant through `k_max`.
    pub stable_from: u32,
    pub jet_dimension: usize,
}

/// Ranks of the truncations `k ≤ K` of a tagged operator list, for every
/// `K` up to `k_max`. Members tagged above `k_max` are ignored.
pub fn stabilization_scan(
    members: &[(u32, VectorField)],
    r: usize,
    space: &SpaceSpec,
    k_max: u32,
    sampling: Sampling,
) -> Result<ScanReport, RankError> {
    let kept: Vec<&(u32, VectorField)> = members.iter().filter(|(k, _)| *k <= k_max).collect();
    let ops: Vec<VectorField> = kept.iter().map(|(_, x)| x.clone()).collect();
    let jet_dimension = enumerate_jet_coords(space, r).len();
    let rows: Vec<(u32, usize)> = if ops.is_empty() {
        sampling.validate()?;
        (0..=k_max).map(|k| (k, 0)).collect()
    } else {
        let system = EvaluatedSystem::new(&prolong_all(&ops, r, space), r, space, sampling)?;
        (0..=k_max)
            .map(|k| {
                let subset: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].0 <= k).collect();
                (k, system.report(&subset).rank)
            })
            .collect()
    };
    let last = rows.last().expect("k_max ≥ 0").1;
    let stable_from = rows.iter().rev().take_while(|(_, rk)| *rk == last).last().expect("nonempty").0;
    Ok(ScanReport { rows, stable_from, jet_dimension })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    /// Indices into the input operator list, ascending.
    pub selected: Vec<usize>,
    /// Rank after each selection.
    pub rank_trace: Vec<usize>,
    pub report: RankReport,
    pub full: RankReport,
}

/// Greedy forward selection in input order: an operator is kept iff it
/// raises the rank at the reference point (the first point of maximal full
/// rank).
pub fn find_generating_set(
    operators: &[VectorField],
    r: usize,
    space: &SpaceSpec,
    sampling: Sampling,
) -> Result<GeneratingSet, RankError> {
    if operators.is_empty() {
        let full = generic_rank(&RankQuery { operators: vec![], order: r, space: space.clone(), sampling })?;
        return Ok(GeneratingSet { selected: vec![], rank_trace: vec![], report: full.clone(), full });
    }
    let system = EvaluatedSystem::new(&prolong_all(operators, r, space), r, space, sampling)?;
    let full = system.report_all();
    let reference = full.per_point_ranks.iter().position(|&x| x == full.rank).expect("nonempty");
    let mut echelon = IncrementalEchelon::new();
    let mut selected = Vec::new();
    let mut rank_trace = Vec::new();
    for (i, row) in system.matrix(reference).iter().enumerate() {
        if echelon.rank() == full.rank {
            break;
        }
        if echelon.insert(row) {
            selected.push(i);
            rank_trace.push(echelon.rank());
        }
    }
    let report = system.report(&selected);
    Ok(GeneratingSet { selected, rank_trace, report, full })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub equal_rank: bool,
    pub candidate: RankReport,
    pub reference: RankReport,
}

/// Compares the generic ranks of two operator lists at shared points.
pub fn verify_generating_set(
    candidate: &[VectorField],
    reference: &[VectorField],
    r: usize,
    space: &SpaceSpec,
    sampling: Sampling,
) -> Result<Verification, RankError> {
    let all: Vec<VectorField> = candidate.iter().chain(reference).cloned().collect();
    if all.is_empty() {
        let empty = generic_rank(&RankQuery { operators: vec![], order: r, space: space.clone(), sampling })?;
        return Ok(Verification { equal_rank: true, candidate: empty.clone(), reference: empty });
    }
    let system = EvaluatedSystem::new(&prolong_all(&all, r, space), r, space, sampling)?;
    let cand = system.report(&(0..candidate.len()).collect::<Vec<_>>());
    let refr = system.report(&(candidate.len()..all.len()).collect::<Vec<_>>());
    Ok(Verification { equal_rank: cand.rank == refr.rank, candidate: cand, reference: refr })
}

#[cfg(test)]
mod tests;
