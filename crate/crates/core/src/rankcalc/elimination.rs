//! Exact rank of rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exprcore::Rat;

/// Scales a rational row by the lcm of its denominators.
pub fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Rank by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the integer matrix, so each
/// division by the previous pivot is exact.
pub fn bareiss_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let v = &prow[col] * &row[j] - &lead * &prow[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = prow[col].clone();
        rank += 1;
    }
    rank
}

/// Row echelon form grown one row at a time over the integers; rows are kept
/// primitive to limit growth.
#[derive(Clone, Debug, Default)]
pub struct IncrementalEchelon {
    /// `(pivot column, row)`, with zeros left of the pivot.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalEchelon {
    pub fn new() -> Self {
        IncrementalEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the rows so far; returns whether
    /// the rank grew.
    pub fn insert(&mut self, row: &[Rat]) -> bool {
        let mut v = integer_row(row);
        for (col, p) in &self.rows {
            if v[*col].is_zero() {
                continue;
            }
            let a = p[*col].clone();
            let b = v[*col].clone();
            for (x, y) in v.iter_mut().zip(p) {
                *x = &a * &*x - &b * y;
            }
            make_primitive(&mut v);
        }
        let Some(col) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if v[col].is_negative() {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        self.rows.push((col, v));
        true
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
}
