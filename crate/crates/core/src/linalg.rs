//! Exact rank and null spaces.
//!
//! Rank uses fraction-free elimination on sparse integer rows: every rational
//! row is cleared of denominators and reduced to its primitive part, and a
//! row is eliminated against a pivot row by `p * row - a * pivot` followed by
//! division by the content. No rational arithmetic happens inside the loop.
//!
//! Null spaces are small in this crate (one weight space at a time) and are
//! computed by dense Gauss-Jordan over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::ExactMatrix;
use crate::Rational;

type IntRow = Vec<(usize, BigInt)>;

/// Scales a rational row to a primitive integer row with positive leading entry.
fn integer_row(row: &[(usize, Rational)]) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let negate = row[0].1.is_negative();
    if !g.is_one() || negate {
        let g = if negate { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a_lead * row - r_lead * pivot`, where both leads sit in the same column,
/// so the result starts strictly to the right of it.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let r_lead = &row[0].1;
    let p_lead = &pivot[0].1;
    let g = r_lead.gcd(p_lead);
    let row_factor = p_lead / &g;
    let pivot_factor = r_lead / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, &row_factor * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&pivot_factor * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (
                ci,
                &row_factor * &row[i - 1].1 - &pivot_factor * &pivot[j - 1].1,
            )
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    make_primitive(&mut out);
    out
}

fn lead_bits(row: &IntRow) -> u64 {
    row[0].1.bits()
}

/// Incremental row echelon form keyed by leading column.
#[derive(Debug, Default)]
struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    /// Reduces `row` against the current pivots and keeps it if it is
    /// independent. When an incoming row has a smaller leading entry than the
    /// pivot in its column, the two trade places and the old pivot is reduced
    /// in its turn.
    fn insert(&mut self, mut row: IntRow) {
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get_mut(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return;
                }
                Some(pivot) => {
                    if lead_bits(&row) < lead_bits(pivot) {
                        core::mem::swap(pivot, &mut row);
                    }
                    row = eliminate(&row, pivot);
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Rank over the rationals.
pub fn exact_rank(a: &ExactMatrix) -> usize {
    // Eliminating along the shorter side keeps the pivot map small.
    if a.ncols() < a.nrows() {
        return exact_rank(&a.transpose());
    }
    let mut echelon = Echelon::default();
    for row in a.rows() {
        if !row.is_empty() {
            echelon.insert(integer_row(row));
        }
    }
    echelon.rank()
}

/// Rank of a set of dense rational vectors.
pub fn rank_of_vectors(vectors: &[Vec<Rational>]) -> usize {
    let mut echelon = Echelon::default();
    for v in vectors {
        let row: Vec<(usize, Rational)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.clone()))
            .collect();
        if !row.is_empty() {
            echelon.insert(integer_row(&row));
        }
    }
    echelon.rank()
}

/// Reduced row echelon form in place; returns the pivot columns.
/// Zero rows are removed.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].recip();
        for x in rows[next].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r == next || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let (head, tail) = if r < next {
                let (a, b) = rows.split_at_mut(next);
                (&mut a[r], &b[0])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&mut b[0], &a[next])
            };
            for (x, p) in head.iter_mut().zip(tail.iter()) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// Basis of `{x : A x = 0}` as dense vectors over the columns of `a`.
///
/// The basis is returned in reduced row echelon form (each vector has a unit
/// leading coordinate, zero in every other vector's leading coordinate, and
/// vectors are ordered by leading coordinate), so it is unique for a given
/// matrix.
pub fn null_space(a: &ExactMatrix) -> Vec<Vec<Rational>> {
    let n = a.ncols();
    let mut rows: Vec<Vec<Rational>> = a
        .rows()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut dense = alloc::vec![Rational::zero(); n];
            for (c, v) in r {
                dense[*c] = v.clone();
            }
            dense
        })
        .collect();
    let pivots = rref(&mut rows);

    let mut is_pivot = alloc::vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis: Vec<Vec<Rational>> = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = alloc::vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    rref(&mut basis);
    basis
}
