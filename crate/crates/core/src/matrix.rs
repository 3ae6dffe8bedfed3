//! Sparse matrices over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// The Fock sector a matrix acts on or maps into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SectorTag {
    pub ell: usize,
    pub particles: usize,
    /// Set when the matrix is restricted to a single weight space.
    pub weight: Option<usize>,
}

impl SectorTag {
    pub fn sector(ell: usize, particles: usize) -> Self {
        SectorTag {
            ell,
            particles,
            weight: None,
        }
    }

    pub fn graded(ell: usize, particles: usize, weight: usize) -> Self {
        SectorTag {
            ell,
            particles,
            weight: Some(weight),
        }
    }

    pub fn max_weight(&self) -> usize {
        self.particles * (self.ell - self.particles)
    }
}

/// Row-major sparse matrix with exact rational entries.
///
/// Each row holds `(column, value)` pairs sorted by column. Zero values are
/// never stored, so equality compares shape, entries and sector tags only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ncols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
    domain: Option<SectorTag>,
    codomain: Option<SectorTag>,
}

impl ExactMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ExactMatrix {
            ncols,
            rows: alloc::vec![Vec::new(); nrows],
            domain: None,
            codomain: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| Rational::from_integer(1.into())))
    }

    pub fn diagonal(values: impl IntoIterator<Item = Rational>) -> Self {
        let rows: Vec<Vec<(usize, Rational)>> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if v.is_zero() {
                    Vec::new()
                } else {
                    alloc::vec![(i, v)]
                }
            })
            .collect();
        ExactMatrix {
            ncols: rows.len(),
            rows,
            domain: None,
            codomain: None,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated coordinates
    /// are summed and zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, Rational>> = alloc::vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::Shape(alloc::format!(
                    "entry ({r}, {c}) outside a {nrows}x{ncols} matrix"
                )));
            }
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        Ok(ExactMatrix {
            ncols,
            rows: acc.into_iter().map(collect_row).collect(),
            domain: None,
            codomain: None,
        })
    }

    /// Dense construction from row vectors.
    pub fn from_dense_rows(ncols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Shape(alloc::format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            out.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect(),
            );
        }
        Ok(ExactMatrix {
            ncols,
            rows: out,
            domain: None,
            codomain: None,
        })
    }

    /// Matrix whose columns are the given dense vectors of length `nrows`.
    pub fn from_dense_columns(nrows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut triplets = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::Shape(alloc::format!(
                    "column {c} has {} entries, expected {nrows}",
                    col.len()
                )));
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(nrows, columns.len(), triplets)
    }

    pub fn with_sectors(mut self, domain: Option<SectorTag>, codomain: Option<SectorTag>) -> Self {
        self.domain = domain;
        self.codomain = codomain;
        self
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn domain(&self) -> Option<SectorTag> {
        self.domain
    }

    pub fn codomain(&self) -> Option<SectorTag> {
        self.codomain
    }

    /// Stored entries of one row, sorted by column.
    #[inline]
    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<(usize, Rational)>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Rational> {
        let row = self.rows.get(r)?;
        row.binary_search_by_key(&c, |(col, _)| *col)
            .ok()
            .map(|i| &row[i].1)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    /// Entry of largest absolute value, first in row-major order on ties.
    pub fn max_abs_entry(&self) -> Option<(usize, usize, Rational)> {
        let mut best: Option<(usize, usize, &Rational)> = None;
        for (r, c, v) in self.iter() {
            if best.is_none_or(|(_, _, b)| v.abs() > b.abs()) {
                best = Some((r, c, v));
            }
        }
        best.map(|(r, c, v)| (r, c, v.clone()))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = alloc::vec![Vec::new(); self.ncols];
        for (r, c, v) in self.iter() {
            rows[c].push((r, v.clone()));
        }
        ExactMatrix {
            ncols: self.nrows(),
            rows,
            domain: self.codomain,
            codomain: self.domain,
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return ExactMatrix::zeros(self.nrows(), self.ncols)
                .with_sectors(self.domain, self.codomain);
        }
        ExactMatrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * factor)).collect())
                .collect(),
            domain: self.domain,
            codomain: self.codomain,
        }
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.nrows() != other.nrows() || self.ncols != other.ncols {
            return Err(Error::Shape(alloc::format!(
                "cannot {op} {}x{} and {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(self.combine(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "subtract")?;
        Ok(self.combine(other, |a, b| a - b))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let zero = Rational::zero();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len().max(b.len()));
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let ca = a.get(i).map_or(usize::MAX, |e| e.0);
                    let cb = b.get(j).map_or(usize::MAX, |e| e.0);
                    let (col, v) = if ca < cb {
                        i += 1;
                        (ca, f(&a[i - 1].1, &zero))
                    } else if cb < ca {
                        j += 1;
                        (cb, f(&zero, &b[j - 1].1))
                    } else {
                        i += 1;
                        j += 1;
                        (ca, f(&a[i - 1].1, &b[j - 1].1))
                    };
                    if !v.is_zero() {
                        out.push((col, v));
                    }
                }
                out
            })
            .collect();
        ExactMatrix {
            ncols: self.ncols,
            rows,
            domain: self.domain,
            codomain: self.codomain,
        }
    }

    /// Product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols != rhs.nrows() {
            return Err(Error::Shape(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                rhs.nrows(),
                rhs.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &rhs.rows[*k] {
                        *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                    }
                }
                collect_row(acc)
            })
            .collect();
        Ok(ExactMatrix {
            ncols: rhs.ncols,
            rows,
            domain: rhs.domain,
            codomain: self.codomain,
        })
    }

    /// Matrix-vector product with a dense vector.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.ncols {
            return Err(Error::Shape(alloc::format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.ncols
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[*c].is_zero())
                    .fold(Rational::zero(), |acc, (c, a)| acc + a * &v[*c])
            })
            .collect())
    }

    /// Restriction to the given rows and columns, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = BTreeMap::new();
        for (j, &c) in cols.iter().enumerate() {
            col_pos.insert(c, j);
        }
        let out = rows
            .iter()
            .map(|&r| {
                let mut picked: Vec<(usize, Rational)> = self.rows[r]
                    .iter()
                    .filter_map(|(c, v)| col_pos.get(c).map(|&j| (j, v.clone())))
                    .collect();
                picked.sort_by_key(|e| e.0);
                picked
            })
            .collect();
        ExactMatrix {
            ncols: cols.len(),
            rows: out,
            domain: None,
            codomain: None,
        }
    }
}

fn collect_row(acc: BTreeMap<usize, Rational>) -> Vec<(usize, Rational)> {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}
