//! Gaussian binomials and the block structure they predict.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial in `q` with non-negative integer coefficients.
///
/// Coefficients are stored densely by power. Trailing zeros are trimmed; the
/// zero polynomial is stored as the single coefficient `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: Vec<BigUint>,
}

impl QPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigUint::zero());
        }
        QPolynomial { coeffs }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial {
            coeffs: alloc::vec![BigUint::zero()],
        }
    }

    pub fn one() -> Self {
        QPolynomial {
            coeffs: alloc::vec![BigUint::one()],
        }
    }

    /// `q^power`.
    pub fn monomial(power: usize) -> Self {
        let mut coeffs = alloc::vec![BigUint::zero(); power + 1];
        coeffs[power] = BigUint::one();
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficient of `q^power`; zero past the degree.
    pub fn coeff(&self, power: usize) -> BigUint {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Coefficient of `q^power` allowing negative powers, which read as zero.
    fn coeff_signed(&self, power: i64) -> BigUint {
        if power < 0 {
            BigUint::zero()
        } else {
            self.coeff(power as usize)
        }
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Value at `q = 1`, the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Multiplies by `q^power`.
    pub fn shifted(&self, power: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = alloc::vec![BigUint::zero(); power];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = alloc::vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

/// Renders as `1 + q + 2q^2`, skipping zero terms.
impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = c.is_one();
            match power {
                0 => write!(f, "{c}")?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{c}q")?,
                _ if unit => write!(f, "q^{power}")?,
                _ => write!(f, "{c}q^{power}")?,
            }
        }
        Ok(())
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_bracket(n: usize) -> Result<QPolynomial> {
    if n == 0 {
        return Err(Error::domain("n", "q-bracket is defined for n >= 1"));
    }
    Ok(QPolynomial::from_coeffs(alloc::vec![BigUint::one(); n]))
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: usize) -> QPolynomial {
    (1..=n).fold(QPolynomial::one(), |acc, k| {
        &acc * &q_bracket(k).expect("k >= 1")
    })
}

/// Memo table for `[ell choose m]_q`, filled row by row with
/// `[ell, m] = q^m [ell-1, m] + [ell-1, m-1]`.
#[derive(Clone, Debug, Default)]
pub struct QBinomialTable {
    rows: Vec<Vec<QPolynomial>>,
}

impl QBinomialTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, ell: usize, m: usize) -> Result<&QPolynomial> {
        if m > ell {
            return Err(Error::domain(
                "m",
                alloc::format!("q-binomial needs 0 <= m <= ell, got m = {m}, ell = {ell}"),
            ));
        }
        while self.rows.len() <= ell {
            let n = self.rows.len();
            let row = match self.rows.last() {
                None => alloc::vec![QPolynomial::one()],
                Some(prev) => (0..=n)
                    .map(|k| {
                        if k == 0 || k == n {
                            QPolynomial::one()
                        } else {
                            &prev[k].shifted(k) + &prev[k - 1]
                        }
                    })
                    .collect(),
            };
            self.rows.push(row);
        }
        Ok(&self.rows[ell][m])
    }
}

/// `[ell choose m]_q`, computed by the additive recurrence.
pub fn q_binomial(ell: usize, m: usize) -> Result<QPolynomial> {
    if m > ell {
        return Err(Error::domain(
            "m",
            alloc::format!("q-binomial needs 0 <= m <= ell, got m = {m}, ell = {ell}"),
        ));
    }
    let m = m.min(ell - m);
    // row[k] = [n choose k]_q for k <= m, updated in place from the top down.
    let mut row = alloc::vec![QPolynomial::one(); 1];
    for n in 1..=ell {
        if n <= m {
            row.push(QPolynomial::one());
        }
        for k in (1..n.min(m + 1)).rev() {
            row[k] = &row[k].shifted(k) + &row[k - 1];
        }
    }
    Ok(row.swap_remove(m))
}

/// Predicted Jordan structure of the shift operator on sector `(ell, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPrediction {
    /// `increments[d - 1] = dim ker M^d - dim ker M^(d-1)` for `d = 1..=m(ell-m)+1`.
    pub increments: Vec<usize>,
    /// Block size to number of blocks; sizes with no blocks are absent.
    pub multiplicities: BTreeMap<usize, usize>,
}

fn to_count(c: BigUint) -> Result<usize> {
    c.to_usize()
        .ok_or_else(|| Error::TooLarge(alloc::format!("coefficient {c} exceeds usize")))
}

fn top_weight(ell: usize, m: usize) -> Result<usize> {
    if m > ell {
        return Err(Error::domain(
            "m",
            alloc::format!("particle number {m} is outside 0..={ell}"),
        ));
    }
    Ok(m * (ell - m))
}

/// Kernel-dimension increments read from the Gaussian binomial: entry `d`
/// is the coefficient of `q^floor((m(ell-m) - (d-1)) / 2)`.
pub fn predict_increments(ell: usize, m: usize) -> Result<Vec<usize>> {
    let top = top_weight(ell, m)?;
    let poly = q_binomial(ell, m)?;
    increments_from_poly(&poly, top)
}

fn increments_from_poly(poly: &QPolynomial, top: usize) -> Result<Vec<usize>> {
    (1..=top + 1)
        .map(|d| to_count(poly.coeff((top + 1 - d) / 2)))
        .collect()
}

/// Block multiplicities from coefficient differences: a block of size `d`
/// occurs only when `m(ell-m) - d` is odd, and then there are
/// `coeff(q^((top-d+1)/2)) - coeff(q^((top-d-1)/2))` of them.
pub fn predict_blocks(ell: usize, m: usize) -> Result<BlockPrediction> {
    let top = top_weight(ell, m)?;
    let poly = q_binomial(ell, m)?;
    let increments = increments_from_poly(&poly, top)?;

    let top = top as i64;
    let mut multiplicities = BTreeMap::new();
    for d in 1..=top + 1 {
        if (top - d).rem_euclid(2) == 0 {
            continue;
        }
        let upper = poly.coeff_signed((top - d + 1) / 2);
        let lower = poly.coeff_signed((top - d - 1).div_euclid(2));
        if upper < lower {
            return Err(Error::Integrity(alloc::format!(
                "q-binomial coefficients are not unimodal at block size {d}"
            )));
        }
        let count = to_count(upper - lower)?;
        if count > 0 {
            multiplicities.insert(d as usize, count);
        }
    }
    Ok(BlockPrediction {
        increments,
        multiplicities,
    })
}
