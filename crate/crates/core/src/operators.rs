//! Sector matrices of the shift, lowering and diagonal operators.
//!
//! Matrices act on column vectors: entry `(i, j)` is the coefficient of basis
//! state `i` in the image of basis state `j`. Basis vectors are ordered
//! products `(b'_1)^nu_1 ... (b'_ell)^nu_ell |right>`, so a bilinear `b'_i b_j`
//! picks up the Jordan-Wigner sign of every occupied site it passes.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, SectorBasis};
use crate::matrix::{ExactMatrix, SectorTag};
use crate::Rational;

/// Nonzero hopping amplitudes `c_1 .. c_{ell-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Couplings {
    values: Vec<Rational>,
}

impl Couplings {
    /// Validates that no amplitude is zero. `values[k - 1]` is `c_k`.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(k) = values.iter().position(Zero::is_zero) {
            return Err(Error::domain(
                "couplings",
                alloc::format!("c_{} is zero", k + 1),
            ));
        }
        Ok(Couplings { values })
    }

    /// All amplitudes equal to one on `ell` sites.
    pub fn uniform(ell: usize) -> Self {
        Couplings {
            values: alloc::vec![Rational::one(); ell.saturating_sub(1)],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_uniform_one(&self) -> bool {
        self.values.iter().all(One::is_one)
    }

    fn check_for(&self, basis: &SectorBasis) -> Result<()> {
        let expected = basis.ell() - 1;
        if self.values.len() != expected {
            return Err(Error::domain(
                "couplings",
                alloc::format!(
                    "expected {expected} couplings for {} sites, got {}",
                    basis.ell(),
                    self.values.len()
                ),
            ));
        }
        Ok(())
    }
}

fn sector_tag(basis: &SectorBasis) -> SectorTag {
    SectorTag::sector(basis.ell(), basis.particles())
}

fn check_site(basis: &SectorBasis, site: usize, argument: &'static str) -> Result<()> {
    if site == 0 || site > basis.ell() {
        return Err(Error::domain(
            argument,
            alloc::format!("site {site} is outside 1..={}", basis.ell()),
        ));
    }
    Ok(())
}

/// Matrix elements of `b'_create b_annihilate` as `(row, col, sign)`.
fn bilinear_entries(
    basis: &SectorBasis,
    create: usize,
    annihilate: usize,
) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
    basis
        .states()
        .iter()
        .enumerate()
        .filter_map(move |(col, state)| {
            if !state.is_occupied(annihilate) {
                return None;
            }
            let removed_sign = state.occupied_before(annihilate) % 2;
            let intermediate = state.with_bits(state.bits() & !(1u64 << (annihilate - 1)));
            if intermediate.is_occupied(create) {
                return None;
            }
            let created_sign = intermediate.occupied_before(create) % 2;
            let target = intermediate.bits() | (1u64 << (create - 1));
            let row = basis
                .index_of_bits(target)
                .expect("particle-conserving bilinear stays in the sector");
            Some((row, col, (removed_sign + created_sign) % 2 == 1))
        })
}

/// `amplitude * b'_{create_site} b_{annihilate_site}` restricted to the sector.
pub fn apply_bilinear(
    basis: &SectorBasis,
    create_site: usize,
    annihilate_site: usize,
    amplitude: &Rational,
) -> Result<ExactMatrix> {
    check_site(basis, create_site, "create_site")?;
    check_site(basis, annihilate_site, "annihilate_site")?;
    let n = basis.len();
    let entries = bilinear_entries(basis, create_site, annihilate_site).map(|(r, c, negative)| {
        (
            r,
            c,
            if negative {
                -amplitude
            } else {
                amplitude.clone()
            },
        )
    });
    Ok(ExactMatrix::from_triplets(n, n, entries)?
        .with_sectors(Some(sector_tag(basis)), Some(sector_tag(basis))))
}

fn hopping_sum(
    basis: &SectorBasis,
    terms: impl Iterator<Item = (usize, usize, Rational)>,
) -> Result<ExactMatrix> {
    let mut triplets = Vec::new();
    for (create, annihilate, amplitude) in terms {
        for (r, c, negative) in bilinear_entries(basis, create, annihilate) {
            let v = if negative {
                -&amplitude
            } else {
                amplitude.clone()
            };
            triplets.push((r, c, v));
        }
    }
    let n = basis.len();
    Ok(ExactMatrix::from_triplets(n, n, triplets)?
        .with_sectors(Some(sector_tag(basis)), Some(sector_tag(basis))))
}

/// Shift operator `M = Σ_k c_k b'_{k+1} b_k`: moves one particle one site right.
pub fn build_shift(basis: &SectorBasis, c: &Couplings) -> Result<ExactMatrix> {
    c.check_for(basis)?;
    hopping_sum(
        basis,
        c.values()
            .iter()
            .enumerate()
            .map(|(i, ck)| (i + 2, i + 1, ck.clone())),
    )
}

/// Lowering partner `M' = Σ_k (k(ell-k)/c_k) b'_k b_{k+1}`.
pub fn build_lowering(basis: &SectorBasis, c: &Couplings) -> Result<ExactMatrix> {
    c.check_for(basis)?;
    let ell = basis.ell();
    hopping_sum(
        basis,
        c.values().iter().enumerate().map(|(i, ck)| {
            let k = i + 1;
            let w = Rational::from_integer(BigInt::from(k * (ell - k)));
            (k, k + 1, w / ck)
        }),
    )
}

/// Diagonal operators of a sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonals {
    /// `Z = Σ_k (2k - ell - 1) b'_k b_k`.
    pub z: ExactMatrix,
    /// Particle number `N`.
    pub number: ExactMatrix,
    /// Weight operator `Ω`.
    pub weight: ExactMatrix,
}

pub fn build_diagonals(basis: &SectorBasis) -> Diagonals {
    let ell = basis.ell() as i64;
    let tag = Some(sector_tag(basis));
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let z = basis.states().iter().map(|s| {
        int((1..=ell)
            .filter(|&k| s.is_occupied(k as usize))
            .map(|k| 2 * k - ell - 1)
            .sum())
    });
    let number = basis.states().iter().map(|s| int(s.particles() as i64));
    let weight = basis.weights().iter().map(|&w| int(w as i64));
    Diagonals {
        z: ExactMatrix::diagonal(z).with_sectors(tag, tag),
        number: ExactMatrix::diagonal(number).with_sectors(tag, tag),
        weight: ExactMatrix::diagonal(weight).with_sectors(tag, tag),
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if !a.is_square() || !b.is_square() || a.nrows() != b.nrows() {
        return Err(Error::Shape(alloc::format!(
            "commutator needs equal square matrices, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Outcome of one exact commutation relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    /// Largest entry of `lhs - rhs` when the relation fails.
    pub worst_residual: Option<(usize, usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Report {
    pub ell: usize,
    pub m: usize,
    pub relations: Vec<RelationCheck>,
}

impl Sl2Report {
    pub fn all_passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }
}

fn relation(name: &str, lhs: &ExactMatrix, rhs: &ExactMatrix) -> Result<RelationCheck> {
    let residual = lhs.sub(rhs)?;
    let worst = residual.max_abs_entry();
    Ok(RelationCheck {
        name: name.into(),
        passed: worst.is_none(),
        worst_residual: worst,
    })
}

/// Checks `[Z,M] = 2M`, `[Z,M'] = -2M'` and `[M,M'] = Z` exactly.
pub fn verify_sl2(ell: usize, m: usize, c: &Couplings) -> Result<Sl2Report> {
    let basis = enumerate_sector(ell, m)?;
    verify_sl2_on(&basis, c)
}

pub fn verify_sl2_on(basis: &SectorBasis, c: &Couplings) -> Result<Sl2Report> {
    let shift = build_shift(basis, c)?;
    let lowering = build_lowering(basis, c)?;
    let z = build_diagonals(basis).z;
    let two = Rational::from_integer(2.into());
    let relations = alloc::vec![
        relation("[Z,M] = 2M", &commutator(&z, &shift)?, &shift.scaled(&two))?,
        relation(
            "[Z,M'] = -2M'",
            &commutator(&z, &lowering)?,
            &lowering.scaled(&-two)
        )?,
        relation("[M,M'] = Z", &commutator(&shift, &lowering)?, &z)?,
    ];
    Ok(Sl2Report {
        ell: basis.ell(),
        m: basis.particles(),
        relations,
    })
}

/// The scalar `s` with `M^{m(ell-m)} |min> = s |max>`.
pub fn extremal_transfer_scalar(basis: &SectorBasis, shift: &ExactMatrix) -> Result<Rational> {
    let n = basis.len();
    let mut v = alloc::vec![Rational::zero(); n];
    v[0] = Rational::one();
    for _ in 0..basis.max_weight() {
        v = shift.apply(&v)?;
    }
    let (last, rest) = v.split_last().expect("sector is never empty");
    if n > 1 && rest.iter().any(|x| !x.is_zero()) {
        return Err(Error::Integrity(String::from(
            "top power of the shift maps |min> outside the span of |max>",
        )));
    }
    Ok(last.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationState;
    use alloc::vec;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn idx(basis: &SectorBasis, s: &str) -> usize {
        basis.index_of(&OccupationState::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn adjacent_hop_has_positive_sign() {
        let b = enumerate_sector(2, 1).unwrap();
        let m = apply_bilinear(&b, 2, 1, &int(1)).unwrap();
        assert_eq!(m.get(idx(&b, "01"), idx(&b, "10")), Some(&int(1)));
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn long_hop_over_two_particles() {
        // b'_4 b_1 |1110>: removing site 1 crosses nothing, creating at 4
        // passes sites 2 and 3, an even count.
        let b = enumerate_sector(4, 3).unwrap();
        let m = apply_bilinear(&b, 4, 1, &int(1)).unwrap();
        assert_eq!(m.get(idx(&b, "0111"), idx(&b, "1110")), Some(&int(1)));
    }

    #[test]
    fn long_hop_over_one_particle() {
        let b = enumerate_sector(3, 2).unwrap();
        let m = apply_bilinear(&b, 3, 1, &int(1)).unwrap();
        assert_eq!(m.get(idx(&b, "011"), idx(&b, "110")), Some(&int(-1)));
    }

    #[test]
    fn number_term_is_diagonal_occupation() {
        let b = enumerate_sector(5, 2).unwrap();
        for k in 1..=5 {
            let m = apply_bilinear(&b, k, k, &int(1)).unwrap();
            for (i, s) in b.states().iter().enumerate() {
                let expected = if s.is_occupied(k) {
                    Some(&int(1))
                } else {
                    None
                };
                assert_eq!(m.get(i, i), expected);
            }
            assert_eq!(m.iter().filter(|(r, c, _)| r != c).count(), 0);
        }
    }

    #[test]
    fn bilinear_site_range() {
        let b = enumerate_sector(3, 1).unwrap();
        assert!(matches!(
            apply_bilinear(&b, 0, 1, &int(1)),
            Err(Error::Domain {
                argument: "create_site",
                ..
            })
        ));
        assert!(matches!(
            apply_bilinear(&b, 1, 4, &int(1)),
            Err(Error::Domain {
                argument: "annihilate_site",
                ..
            })
        ));
    }

    #[test]
    fn shift_on_four_two() {
        let b = enumerate_sector(4, 2).unwrap();
        let m = build_shift(&b, &Couplings::uniform(4)).unwrap();
        let col = idx(&b, "1010");
        let images: Vec<_> = (0..b.len())
            .filter_map(|r| m.get(r, col).map(|v| (r, v.clone())))
            .collect();
        assert_eq!(
            images,
            vec![(idx(&b, "0110"), int(1)), (idx(&b, "1001"), int(1))]
        );
        assert_eq!(m.get(idx(&b, "0101"), idx(&b, "1001")), Some(&int(1)));
        assert_eq!(m.get(idx(&b, "0101"), idx(&b, "0110")), Some(&int(1)));
        assert!(m.iter().all(|(_, _, v)| *v == int(1)));
    }

    #[test]
    fn full_band_shift_is_zero() {
        let b = enumerate_sector(3, 3).unwrap();
        let m = build_shift(&b, &Couplings::uniform(3)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 1));
        assert!(m.is_zero());
    }

    #[test]
    fn lowering_weights() {
        let b = enumerate_sector(2, 1).unwrap();
        let l = build_lowering(&b, &Couplings::uniform(2)).unwrap();
        assert_eq!(l.get(idx(&b, "10"), idx(&b, "01")), Some(&int(1)));

        let b = enumerate_sector(4, 2).unwrap();
        let l = build_lowering(&b, &Couplings::uniform(4)).unwrap();
        assert_eq!(l.get(idx(&b, "1010"), idx(&b, "0110")), Some(&int(3)));

        let b = enumerate_sector(3, 0).unwrap();
        assert!(build_lowering(&b, &Couplings::uniform(3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn coupling_validation() {
        let b = enumerate_sector(4, 2).unwrap();
        let short = Couplings::new(vec![int(1), int(2)]).unwrap();
        assert!(matches!(
            build_shift(&b, &short),
            Err(Error::Domain {
                argument: "couplings",
                ..
            })
        ));
        match Couplings::new(vec![int(1), int(0), int(2)]) {
            Err(Error::Domain { message, .. }) => assert!(message.contains("c_2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagonals_four_two() {
        let b = enumerate_sector(4, 2).unwrap();
        let d = build_diagonals(&b);
        let z: Vec<_> = (0..6)
            .map(|i| d.z.get(i, i).cloned().unwrap_or_default())
            .collect();
        assert_eq!(z, vec![int(-4), int(-2), int(0), int(0), int(2), int(4)]);
        // Z = 2 Ω - m(ell - m) I
        let expected = d
            .weight
            .scaled(&int(2))
            .sub(&ExactMatrix::identity(6).scaled(&int(4)))
            .unwrap();
        assert_eq!(d.z.rows(), expected.rows());

        let b = enumerate_sector(1, 1).unwrap();
        assert!(build_diagonals(&b).z.is_zero());
    }

    #[test]
    fn sl2_relations_hold() {
        let report = verify_sl2(6, 3, &Couplings::uniform(6)).unwrap();
        assert!(report.all_passed(), "{report:?}");
        let c = Couplings::new(vec![
            Rational::new(1.into(), 2.into()),
            int(-3),
            int(7),
            Rational::new(22.into(), 7.into()),
        ])
        .unwrap();
        assert!(verify_sl2(5, 2, &c).unwrap().all_passed());

        let report = verify_sl2(2, 1, &Couplings::uniform(2)).unwrap();
        assert!(report.all_passed());
        let z = build_diagonals(&enumerate_sector(2, 1).unwrap()).z;
        assert_eq!(z.get(0, 0), Some(&int(-1)));
        assert_eq!(z.get(1, 1), Some(&int(1)));
    }

    #[test]
    fn commutator_examples() {
        let b = enumerate_sector(4, 2).unwrap();
        let m = build_shift(&b, &Couplings::uniform(4)).unwrap();
        let id = ExactMatrix::identity(6);
        assert!(commutator(&id, &m).unwrap().is_zero());
        let l = build_lowering(&b, &Couplings::uniform(4)).unwrap();
        assert_eq!(commutator(&m, &l).unwrap(), build_diagonals(&b).z);

        let b = enumerate_sector(5, 2).unwrap();
        let m = build_shift(&b, &Couplings::uniform(5)).unwrap();
        let z = build_diagonals(&b).z;
        assert_eq!(commutator(&z, &m).unwrap(), m.scaled(&int(2)));

        assert!(matches!(
            commutator(&ExactMatrix::identity(2), &ExactMatrix::identity(3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn broken_relation_reports_residual() {
        let a = ExactMatrix::identity(2);
        let r = relation("I = 0", &a, &ExactMatrix::zeros(2, 2)).unwrap();
        assert!(!r.passed);
        assert_eq!(r.worst_residual, Some((0, 0, int(1))));
    }

    #[test]
    fn transfer_scalar_four_two() {
        let b = enumerate_sector(4, 2).unwrap();
        let m = build_shift(&b, &Couplings::uniform(4)).unwrap();
        assert_eq!(extremal_transfer_scalar(&b, &m).unwrap(), int(2));
        let b = enumerate_sector(3, 0).unwrap();
        let m = build_shift(&b, &Couplings::uniform(3)).unwrap();
        assert_eq!(extremal_transfer_scalar(&b, &m).unwrap(), int(1));
    }
}
