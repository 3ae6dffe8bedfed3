//! Fermionic Fock sectors with fixed site count and particle number.
//!
//! Site `k` (1-indexed, leftmost site is 1) is stored in bit `k - 1` of a
//! `u64`. States of a sector are kept sorted by that machine word, which puts
//! the lowest-weight state `|1..10..0>` first and the highest-weight state
//! `|0..01..1>` last.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported number of sites.
pub const MAX_SITES: usize = 64;

/// Sectors with more states than this are refused rather than materialized.
pub const MAX_SECTOR_DIM: u128 = 1 << 24;

/// A Fock basis vector `|nu_1, ..., nu_ell>`.
///
/// Ordering compares the packed occupation word first, so within one sector
/// it coincides with the basis order of [`SectorBasis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationState {
    bits: u64,
    sites: u8,
}

impl OccupationState {
    pub fn new(sites: usize, bits: u64) -> Result<Self> {
        check_sites(sites)?;
        if sites < 64 && bits >> sites != 0 {
            return Err(Error::domain(
                "bits",
                alloc::format!("occupation word {bits:#x} has bits beyond site {sites}"),
            ));
        }
        Ok(OccupationState {
            bits,
            sites: sites as u8,
        })
    }

    /// Builds a state from occupation numbers listed from site 1 to site `ell`.
    pub fn from_occupations(occupations: &[u8]) -> Result<Self> {
        check_sites(occupations.len())?;
        let mut bits = 0u64;
        for (k, &nu) in occupations.iter().enumerate() {
            match nu {
                0 => {}
                1 => bits |= 1 << k,
                _ => {
                    return Err(Error::domain(
                        "occupations",
                        alloc::format!("site {} has occupation {nu}, expected 0 or 1", k + 1),
                    ))
                }
            }
        }
        Ok(OccupationState {
            bits,
            sites: occupations.len() as u8,
        })
    }

    /// Parses a bit string such as `"1001"` (site 1 first).
    pub fn parse(s: &str) -> Result<Self> {
        let occupations: Vec<u8> = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::domain(
                    "state",
                    alloc::format!("unexpected character {ch:?} in occupation string"),
                )),
            })
            .collect::<Result<_>>()?;
        Self::from_occupations(&occupations)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.sites as usize
    }

    /// Particle number `m`.
    #[inline]
    pub fn particles(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Occupation of `site` (1-indexed). Out-of-range sites read as empty.
    #[inline]
    pub fn is_occupied(&self, site: usize) -> bool {
        site >= 1 && site <= self.sites() && self.bits >> (site - 1) & 1 == 1
    }

    /// Number of occupied sites strictly to the left of `site`.
    #[inline]
    pub fn occupied_before(&self, site: usize) -> u32 {
        debug_assert!(site >= 1);
        let below = if site > 64 {
            u64::MAX
        } else {
            (1u64 << (site - 1)) - 1
        };
        (self.bits & below).count_ones()
    }

    /// Eigenvalue of the weight operator, `Σ k nu_k - m(m+1)/2`.
    ///
    /// It counts the one-site right moves needed to reach this state from the
    /// sector's lowest-weight state.
    pub fn weight(&self) -> usize {
        let m = self.particles();
        let site_sum: usize = set_sites(self.bits).sum();
        site_sum - m * (m + 1) / 2
    }

    pub(crate) fn with_bits(&self, bits: u64) -> Self {
        OccupationState {
            bits,
            sites: self.sites,
        }
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.sites());
        for k in 1..=self.sites() {
            s.push(if self.is_occupied(k) { '1' } else { '0' });
        }
        f.write_str(&s)
    }
}

/// Free-standing form of [`OccupationState::weight`].
pub fn weight(state: &OccupationState) -> usize {
    state.weight()
}

/// 1-indexed sites of the set bits, in increasing order.
fn set_sites(mut bits: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(k + 1)
        }
    })
}

fn check_sites(sites: usize) -> Result<()> {
    if sites == 0 {
        return Err(Error::domain("ell", "number of sites must be at least 1"));
    }
    if sites > MAX_SITES {
        return Err(Error::domain(
            "ell",
            alloc::format!("{sites} sites exceeds the supported maximum of {MAX_SITES}"),
        ));
    }
    Ok(())
}

/// `binomial(n, k)` in 128-bit arithmetic; exact for `n <= 64`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All `m`-particle states on `ell` sites, with their weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    ell: usize,
    m: usize,
    states: Vec<OccupationState>,
    weights: Vec<usize>,
}

/// Enumerates the sector `(ell, m)` in increasing occupation-word order.
pub fn enumerate_sector(ell: usize, m: usize) -> Result<SectorBasis> {
    check_sites(ell)?;
    if m > ell {
        return Err(Error::domain(
            "m",
            alloc::format!("particle number {m} is outside 0..={ell}"),
        ));
    }
    let dim = binomial(ell, m);
    if dim > MAX_SECTOR_DIM {
        return Err(Error::TooLarge(alloc::format!(
            "sector ({ell}, {m}) has {dim} states"
        )));
    }

    let mut states = Vec::with_capacity(dim as usize);
    let limit: u128 = 1u128 << ell;
    // Gosper's hack: next larger word with the same popcount.
    let mut word: u128 = (1u128 << m) - 1;
    while word < limit {
        states.push(OccupationState {
            bits: word as u64,
            sites: ell as u8,
        });
        if word == 0 {
            break;
        }
        let lowest = word & word.wrapping_neg();
        let ripple = word + lowest;
        word = (((ripple ^ word) >> 2) / lowest) | ripple;
    }
    debug_assert_eq!(states.len() as u128, dim);

    let weights = states.iter().map(OccupationState::weight).collect();
    Ok(SectorBasis {
        ell,
        m,
        states,
        weights,
    })
}

impl SectorBasis {
    #[inline]
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Particle number `m`.
    #[inline]
    pub fn particles(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    #[inline]
    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    #[inline]
    pub fn state(&self, index: usize) -> &OccupationState {
        &self.states[index]
    }

    /// Weight of each state, parallel to [`states`](Self::states).
    #[inline]
    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Top weight `m(ell - m)`.
    #[inline]
    pub fn max_weight(&self) -> usize {
        self.m * (self.ell - self.m)
    }

    pub fn index_of(&self, state: &OccupationState) -> Option<usize> {
        if state.sites() != self.ell {
            return None;
        }
        self.states.binary_search(state).ok()
    }

    pub(crate) fn index_of_bits(&self, bits: u64) -> Option<usize> {
        self.states.binary_search_by(|s| s.bits.cmp(&bits)).ok()
    }

    /// Number of states of each weight `r = 0..=m(ell - m)`.
    pub fn weight_dimensions(&self) -> Vec<usize> {
        let mut dims = alloc::vec![0usize; self.max_weight() + 1];
        for &w in &self.weights {
            dims[w] += 1;
        }
        dims
    }

    /// Basis indices grouped by weight, each group in basis order.
    pub fn indices_by_weight(&self) -> Vec<Vec<usize>> {
        let mut groups = alloc::vec![Vec::new(); self.max_weight() + 1];
        for (i, &w) in self.weights.iter().enumerate() {
            groups[w].push(i);
        }
        groups
    }

    /// `|1..1 0..0>`, the unique state of weight 0.
    pub fn min_state(&self) -> OccupationState {
        self.states[0]
    }

    /// `|0..0 1..1>`, the unique state of weight `m(ell - m)`.
    pub fn max_state(&self) -> OccupationState {
        self.states[self.states.len() - 1]
    }
}

/// Free-standing form of [`SectorBasis::weight_dimensions`].
pub fn sector_weight_dimensions(basis: &SectorBasis) -> Vec<usize> {
    basis.weight_dimensions()
}
