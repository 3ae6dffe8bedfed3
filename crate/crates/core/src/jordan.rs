//! Kernel profiles, block multiplicities and explicit Jordan chains of the
//! shift operator.
//!
//! Chains are built from the `sl2` structure: a vector annihilated by the
//! lowering operator `M'` at weight `r` is a lowest-weight vector of an
//! irreducible component of dimension `m(ell-m) - 2r + 1`, and repeated
//! application of `M` walks up that component.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{enumerate_sector, SectorBasis};
use crate::linalg::{exact_rank, null_space};
use crate::matrix::ExactMatrix;
use crate::operators::{build_lowering, build_shift, Couplings};
use crate::qgrade::{predict_blocks, BlockPrediction};
use crate::Rational;

/// `dims[d] = dim ker M^d` for `d = 0, 1, ...` until the kernel is everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelProfile {
    pub dims: Vec<usize>,
    /// `increments[d - 1] = dims[d] - dims[d - 1]`.
    pub increments: Vec<usize>,
    /// False when the computation stopped at a cap before `M^d` vanished.
    pub complete: bool,
}

impl KernelProfile {
    fn from_dims(dims: Vec<usize>, complete: bool) -> Self {
        let increments = dims.windows(2).map(|w| w[1] - w[0]).collect();
        KernelProfile {
            dims,
            increments,
            complete,
        }
    }

    /// Nilpotency index when the profile is complete.
    pub fn index(&self) -> Option<usize> {
        self.complete.then(|| self.dims.len() - 1)
    }
}

/// Nilpotency bound used for a matrix: `m(ell-m) + 1` on a tagged sector,
/// otherwise the dimension.
fn nilpotency_bound(m: &ExactMatrix) -> usize {
    match m.domain() {
        Some(tag) if tag.weight.is_none() => tag.max_weight() + 1,
        _ => m.nrows(),
    }
}

/// Kernel dimensions of all powers of a nilpotent matrix.
///
/// Fails with an integrity error if `M^d` has not vanished by the nilpotency
/// bound.
pub fn kernel_profile(m: &ExactMatrix) -> Result<KernelProfile> {
    kernel_profile_capped(m, None)
}

/// Like [`kernel_profile`], but stops after `M^dmax` when a cap is given.
/// A profile cut off by the cap is marked incomplete.
pub fn kernel_profile_capped(m: &ExactMatrix, dmax: Option<usize>) -> Result<KernelProfile> {
    if !m.is_square() {
        return Err(Error::Shape(alloc::format!(
            "kernel profile needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let bound = nilpotency_bound(m);
    let mut dims = alloc::vec![0usize];
    if n == 0 {
        return Ok(KernelProfile::from_dims(dims, true));
    }
    let mut power = m.clone();
    for d in 1..=bound {
        if dmax.is_some_and(|cap| d > cap) {
            return Ok(KernelProfile::from_dims(dims, false));
        }
        let kernel = n - exact_rank(&power);
        dims.push(kernel);
        if kernel == n {
            return Ok(KernelProfile::from_dims(dims, true));
        }
        if d < bound {
            power = power.mul(m)?;
        }
    }
    Err(Error::Integrity(alloc::format!(
        "matrix power {bound} is not zero; the operator is not nilpotent within its bound"
    )))
}

/// Number of Jordan blocks of each size, `count[d] = N_d - N_{d+1}`.
///
/// For an incomplete profile only the sizes that the known increments
/// determine are reported.
pub fn blocks_from_profile(p: &KernelProfile) -> BTreeMap<usize, usize> {
    let inc = &p.increments;
    let known = if p.complete {
        inc.len()
    } else {
        inc.len().saturating_sub(1)
    };
    (1..=known)
        .filter_map(|d| {
            let next = inc.get(d).copied().unwrap_or(0);
            let count = inc[d - 1] - next;
            (count > 0).then_some((d, count))
        })
        .collect()
}

/// Rank data of one graded piece `M: V^r -> V^{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMapCheck {
    pub weight: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Injectivity guaranteed for `r <= floor((m(ell-m) - 1) / 2)`.
    pub injective_guaranteed: bool,
    /// Surjectivity guaranteed for `r >= floor(m(ell-m) / 2)`.
    pub surjective_guaranteed: bool,
}

impl GradedMapCheck {
    /// Every guaranteed property actually holds.
    pub fn consistent(&self) -> bool {
        (!self.injective_guaranteed || self.injective)
            && (!self.surjective_guaranteed || self.surjective)
    }
}

fn graded_checks(basis: &SectorBasis, shift: &ExactMatrix) -> Vec<GradedMapCheck> {
    let groups = basis.indices_by_weight();
    let top = basis.max_weight() as i64;
    (0..basis.max_weight())
        .map(|r| {
            let block = shift.submatrix(&groups[r + 1], &groups[r]);
            let rank = exact_rank(&block);
            let (dom, cod) = (groups[r].len(), groups[r + 1].len());
            GradedMapCheck {
                weight: r,
                domain_dim: dom,
                codomain_dim: cod,
                rank,
                injective: rank == dom,
                surjective: rank == cod,
                injective_guaranteed: (r as i64) <= (top - 1).div_euclid(2),
                surjective_guaranteed: (r as i64) >= top / 2,
            }
        })
        .collect()
}

/// Injectivity and surjectivity of each `M: V^r -> V^{r+1}`, `r < m(ell-m)`.
pub fn injectivity_surjectivity_table(
    ell: usize,
    m: usize,
    c: &Couplings,
) -> Result<Vec<GradedMapCheck>> {
    let basis = enumerate_sector(ell, m)?;
    let shift = build_shift(&basis, c)?;
    Ok(graded_checks(&basis, &shift))
}

/// `v_1, ..., v_len` with `M v_i = v_{i+1}` and `M v_len = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChain {
    /// Dense coordinates over the sector basis, head first.
    pub vectors: Vec<Vec<Rational>>,
    /// Weight of the head vector `v_1`.
    pub head_weight: usize,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn head(&self) -> &[Rational] {
        &self.vectors[0]
    }

    /// The kernel vector `v_len`.
    pub fn tail(&self) -> &[Rational] {
        &self.vectors[self.vectors.len() - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanReport {
    pub ell: usize,
    pub m: usize,
    /// `dim V^r` for `r = 0..=m(ell-m)`.
    pub sector_dims: Vec<usize>,
    pub profile: KernelProfile,
    pub computed_blocks: BTreeMap<usize, usize>,
    pub predicted: BlockPrediction,
    pub chains: Option<Vec<JordanChain>>,
    /// Computed structure equals the prediction (over the computed range),
    /// and chains, when present, passed `M P = P J` with `P` invertible.
    pub verified: bool,
}

impl JordanReport {
    pub fn predicted_blocks(&self) -> &BTreeMap<usize, usize> {
        &self.predicted.multiplicities
    }

    /// Block sizes repeated by multiplicity, largest first.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.computed_blocks
            .iter()
            .rev()
            .flat_map(|(&size, &count)| core::iter::repeat_n(size, count))
            .collect()
    }
}

fn profile_matches(profile: &KernelProfile, predicted: &BlockPrediction) -> bool {
    if profile.complete {
        profile.increments == predicted.increments
    } else {
        predicted.increments.starts_with(&profile.increments)
    }
}

fn blocks_match(
    profile: &KernelProfile,
    computed: &BTreeMap<usize, usize>,
    predicted: &BTreeMap<usize, usize>,
) -> bool {
    if profile.complete {
        return computed == predicted;
    }
    let known = profile.increments.len().saturating_sub(1);
    let restricted: BTreeMap<usize, usize> = predicted
        .iter()
        .filter(|(&d, _)| d <= known)
        .map(|(&d, &c)| (d, c))
        .collect();
    *computed == restricted
}

/// Kernel profile, block structure and prediction for one sector, with
/// optional explicit chains.
pub fn analyze_sector(
    ell: usize,
    m: usize,
    c: &Couplings,
    with_chains: bool,
    dmax: Option<usize>,
) -> Result<JordanReport> {
    let basis = enumerate_sector(ell, m)?;
    let shift = build_shift(&basis, c)?;
    let profile = kernel_profile_capped(&shift, dmax)?;
    let computed_blocks = blocks_from_profile(&profile);
    let predicted = predict_blocks(ell, m)?;

    let mut verified = profile_matches(&profile, &predicted)
        && blocks_match(&profile, &computed_blocks, &predicted.multiplicities);

    let chains = if with_chains {
        let lowering = build_lowering(&basis, c)?;
        let chains = lowest_weight_chains(&basis, &shift, &lowering)?;
        verify_chains(&basis, &shift, &chains)?;
        let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
        for ch in &chains {
            *lengths.entry(ch.len()).or_default() += 1;
        }
        verified &= !profile.complete || lengths == computed_blocks;
        Some(chains)
    } else {
        None
    };

    Ok(JordanReport {
        ell,
        m,
        sector_dims: basis.weight_dimensions(),
        profile,
        computed_blocks,
        predicted,
        chains,
        verified,
    })
}

/// Full analysis including a verified chain basis.
pub fn build_chains(ell: usize, m: usize, c: &Couplings) -> Result<JordanReport> {
    analyze_sector(ell, m, c, true, None)
}

fn lowest_weight_chains(
    basis: &SectorBasis,
    shift: &ExactMatrix,
    lowering: &ExactMatrix,
) -> Result<Vec<JordanChain>> {
    let n = basis.len();
    let top = basis.max_weight();
    let groups = basis.indices_by_weight();
    let mut chains = Vec::new();
    for r in 0..=top {
        let heads = if r == 0 {
            // M' maps weight 0 to nothing.
            null_space(&ExactMatrix::zeros(0, groups[0].len()))
        } else {
            null_space(&lowering.submatrix(&groups[r - 1], &groups[r]))
        };
        if heads.is_empty() {
            continue;
        }
        if 2 * r > top {
            return Err(Error::Integrity(alloc::format!(
                "lowest-weight vector found at weight {r} above the middle weight"
            )));
        }
        let length = top - 2 * r + 1;
        for head in heads {
            let mut v = alloc::vec![Rational::zero(); n];
            for (&i, x) in groups[r].iter().zip(head) {
                v[i] = x;
            }
            let mut vectors = Vec::with_capacity(length);
            for _ in 1..length {
                let next = shift.apply(&v)?;
                vectors.push(v);
                v = next;
            }
            vectors.push(v);
            chains.push(JordanChain {
                vectors,
                head_weight: r,
            });
        }
    }
    Ok(chains)
}

/// Columns of `P` (each chain tail first) and the matching nilpotent `J`
/// with unit superdiagonal inside each block.
pub fn chain_matrices(chains: &[JordanChain], n: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    let mut columns = Vec::with_capacity(n);
    let mut j_entries = Vec::new();
    for ch in chains {
        let start = columns.len();
        for (offset, v) in ch.vectors.iter().rev().enumerate() {
            if offset > 0 {
                j_entries.push((
                    start + offset - 1,
                    start + offset,
                    Rational::from_integer(1.into()),
                ));
            }
            columns.push(v.clone());
        }
    }
    let p = ExactMatrix::from_dense_columns(n, &columns)?;
    let j = ExactMatrix::from_triplets(columns.len(), columns.len(), j_entries)?;
    Ok((p, j))
}

fn verify_chains(basis: &SectorBasis, shift: &ExactMatrix, chains: &[JordanChain]) -> Result<()> {
    let n = basis.len();
    let weights = basis.weights();
    for (k, ch) in chains.iter().enumerate() {
        for (i, v) in ch.vectors.iter().enumerate() {
            let w = ch.head_weight + i;
            if v.iter().all(Zero::is_zero) {
                return Err(Error::Integrity(alloc::format!(
                    "chain {k} vanishes at position {}",
                    i + 1
                )));
            }
            if v.iter()
                .zip(weights)
                .any(|(x, &wt)| !x.is_zero() && wt != w)
            {
                return Err(Error::Integrity(alloc::format!(
                    "chain {k} vector {} leaves weight space {w}",
                    i + 1
                )));
            }
        }
    }

    let (p, j) = chain_matrices(chains, n)?;
    if p.ncols() != n {
        return Err(Error::Integrity(alloc::format!(
            "chains supply {} vectors for a {n}-dimensional sector",
            p.ncols()
        )));
    }
    let residual = shift.mul(&p)?.sub(&p.mul(&j)?)?;
    if let Some(worst) = residual.max_abs_entry() {
        return Err(Error::Integrity(alloc::format!(
            "M P != P J; worst residual {worst:?}"
        )));
    }
    let rank = exact_rank(&p);
    if rank != n {
        return Err(Error::Integrity(alloc::format!(
            "chain basis has rank {rank}, expected {n}"
        )));
    }
    Ok(())
}

/// Proper eigenstate count against the middle weight-space dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProperEigenstateCheck {
    pub proper_eigenstate_count: usize,
    pub middle_sector_dim: usize,
    pub equal: bool,
}

/// `dim ker M` against `dim V^{floor(m(ell-m)/2)}`.
pub fn proper_eigenstate_check(
    ell: usize,
    m: usize,
    c: &Couplings,
) -> Result<ProperEigenstateCheck> {
    let basis = enumerate_sector(ell, m)?;
    let shift = build_shift(&basis, c)?;
    let proper = basis.len() - exact_rank(&shift);
    let middle = basis.weight_dimensions()[basis.max_weight() / 2];
    Ok(ProperEigenstateCheck {
        proper_eigenstate_count: proper,
        middle_sector_dim: middle,
        equal: proper == middle,
    })
}

/// One-line description of a failing relation, for diagnostics.
pub fn describe_mismatch(report: &JordanReport) -> String {
    alloc::format!(
        "sector ({}, {}): increments {:?} vs predicted {:?}, blocks {:?} vs predicted {:?}",
        report.ell,
        report.m,
        report.profile.increments,
        report.predicted.increments,
        report.computed_blocks,
        report.predicted.multiplicities
    )
}
