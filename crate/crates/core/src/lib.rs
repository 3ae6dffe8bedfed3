//! Exact Jordan structure of the fermionic nilpotent shift operator.
//!
//! The shift operator `M = Σ c_k b'_{k+1} b_k` on an open chain of `ell` sites
//! conserves particle number, so it is analysed one Fock sector `(ell, m)` at a
//! time. Together with the lowering operator `M'` and the diagonal `Z` it spans
//! an `sl2` representation, which fixes its Jordan type: the number of blocks
//! of each size is read off the coefficients of the Gaussian binomial
//! `[ell choose m]_q`.
//!
//! Everything here is exact. Matrix entries are arbitrary-precision rationals
//! and polynomial coefficients are arbitrary-precision integers.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod fock;
pub mod jordan;
pub mod linalg;
pub mod matrix;
pub mod operators;
pub mod qgrade;

pub use error::{Error, Result};
pub use fock::{
    enumerate_sector, sector_weight_dimensions, weight, OccupationState, SectorBasis, MAX_SITES,
};
pub use jordan::{
    analyze_sector, blocks_from_profile, build_chains, chain_matrices,
    injectivity_surjectivity_table, kernel_profile, kernel_profile_capped, proper_eigenstate_check,
    GradedMapCheck, JordanChain, JordanReport, KernelProfile, ProperEigenstateCheck,
};
pub use linalg::{exact_rank, null_space};
pub use matrix::{ExactMatrix, SectorTag};
pub use operators::{
    apply_bilinear, build_diagonals, build_lowering, build_shift, commutator,
    extremal_transfer_scalar, verify_sl2, verify_sl2_on, Couplings, Diagonals, RelationCheck,
    Sl2Report,
};
pub use qgrade::{
    predict_blocks, predict_increments, q_binomial, q_bracket, q_factorial, BlockPrediction,
    QBinomialTable, QPolynomial,
};

/// Arbitrary-precision rational used for every matrix entry.
pub type Rational = num_rational::BigRational;
