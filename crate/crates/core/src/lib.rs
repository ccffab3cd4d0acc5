//! Membership tests for the symmetrized polydisc.
//!
//! A point `(s_1, ..., s_{n-1}, p)` of `C^n` lies in the closed symmetrized
//! polydisc `Γ_n` exactly when the monic polynomial
//! `z^n - s_1 z^{n-1} + ... + (-1)^n p` has every zero in the closed unit
//! disc, and in the open polydisc `G_n` when every zero lies in the open
//! disc. This crate decides membership three independent ways:
//!
//! * [`polydisc::in_gamma_recursive`] / [`polydisc::in_gn_recursive`] peel
//!   one dimension at a time through the β-reduction
//!   `s_j = β_j + conj(β_{n-j}) p`;
//! * [`polydisc::in_gn_schur`] checks positive definiteness of the
//!   Schur-Cohn Hermitian form of the associated polynomial;
//! * [`polydisc::classify_oracle`] computes the zeros directly with an
//!   Aberth-Ehrlich iteration.
//!
//! [`polydisc::classify_consensus`] runs all of them and flags any
//! disagreement that is not explained by a tolerance band.

pub mod numerics;
pub mod polydisc;
pub mod polynomial;
pub mod schur;

pub use num_complex::Complex64;
pub use numerics::{binomial, definiteness, Definiteness, DefinitenessVerdict, HermitianMatrix};
pub use polydisc::{
    classify_consensus, classify_oracle, in_gamma_recursive, in_gn_recursive, in_gn_schur, ConsensusReport,
    PolydiscError, PreimagePoint, Region, RegionVerdict, SymPoint, ToleranceConfig,
};
pub use polynomial::{elementary_symmetric, find_roots, max_root_modulus, MonicPoly, RootSet};
