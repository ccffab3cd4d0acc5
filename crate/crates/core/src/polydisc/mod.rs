//! Points of `C^n`, the symmetrization map and the membership tests for the
//! symmetrized polydisc.
//!
//! A [`SymPoint`] stores `(s_1, ..., s_{n-1}, p)` as one coordinate vector
//! with `p` last. Its associated polynomial is
//! `f(z) = z^n - s_1 z^{n-1} + ... + (-1)^{n-1} s_{n-1} z + (-1)^n p`, whose
//! zeros are exactly the preimages of the point under the symmetrization map.

mod boundary;
mod consensus;
mod membership;
mod reduce;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{binomial, check_finite, NumericsError};
use crate::polynomial::{elementary_symmetric, MonicPoly, PolyError, MAX_DEGREE};

pub use boundary::{
    kernel_criterion, necessary_bounds, on_distinguished_boundary, pairwise_bounds, BetaConsistency, BoundaryVerdict,
    KernelVerdict,
};
pub use consensus::{classify_consensus, ConsensusReport, MethodOutcome};
pub use membership::{classify_oracle, in_gamma_recursive, in_gn_recursive, in_gn_schur};
pub use reduce::{beta_reduce, reconstruct, reconstruction_residual};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolydiscError {
    #[error("dimension must be between 1 and {MAX_DEGREE}, got {0}")]
    Dimension(usize),
    #[error("β-reduction is undefined: |p| = {p_modulus} is within the unimodular band")]
    ReductionUndefined { p_modulus: f64 },
    #[error("Schur test needs |p| < 1 - band, got |p| = {p_modulus}")]
    SchurNotApplicable { p_modulus: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid tolerance {name} = {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("root oracle failed: {0}")]
    Oracle(#[from] PolyError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `(s_1, ..., s_{n-1}, p)`; for `n = 1` the point is just `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymPoint {
    coords: Vec<Complex64>,
}

impl SymPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PolydiscError> {
        if coords.is_empty() || coords.len() > MAX_DEGREE {
            return Err(PolydiscError::Dimension(coords.len()));
        }
        check_finite("point coordinates", &coords)?;
        Ok(Self { coords })
    }

    pub fn from_parts(s: &[Complex64], p: Complex64) -> Result<Self, PolydiscError> {
        let mut coords = s.to_vec();
        coords.push(p);
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `s_1, ..., s_{n-1}`.
    pub fn s(&self) -> &[Complex64] {
        &self.coords[..self.coords.len() - 1]
    }

    pub fn p(&self) -> Complex64 {
        self.coords[self.coords.len() - 1]
    }

    /// All `n` coordinates, `p` last.
    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }
}

/// A preimage `(z_1, ..., z_n)` under the symmetrization map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimagePoint {
    pub z: Vec<Complex64>,
}

impl PreimagePoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self, PolydiscError> {
        if z.is_empty() || z.len() > MAX_DEGREE {
            return Err(PolydiscError::Dimension(z.len()));
        }
        check_finite("preimage coordinates", &z)?;
        Ok(Self { z })
    }
}

/// Numerical thresholds shared by every membership decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Half-width of the band around `|root| = 1` (and `|β| = 1`) in which
    /// no strict side is chosen.
    pub boundary_band: f64,
    /// Pivot threshold for positive definiteness.
    pub matrix_tol: f64,
    /// Scaled residual that the root oracle must reach.
    pub root_residual: f64,
    /// Half-width of the band around `|p| = 1` in which β-reduction is not
    /// attempted.
    pub p_unimodular_band: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            boundary_band: 1e-9,
            matrix_tol: 1e-10,
            root_residual: 1e-12,
            p_unimodular_band: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), PolydiscError> {
        for (name, value) in [
            ("boundary_band", self.boundary_band),
            ("matrix_tol", self.matrix_tol),
            ("root_residual", self.root_residual),
            ("p_unimodular_band", self.p_unimodular_band),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(PolydiscError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// Region codes; the numeric values are the ones written to grid files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Outside = 0,
    InteriorGn = 1,
    BoundaryGamma = 2,
    DistinguishedBoundary = 3,
    ToleranceBand = 4,
}

impl Region {
    pub fn code(self) -> u8 {
        self as u8
    }

    /// Member of the closed polydisc.
    pub fn in_gamma(self) -> bool {
        matches!(
            self,
            Region::InteriorGn | Region::BoundaryGamma | Region::DistinguishedBoundary
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Outside => "outside",
            Region::InteriorGn => "interior_gn",
            Region::BoundaryGamma => "boundary_gamma",
            Region::DistinguishedBoundary => "distinguished_boundary",
            Region::ToleranceBand => "tolerance_band",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    GammaRecursive,
    GnRecursive,
    GnSchur,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::GammaRecursive => "gamma_recursive",
            Method::GnRecursive => "gn_recursive",
            Method::GnSchur => "gn_schur",
        }
    }
}

/// Method-specific evidence attached to a [`RegionVerdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The points visited by β-reduction, starting with the input. When the
    /// chain stopped in the unimodular band the oracle verdict for the last
    /// point is attached.
    BetaChain {
        chain: Vec<SymPoint>,
        delegated: Option<Box<RegionVerdict>>,
    },
    MinPivot(f64),
    Roots {
        max_modulus: f64,
        min_modulus: f64,
        roots: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub region: Region,
    pub method: Method,
    pub certificate: Certificate,
    /// Signed distance of the deciding quantity from its threshold; always
    /// present for [`Region::ToleranceBand`].
    pub margin: Option<f64>,
}

/// `π_n(z)`: the elementary symmetric functions of the preimage.
pub fn symmetrize(z: &PreimagePoint) -> Result<SymPoint, PolydiscError> {
    SymPoint::new(elementary_symmetric(&z.z)?)
}

/// `z^n - s_1 z^{n-1} + ... + (-1)^n p`, i.e. `a_j = (-1)^j s_j`.
pub fn associated_polynomial(pt: &SymPoint) -> MonicPoly {
    let coeffs = pt
        .coords
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { -c } else { c })
        .collect();
    MonicPoly::new(coeffs).expect("SymPoint invariants guarantee a valid polynomial")
}

pub(crate) fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n as u32, k as u32).expect("dimension is capped well below 62") as f64
}
