//! Schur-Cohn Hermitian forms.
//!
//! For `f(z) = a_0 z^n + a_1 z^{n-1} + ... + a_n` the form
//!
//! ```text
//! H(x) = Σ_j |conj(a_0) x_j + conj(a_1) x_{j+1} + ... + conj(a_{n-j}) x_n|^2
//!      - Σ_j |a_n x_j + a_{n-1} x_{j+1} + ... + a_j x_n|^2
//! ```
//!
//! is positive definite exactly when every zero of `f` lies in the open unit
//! disc. Writing both sums as `|U x|^2` and `|L x|^2` with upper-triangular
//! Toeplitz `U`, `L` gives the matrix `UᴴU - LᴴL`.
//!
//! Row `j` of `L` runs `a_n, a_{n-1}, ..., a_j` so that every row has as many
//! terms as the matching row of `U`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{definiteness, Definiteness, HermitianMatrix, NumericsError};
use crate::polydisc::{associated_polynomial, SymPoint};
use crate::polynomial::MonicPoly;

/// Zero location decided by the Schur-Cohn form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscLocation {
    /// All zeros in the open unit disc.
    Inside,
    /// The form is numerically singular; at least one zero is near the
    /// circle or two zeros are near-reflections of each other.
    Band,
    /// Some zero lies outside the open disc.
    NotInside,
}

/// The Toeplitz factors and the resulting Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurMatrixPair {
    pub upper: Vec<Vec<Complex64>>,
    pub lower: Vec<Vec<Complex64>>,
    pub hermitian: HermitianMatrix,
}

/// Full coefficient list `a_0 = 1, a_1, ..., a_n`.
fn full_coeffs(poly: &MonicPoly) -> Vec<Complex64> {
    std::iter::once(Complex64::new(1.0, 0.0))
        .chain(poly.coeffs().iter().copied())
        .collect()
}

pub fn schur_cohn_factors(poly: &MonicPoly) -> Result<SchurMatrixPair, NumericsError> {
    let a = full_coeffs(poly);
    let n = poly.degree();
    let zero = Complex64::new(0.0, 0.0);
    let mut upper = vec![vec![zero; n]; n];
    let mut lower = vec![vec![zero; n]; n];
    for j in 0..n {
        for k in j..n {
            upper[j][k] = a[k - j].conj();
            lower[j][k] = a[n - (k - j)];
        }
    }
    let hermitian = gram_difference(&upper, &lower)?;
    Ok(SchurMatrixPair {
        upper,
        lower,
        hermitian,
    })
}

fn gram_difference(u: &[Vec<Complex64>], l: &[Vec<Complex64>]) -> Result<HermitianMatrix, NumericsError> {
    let n = u.len();
    HermitianMatrix::from_upper(n, |j, k| {
        // Both factors are upper triangular, so only rows i <= min(j, k) contribute.
        (0..=j.min(k))
            .map(|i| u[i][j].conj() * u[i][k] - l[i][j].conj() * l[i][k])
            .sum()
    })
}

/// `UᴴU - LᴴL` for the monic polynomial `poly`.
pub fn schur_cohn_matrix(poly: &MonicPoly) -> Result<HermitianMatrix, NumericsError> {
    Ok(schur_cohn_factors(poly)?.hermitian)
}

/// Decides whether every zero of `poly` lies in the open unit disc, together
/// with the deciding pivot.
pub fn zeros_in_open_disc(poly: &MonicPoly, tol: f64) -> Result<(DiscLocation, f64), NumericsError> {
    let verdict = definiteness(&schur_cohn_matrix(poly)?, tol)?;
    let location = match verdict.kind {
        Definiteness::PositiveDefinite => DiscLocation::Inside,
        Definiteness::SemidefiniteBand => DiscLocation::Band,
        Definiteness::Indefinite => DiscLocation::NotInside,
    };
    Ok((location, verdict.min_pivot_or_eig))
}

/// The Hermitian matrix whose positive definiteness characterises the open
/// symmetrized polydisc: the Schur-Cohn matrix of
/// `z^n - s_1 z^{n-1} + ... + (-1)^n p`.
///
/// The `(0, 0)` entry is `1 - |p|^2` and `(1, 1)` is
/// `1 + |s_1|^2 - |s_{n-1}|^2 - |p|^2`. The first row carries
/// `conj((-1)^{n-1} s_{n-1} + (-1)^n conj(s_1) p)` in its last column; the
/// classical display of this matrix is its entrywise conjugate, which has the
/// same spectrum.
pub fn gn_matrix(point: &SymPoint) -> Result<HermitianMatrix, NumericsError> {
    schur_cohn_matrix(&associated_polynomial(point))
}
