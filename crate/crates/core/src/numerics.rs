//! Complex scalars, small dense Hermitian matrices and a tolerance-aware
//! positive-definiteness test.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("binomial coefficient C({n}, {k}) is out of range (need 0 <= k <= n <= 62)")]
    BinomialRange { n: u32, k: u32 },
    #[error("tolerance must be finite and strictly positive, got {0}")]
    InvalidTolerance(f64),
    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("matrix must be square and non-empty")]
    BadShape,
}

/// Returns an error if any value has a NaN or infinite component.
pub fn check_finite(what: &'static str, values: &[Complex64]) -> Result<(), NumericsError> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(NumericsError::NonFinite(what))
    }
}

pub(crate) fn check_tolerance(tol: f64) -> Result<(), NumericsError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(NumericsError::InvalidTolerance(tol))
    }
}

/// Exact binomial coefficient `C(n, k)` for `0 <= k <= n <= 62`.
pub fn binomial(n: u32, k: u32) -> Result<u64, NumericsError> {
    if k > n || n > 62 {
        return Err(NumericsError::BinomialRange { n, k });
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    // Each partial product C(n-k+i, i) is an integer; u128 keeps the
    // intermediate multiplication from overflowing.
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    Ok(acc as u64)
}

/// Dense Hermitian matrix stored row-major.
///
/// Only the upper triangle is ever computed; the lower triangle is filled
/// with conjugates and the diagonal is forced real, so the Hermitian
/// property holds exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from its upper triangle, `upper(j, k)` for `j <= k`.
    pub fn from_upper<F>(dim: usize, mut upper: F) -> Result<Self, NumericsError>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        if dim == 0 {
            return Err(NumericsError::BadShape);
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            let d = upper(j, j);
            entries[j * dim + j] = Complex64::new(d.re, 0.0);
            for k in j + 1..dim {
                let v = upper(j, k);
                entries[j * dim + k] = v;
                entries[k * dim + j] = v.conj();
            }
        }
        check_finite("hermitian matrix", &entries)?;
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from explicit rows, rejecting anything that is not
    /// exactly Hermitian.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(NumericsError::BadShape);
        }
        for (j, row) in rows.iter().enumerate() {
            check_finite("hermitian matrix", row)?;
            for k in j..dim {
                if row[k] != rows[k][j].conj() {
                    return Err(NumericsError::NotHermitian { row: j, col: k });
                }
            }
        }
        Ok(Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            entries[j * dim + j] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// `xᴴ H x`, which is real for a Hermitian `H`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.dim {
            let row: Complex64 = x.iter().enumerate().map(|(k, xk)| self.get(j, k) * xk).sum();
            acc += x[j].conj() * row;
        }
        acc.re
    }

    /// `Pᴴ H P` for the permutation matrix sending basis vector `perm[i]` to `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self { dim: n, entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Definiteness {
    PositiveDefinite,
    SemidefiniteBand,
    Indefinite,
}

/// Outcome of [`definiteness`].
///
/// `min_pivot_or_eig` is the smallest Cholesky pivot for a positive definite
/// matrix, the offending negative pivot (or negative 2×2 eigenvalue) for an
/// indefinite one, and a value in `[-tol, tol]` inside the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefinitenessVerdict {
    pub kind: Definiteness,
    pub min_pivot_or_eig: f64,
}

/// Decides the sign structure of `h` by Cholesky factorisation with
/// diagonal pivoting.
///
/// Every accepted pivot must exceed `tol`. Once no remaining diagonal entry
/// of the Schur complement exceeds `tol`, the remainder is indefinite if it
/// has a diagonal entry below `-tol` or a 2×2 principal submatrix with an
/// eigenvalue below `-tol`; otherwise it is reported as a band.
pub fn definiteness(h: &HermitianMatrix, tol: f64) -> Result<DefinitenessVerdict, NumericsError> {
    check_tolerance(tol)?;
    check_finite("hermitian matrix", &h.entries)?;
    let n = h.dim;
    let mut a = h.entries.clone();
    let at = |i: usize, j: usize| i * n + j;
    let mut min_pivot = f64::INFINITY;

    for step in 0..n {
        let (piv, d) = (step..n)
            .map(|i| (i, a[at(i, i)].re))
            .fold(
                (step, f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );

        if d <= tol {
            return Ok(classify_remainder(&a, n, step, tol, min_pivot));
        }

        if piv != step {
            for k in 0..n {
                a.swap(at(step, k), at(piv, k));
            }
            for k in 0..n {
                a.swap(at(k, step), at(k, piv));
            }
        }
        min_pivot = min_pivot.min(d);

        // Schur complement: A22 -= v vᴴ / d with v the pivot column.
        for i in step + 1..n {
            let vi = a[at(i, step)];
            for j in step + 1..n {
                let vj = a[at(j, step)];
                a[at(i, j)] -= vi * vj.conj() / d;
            }
            let diag = a[at(i, i)].re;
            a[at(i, i)] = Complex64::new(diag, 0.0);
        }
    }

    Ok(DefinitenessVerdict {
        kind: Definiteness::PositiveDefinite,
        min_pivot_or_eig: min_pivot,
    })
}

fn classify_remainder(a: &[Complex64], n: usize, start: usize, tol: f64, min_pivot: f64) -> DefinitenessVerdict {
    let at = |i: usize, j: usize| i * n + j;
    let mut lowest = f64::INFINITY;
    for i in start..n {
        lowest = lowest.min(a[at(i, i)].re);
    }
    for i in start..n {
        for j in i + 1..n {
            let (di, dj) = (a[at(i, i)].re, a[at(j, j)].re);
            let off = a[at(i, j)].norm();
            let eig = 0.5 * (di + dj) - (0.5 * (di - dj)).hypot(off);
            lowest = lowest.min(eig);
        }
    }
    if lowest < -tol {
        DefinitenessVerdict {
            kind: Definiteness::Indefinite,
            min_pivot_or_eig: lowest,
        }
    } else {
        DefinitenessVerdict {
            kind: Definiteness::SemidefiniteBand,
            min_pivot_or_eig: lowest.min(min_pivot),
        }
    }
}
