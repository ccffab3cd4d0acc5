//! β-reduction: `s_j = β_j + conj(β_{n-j}) p`.
//!
//! The equations couple `j` with `n - j`. Conjugating the partner equation,
//! multiplying by `p` and subtracting eliminates `β_{n-j}`:
//!
//! ```text
//! β_j = (s_j - conj(s_{n-j}) p) / (1 - |p|^2)
//! ```
//!
//! For odd `n` the middle index pairs with itself and the same formula holds.

use num_complex::Complex64;

use super::{PolydiscError, SymPoint, ToleranceConfig};

/// Solves for `(β_1, ..., β_{n-1})`, returned as a point of dimension `n - 1`
/// whose last coordinate is `β_{n-1}`.
pub fn beta_reduce(pt: &SymPoint, tol: &ToleranceConfig) -> Result<SymPoint, PolydiscError> {
    let n = pt.dim();
    if n < 2 {
        return Err(PolydiscError::Dimension(n));
    }
    let p = pt.p();
    let pm = p.norm();
    if pm >= 1.0 - tol.p_unimodular_band {
        return Err(PolydiscError::ReductionUndefined { p_modulus: pm });
    }
    let s = pt.s();
    let denom = 1.0 - p.norm_sqr();
    let beta = (0..n - 1).map(|j| (s[j] - s[n - 2 - j].conj() * p) / denom).collect();
    SymPoint::new(beta)
}

/// `s_j = β_j + conj(β_{n-j}) p` for `j = 1, ..., n-1`, with `p` appended.
pub fn reconstruct(beta: &SymPoint, p: Complex64) -> Result<SymPoint, PolydiscError> {
    let b = beta.coords();
    let m = b.len();
    let mut coords: Vec<Complex64> = (0..m).map(|j| b[j] + b[m - 1 - j].conj() * p).collect();
    coords.push(p);
    SymPoint::new(coords)
}

/// Largest `|s_j - β_j - conj(β_{n-j}) p|`, relative to `max(1, |s_j|)`.
pub fn reconstruction_residual(pt: &SymPoint, beta: &SymPoint) -> f64 {
    let (s, b, p) = (pt.s(), beta.coords(), pt.p());
    let m = b.len();
    (0..m)
        .map(|j| (s[j] - b[j] - b[m - 1 - j].conj() * p).norm() / s[j].norm().max(1.0))
        .fold(0.0, f64::max)
}
