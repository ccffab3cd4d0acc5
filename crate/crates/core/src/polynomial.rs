//! Monic complex polynomials, Vieta coefficients and an Aberth-Ehrlich root
//! finder used as the independent membership oracle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{check_finite, NumericsError};

/// Largest degree handled anywhere in the crate.
pub const MAX_DEGREE: usize = 16;

/// Iteration cap used when callers do not supply one.
pub const DEFAULT_MAX_ITERS: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("at least one point or coefficient is required")]
    Empty,
    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("residual bound must be finite and strictly positive, got {0}")]
    InvalidBound(f64),
    #[error("root finder did not converge (scaled residual {residual:e} after {iterations} iterations)")]
    NotConverged { residual: f64, iterations: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `z^n + a_1 z^{n-1} + ... + a_n`, carried by `[a_1, ..., a_n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        if coeffs.len() > MAX_DEGREE {
            return Err(PolyError::DegreeTooLarge(coeffs.len()));
        }
        check_finite("polynomial coefficients", &coeffs)?;
        Ok(Self { coeffs })
    }

    /// The monic polynomial `(z - r_1) ... (z - r_n)`.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self, PolyError> {
        let e = elementary_symmetric(roots)?;
        let coeffs = e
            .into_iter()
            .enumerate()
            .map(|(i, ej)| if i % 2 == 0 { -ej } else { ej })
            .collect();
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Non-leading coefficients `[a_1, ..., a_n]`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Value, derivative and the scale `Σ |a_k| max(1, |z|)^{n-k}` in one pass.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let r = z.norm().max(1.0);
        let mut scale = 1.0;
        for &a in &self.coeffs {
            dp = dp * z + p;
            p = p * z + a;
            scale = scale * r + a.norm();
        }
        (p, dp, scale)
    }

    /// `|p(z)|` divided by `Σ |a_k| max(1, |z|)^{n-k}` (with `a_0 = 1`).
    ///
    /// This is the normwise backward error of `z` as a root and stays
    /// meaningful at multiple roots of zero, where the plain relative
    /// residual `|p(z)| / Σ |a_k| |z|^{n-k}` is identically one.
    pub fn scaled_residual(&self, z: Complex64) -> f64 {
        let (p, _, scale) = self.eval_with_derivative(z);
        p.norm() / scale
    }

    /// Coefficients of the `order`-th derivative, leading coefficient first
    /// (not monic in general).
    fn derivative_coeffs(&self, order: usize) -> Vec<Complex64> {
        let n = self.degree();
        let mut full: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
            .chain(self.coeffs.iter().copied())
            .collect();
        for _ in 0..order {
            let deg = full.len() - 1;
            full = full
                .iter()
                .take(deg)
                .enumerate()
                .map(|(i, &c)| c * (deg - i) as f64)
                .collect();
        }
        debug_assert_eq!(full.len(), n + 1 - order.min(n));
        full
    }
}

/// `(e_1, ..., e_n)` of the given points, built by multiplying out
/// `(1 + z_1 t) ... (1 + z_n t)` one factor at a time.
pub fn elementary_symmetric(points: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
    if points.is_empty() {
        return Err(PolyError::Empty);
    }
    if points.len() > MAX_DEGREE {
        return Err(PolyError::DegreeTooLarge(points.len()));
    }
    check_finite("points", points)?;
    let n = points.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (m, &z) in points.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            let prev = e[k - 1];
            e[k] += z * prev;
        }
    }
    e.remove(0);
    Ok(e)
}

/// Roots returned by [`find_roots`].
///
/// `residual` is the largest [`MonicPoly::scaled_residual`] over the roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl RootSet {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// All roots of `poly` by simultaneous Aberth-Ehrlich iteration.
///
/// Initial guesses sit on a circle whose radius is derived from the
/// coefficients, with a fixed angular offset so runs are reproducible. If the
/// first attempt does not reach `residual_bound`, a second attempt starts
/// from half the radius and a different offset. Clusters of nearly equal
/// roots that are consistent with a multiple root are replaced by the
/// multiple root, located as a simple zero of the appropriate derivative.
pub fn find_roots(poly: &MonicPoly, residual_bound: f64, max_iters: usize) -> Result<RootSet, PolyError> {
    if !(residual_bound.is_finite() && residual_bound > 0.0) {
        return Err(PolyError::InvalidBound(residual_bound));
    }
    let n = poly.degree();
    let radius = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm().powf(1.0 / (k + 1) as f64))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return Ok(RootSet {
            roots: vec![Complex64::new(0.0, 0.0); n],
            residual: 0.0,
            converged: true,
            iterations: 0,
        });
    }

    let first = aberth(poly, initial_guesses(n, radius, 0.4), residual_bound, max_iters);
    if first.converged {
        return Ok(first);
    }
    let second = aberth(poly, initial_guesses(n, 0.5 * radius, 1.1), residual_bound, max_iters);
    Ok(if second.converged || second.residual < first.residual {
        second
    } else {
        first
    })
}

/// Largest root modulus; non-convergence is an error here.
pub fn max_root_modulus(poly: &MonicPoly, residual_bound: f64) -> Result<f64, PolyError> {
    let set = find_roots(poly, residual_bound, DEFAULT_MAX_ITERS)?;
    if !set.converged {
        return Err(PolyError::NotConverged {
            residual: set.residual,
            iterations: set.iterations,
        });
    }
    Ok(set.max_modulus())
}

fn initial_guesses(n: usize, radius: f64, offset: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, offset + TAU * k as f64 / n as f64))
        .collect()
}

fn aberth(poly: &MonicPoly, mut z: Vec<Complex64>, residual_bound: f64, max_iters: usize) -> RootSet {
    let n = z.len();
    let floor = 4.0 * n as f64 * f64::EPSILON;
    let mut done = vec![false; n];
    let mut iterations = 0;

    'outer: while iterations < max_iters && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = poly.eval_with_derivative(z[i]);
            if p.norm() <= floor * scale {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = if dp.norm() == 0.0 {
                // Stationary point: nudge off it instead of dividing by zero.
                Complex64::from_polar(scale.sqrt() * 1e-3 + 1e-3, i as f64)
            } else {
                let newton = p / dp;
                newton / (Complex64::new(1.0, 0.0) - newton * repulsion)
            };
            if !(step.re.is_finite() && step.im.is_finite()) {
                break 'outer;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }

    merge_clusters(poly, &mut z);
    let residual =
        z.iter()
            .map(|&r| poly.scaled_residual(r))
            .fold(0.0, |m: f64, r| if r.is_nan() { f64::INFINITY } else { m.max(r) });
    RootSet {
        converged: residual <= residual_bound,
        roots: z,
        residual,
        iterations,
    }
}

/// Single-linkage clusters at relative distance 1e-4; each cluster of `m`
/// roots is replaced by the zero of `p^{(m-1)}` near its mean when that point
/// is itself a root of `p` to working precision.
fn merge_clusters(poly: &MonicPoly, z: &mut [Complex64]) {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            let scale = z[i].norm().max(z[j].norm()).max(1.0);
            if (z[i] - z[j]).norm() <= 1e-4 * scale {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
                }
            }
        }
    }
    let floor = 64.0 * n as f64 * f64::EPSILON;
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| label[i] == root).collect();
        let m = members.len();
        if m < 2 {
            continue;
        }
        let mean = members.iter().map(|&i| z[i]).sum::<Complex64>() / m as f64;
        let spread = members.iter().map(|&i| (z[i] - mean).norm()).fold(0.0, f64::max);
        let deriv = poly.derivative_coeffs(m - 1);
        let mut c = mean;
        for _ in 0..20 {
            let (q, dq) = horner_with_derivative(&deriv, c);
            if dq.norm() == 0.0 {
                break;
            }
            let step = q / dq;
            c -= step;
            if step.norm() <= f64::EPSILON * c.norm().max(1.0) {
                break;
            }
        }
        if (c - mean).norm() <= spread.max(f64::EPSILON) && poly.scaled_residual(c) <= floor {
            for &i in &members {
                z[i] = c;
            }
        }
    }
}

fn horner_with_derivative(full: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in full {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}
