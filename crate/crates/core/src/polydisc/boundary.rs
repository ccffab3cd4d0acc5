//! Distinguished boundary, the necessary coefficient bounds and the
//! preimage product criterion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::polynomial::{elementary_symmetric, find_roots, PolyError, DEFAULT_MAX_ITERS};

use super::{
    associated_polynomial, binomial_f64, reconstruction_residual, symmetrize, PolydiscError, PreimagePoint, Region,
    SymPoint, ToleranceConfig,
};

/// Evidence that `s_j = β_j + conj(β_{n-j}) p` is solvable when `|p| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaConsistency {
    /// Minimum-norm least-squares solution of the real 2(n-1) × 2(n-1) system.
    pub least_squares_beta: Vec<Complex64>,
    pub least_squares_residual: f64,
    /// `π_{n-1}` of all zeros but the last, which solves the system exactly
    /// when every zero is unimodular and is itself on the distinguished
    /// boundary one dimension down.
    pub root_beta: Option<Vec<Complex64>>,
    pub root_beta_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVerdict {
    pub on_boundary: bool,
    /// `max ||r| - 1|` over the zeros of the associated polynomial.
    pub max_deviation: f64,
    pub roots: Vec<Complex64>,
    pub beta_check: Option<BetaConsistency>,
}

/// Tests whether the point is `π_n` of a point of the torus, i.e. whether all
/// zeros of its associated polynomial are unimodular.
pub fn on_distinguished_boundary(pt: &SymPoint, tol: &ToleranceConfig) -> Result<BoundaryVerdict, PolydiscError> {
    tol.validate()?;
    let set = find_roots(&associated_polynomial(pt), tol.root_residual, DEFAULT_MAX_ITERS)?;
    if !set.converged {
        return Err(PolyError::NotConverged {
            residual: set.residual,
            iterations: set.iterations,
        }
        .into());
    }
    let max_deviation = set.roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let on_boundary = max_deviation <= tol.boundary_band;

    let n = pt.dim();
    let beta_check = if n >= 2 && (pt.p().norm() - 1.0).abs() <= tol.p_unimodular_band {
        let (least_squares_beta, least_squares_residual) = least_squares_beta(pt);
        let (root_beta, root_beta_residual) = if on_boundary {
            let beta = SymPoint::new(elementary_symmetric(&set.roots[..n - 1])?)?;
            let residual = reconstruction_residual(pt, &beta);
            (Some(beta.coords().to_vec()), Some(residual))
        } else {
            (None, None)
        };
        Some(BetaConsistency {
            least_squares_beta,
            least_squares_residual,
            root_beta,
            root_beta_residual,
        })
    } else {
        None
    };

    Ok(BoundaryVerdict {
        on_boundary,
        max_deviation,
        roots: set.roots,
        beta_check,
    })
}

/// Real least-squares solve of `β_j + conj(β_{m-1-j}) p = s_j`, written in
/// the unknowns `(Re β_j, Im β_j)`. The system is singular when `|p| = 1`.
fn least_squares_beta(pt: &SymPoint) -> (Vec<Complex64>, f64) {
    let s = pt.s();
    let m = s.len();
    let (a, b) = (pt.p().re, pt.p().im);
    let mut mat = DMatrix::<f64>::zeros(2 * m, 2 * m);
    let mut rhs = DVector::<f64>::zeros(2 * m);
    for j in 0..m {
        let k = m - 1 - j;
        let (re, im) = (2 * j, 2 * j + 1);
        mat[(re, 2 * j)] += 1.0;
        mat[(im, 2 * j + 1)] += 1.0;
        mat[(re, 2 * k)] += a;
        mat[(re, 2 * k + 1)] += b;
        mat[(im, 2 * k)] += b;
        mat[(im, 2 * k + 1)] -= a;
        rhs[re] = s[j].re;
        rhs[im] = s[j].im;
    }
    // The real matrix is symmetric, so a pseudo-inverse from its eigenpairs
    // gives the minimum-norm least-squares solution.
    let eig = mat.clone().symmetric_eigen();
    let mut x = DVector::<f64>::zeros(2 * m);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > 1e-12 {
            let v = eig.eigenvectors.column(i);
            x += v * (v.dot(&rhs) / lambda);
        }
    }
    let residual = (&mat * &x - &rhs).amax();
    let beta = (0..m).map(|j| Complex64::new(x[2 * j], x[2 * j + 1])).collect();
    (beta, residual)
}

/// `|s_j| < C(n, j)` for every `j` and `|p| < 1`, which every point of the
/// open polydisc satisfies.
pub fn necessary_bounds(pt: &SymPoint) -> bool {
    let n = pt.dim();
    pt.s()
        .iter()
        .enumerate()
        .all(|(i, s)| s.norm() < binomial_f64(n, i + 1))
        && pt.p().norm() < 1.0
}

/// `|z_a + z_b| < 2` and `|z_a z_b| < 1` for every pair `a < b`: the
/// two-element subsets of the preimage symmetrize into the open bidisc
/// bounds.
pub fn pairwise_bounds(z: &PreimagePoint) -> bool {
    let z = &z.z;
    (0..z.len()).all(|a| (a + 1..z.len()).all(|b| (z[a] + z[b]).norm() < 2.0 && (z[a] * z[b]).norm() < 1.0))
}

/// Sign and log-magnitude of `Π (1 - |z_j|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelVerdict {
    pub sign: i8,
    pub log_abs_product: f64,
    /// Some factor is within the boundary band of zero.
    pub in_band: bool,
}

impl KernelVerdict {
    /// The product is positive and no factor is within the band.
    pub fn holds(&self) -> bool {
        self.sign > 0 && !self.in_band
    }

    pub fn region(&self) -> Region {
        if self.in_band {
            Region::ToleranceBand
        } else if self.sign > 0 {
            Region::InteriorGn
        } else {
            Region::Outside
        }
    }
}

/// Decides open-polydisc membership of `π_n(z)` from `Π (1 - |z_j|^2) > 0`.
///
/// Only valid under the coefficient bounds of [`necessary_bounds`] on
/// `π_n(z)` and the pairwise bounds of [`pairwise_bounds`]; those bounds
/// leave at most one `|z_j| > 1`, which is what makes the sign of the product
/// decisive. Failing either is an error, not a negative verdict.
pub fn kernel_criterion(z: &PreimagePoint, tol: &ToleranceConfig) -> Result<KernelVerdict, PolydiscError> {
    tol.validate()?;
    let w = symmetrize(z)?;
    if !necessary_bounds(&w) {
        return Err(PolydiscError::HypothesisViolated(
            "symmetrized point violates |w_j| < C(n, j)".into(),
        ));
    }
    if !pairwise_bounds(z) {
        return Err(PolydiscError::HypothesisViolated(
            "some pair violates |z_a + z_b| < 2 or |z_a z_b| < 1".into(),
        ));
    }
    let mut sign = 1i8;
    let mut log_abs_product = 0.0;
    let mut in_band = false;
    for zj in &z.z {
        let factor = 1.0 - zj.norm_sqr();
        if factor.abs() <= 2.0 * tol.boundary_band {
            in_band = true;
        }
        if factor == 0.0 {
            sign = 0;
        } else if factor < 0.0 {
            sign = -sign;
        }
        log_abs_product += factor.abs().ln();
    }
    Ok(KernelVerdict {
        sign,
        log_abs_product,
        in_band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn pre(z: &[Complex64]) -> PreimagePoint {
        PreimagePoint::new(z.to_vec()).unwrap()
    }

    #[test]
    fn distinguished_boundary_examples() {
        let cube = SymPoint::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let v = on_distinguished_boundary(&cube, &tol()).unwrap();
        assert!(v.on_boundary);
        let check = v.beta_check.unwrap();
        assert!(check.least_squares_residual < 1e-12);
        assert!(check.root_beta_residual.unwrap() < 1e-12);

        let double = SymPoint::new(vec![c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(on_distinguished_boundary(&double, &tol()).unwrap().on_boundary);

        let inner = SymPoint::new(vec![c(0.0, 0.0), c(0.25, 0.0)]).unwrap();
        let v = on_distinguished_boundary(&inner, &tol()).unwrap();
        assert!(!v.on_boundary);
        assert!(v.beta_check.is_none());
    }

    #[test]
    fn inconsistent_system_has_positive_residual() {
        // |p| = 1 but s is not of the form β + conj(β) p: (s, p) = (i, 1)
        // needs β + conj(β) = i, which has no solution.
        let pt = SymPoint::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let v = on_distinguished_boundary(&pt, &tol()).unwrap();
        assert!(!v.on_boundary);
        let check = v.beta_check.unwrap();
        assert!(check.least_squares_residual > 0.5);
    }

    #[test]
    fn torus_point_beta_is_on_lower_torus() {
        let z: Vec<Complex64> = [0.3, 1.7, 4.0, 5.1]
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        let pt = symmetrize(&pre(&z)).unwrap();
        let v = on_distinguished_boundary(&pt, &tol()).unwrap();
        assert!(v.on_boundary);
        let check = v.beta_check.unwrap();
        assert!(check.least_squares_residual < 1e-10);
        let beta = SymPoint::new(check.root_beta.unwrap()).unwrap();
        assert!(on_distinguished_boundary(&beta, &tol()).unwrap().on_boundary);
    }

    #[test]
    fn least_squares_on_bidisc_torus() {
        for i in 0..200 {
            let t = TAU * i as f64 / 200.0;
            let z = [Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, 2.9 * t + 0.4)];
            let v = on_distinguished_boundary(&symmetrize(&pre(&z)).unwrap(), &tol()).unwrap();
            assert!(v.beta_check.unwrap().least_squares_residual < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn necessary_bounds_examples() {
        assert!(necessary_bounds(&SymPoint::new(vec![c(0.0, 0.0); 5]).unwrap()));
        assert!(!necessary_bounds(
            &SymPoint::new(vec![c(3.0, 0.0), c(0.5, 0.0)]).unwrap()
        ));
        let mut coords = vec![c(0.0, 0.0); 4];
        coords[0] = c(0.0, 4.1);
        assert!(!necessary_bounds(&SymPoint::new(coords).unwrap()));
    }

    #[test]
    fn pairwise_bounds_examples() {
        assert!(pairwise_bounds(&pre(&[c(0.5, 0.0), c(0.0, 0.5)])));
        assert!(!pairwise_bounds(&pre(&[c(1.2, 0.0), c(1.1, 0.0)])));
        assert!(!pairwise_bounds(&pre(&[c(1.5, 0.0), c(-1.5, 0.0)])));
        assert!(pairwise_bounds(&pre(&[c(0.9, 0.0)])));
    }

    #[test]
    fn kernel_examples() {
        let v = kernel_criterion(&pre(&[c(0.5, 0.0), c(0.5, 0.0)]), &tol()).unwrap();
        assert!(v.holds());
        let v = kernel_criterion(&pre(&[c(0.5, 0.0); 3]), &tol()).unwrap();
        assert!(v.holds());
        assert!((v.log_abs_product - 3.0 * 0.75f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn kernel_one_coordinate_outside() {
        // |w_j| bounds: s = 1.1 + 0.1 = 1.2 < 2, p = 0.11 < 1; pair bounds hold.
        let z = pre(&[c(1.1, 0.0), c(0.1, 0.0)]);
        let v = kernel_criterion(&z, &tol()).unwrap();
        assert!(!v.holds());
        assert_eq!(v.region(), Region::Outside);
    }

    #[test]
    fn kernel_hypothesis_errors() {
        assert!(matches!(
            kernel_criterion(&pre(&[c(1.5, 0.0), c(1.5, 0.0)]), &tol()),
            Err(PolydiscError::HypothesisViolated(_))
        ));
        // |z_1 z_2| > 1 although every |w_j| < C(3, j).
        let z = pre(&[c(1.05, 0.0), c(0.96, 0.0), c(-0.9, 0.0)]);
        assert!(!pairwise_bounds(&z) || !necessary_bounds(&symmetrize(&z).unwrap()));
        assert!(kernel_criterion(&z, &tol()).is_err());
    }

    #[test]
    fn kernel_band() {
        let v = kernel_criterion(&pre(&[c(1.0, 0.0), c(0.1, 0.0)]), &tol()).unwrap();
        assert!(v.in_band);
        assert_eq!(v.sign, 0);
        assert_eq!(v.region(), Region::ToleranceBand);
    }
}
