use crate::numerics::{definiteness, Definiteness};
use crate::polynomial::{find_roots, PolyError, DEFAULT_MAX_ITERS};
use crate::schur::gn_matrix;

use super::{
    associated_polynomial, beta_reduce, Certificate, Method, PolydiscError, Region, RegionVerdict, SymPoint,
    ToleranceConfig,
};

/// Classifies a point from the zeros of its associated polynomial.
///
/// With `m` the largest zero modulus: `m < 1 - band` is interior,
/// `m > 1 + band` is outside, and anything in between is on the boundary of
/// the closed polydisc. A boundary point whose smallest zero modulus is also
/// at least `1 - band` is on the distinguished boundary.
pub fn classify_oracle(pt: &SymPoint, tol: &ToleranceConfig) -> Result<RegionVerdict, PolydiscError> {
    tol.validate()?;
    let set = find_roots(&associated_polynomial(pt), tol.root_residual, DEFAULT_MAX_ITERS)?;
    if !set.converged {
        return Err(PolyError::NotConverged {
            residual: set.residual,
            iterations: set.iterations,
        }
        .into());
    }
    let (max_modulus, min_modulus) = (set.max_modulus(), set.min_modulus());
    let band = tol.boundary_band;
    let region = if max_modulus < 1.0 - band {
        Region::InteriorGn
    } else if max_modulus > 1.0 + band {
        Region::Outside
    } else if min_modulus >= 1.0 - band {
        Region::DistinguishedBoundary
    } else {
        Region::BoundaryGamma
    };
    Ok(RegionVerdict {
        region,
        method: Method::Oracle,
        certificate: Certificate::Roots {
            max_modulus,
            min_modulus,
            roots: set.roots,
        },
        margin: Some(max_modulus - 1.0),
    })
}

/// Closed-polydisc membership by repeated β-reduction.
///
/// A point with `|p| > 1` is outside. A point with `|p| < 1` is a member
/// exactly when its β-reduction is a member one dimension down, and in
/// dimension one the test is `|p| <= 1`. When `|p|` falls within the
/// unimodular band the reduction is undefined; a member with `|p| = 1` has
/// all its zeros on the circle, so the root oracle settles that case exactly
/// and its verdict is attached to the chain.
///
/// Interior is reported only when every level, including the last, is
/// strictly inside; the same chain then certifies open-polydisc membership.
pub fn in_gamma_recursive(pt: &SymPoint, tol: &ToleranceConfig) -> Result<RegionVerdict, PolydiscError> {
    tol.validate()?;
    let mut chain = vec![pt.clone()];
    loop {
        let cur = chain.last().expect("chain is never empty");
        let top = chain.len() == 1;
        let pm = cur.p().norm();
        let margin = Some(pm - 1.0);

        if cur.dim() == 1 {
            let band = tol.boundary_band;
            let region = if pm < 1.0 - band {
                Region::InteriorGn
            } else if pm > 1.0 + band {
                Region::Outside
            } else if top {
                Region::DistinguishedBoundary
            } else {
                Region::BoundaryGamma
            };
            return Ok(chain_verdict(Method::GammaRecursive, region, chain, None, margin));
        }

        if pm > 1.0 + tol.p_unimodular_band {
            return Ok(chain_verdict(
                Method::GammaRecursive,
                Region::Outside,
                chain,
                None,
                margin,
            ));
        }
        if pm >= 1.0 - tol.p_unimodular_band {
            let oracle = classify_oracle(cur, tol)?;
            // Below the top level |p| was strictly inside, so the input cannot
            // be on the distinguished boundary even if the reduced point is.
            let region = match oracle.region {
                Region::DistinguishedBoundary if !top => Region::BoundaryGamma,
                r => r,
            };
            let margin = oracle.margin;
            return Ok(chain_verdict(
                Method::GammaRecursive,
                region,
                chain,
                Some(Box::new(oracle)),
                margin,
            ));
        }
        let next = beta_reduce(cur, tol)?;
        chain.push(next);
    }
}

/// Open-polydisc membership by repeated β-reduction with strict inequalities
/// at every level. Anything within a band is reported as
/// [`Region::ToleranceBand`]; [`Region::Outside`] is reported only when some
/// level is clearly outside the closed polydisc.
pub fn in_gn_recursive(pt: &SymPoint, tol: &ToleranceConfig) -> Result<RegionVerdict, PolydiscError> {
    tol.validate()?;
    let mut chain = vec![pt.clone()];
    loop {
        let cur = chain.last().expect("chain is never empty");
        let pm = cur.p().norm();
        let margin = Some(pm - 1.0);
        let band = if cur.dim() == 1 {
            tol.boundary_band
        } else {
            tol.p_unimodular_band
        };
        let region = if pm > 1.0 + band {
            Some(Region::Outside)
        } else if pm >= 1.0 - band {
            Some(Region::ToleranceBand)
        } else if cur.dim() == 1 {
            Some(Region::InteriorGn)
        } else {
            None
        };
        if let Some(region) = region {
            return Ok(chain_verdict(Method::GnRecursive, region, chain, None, margin));
        }
        let next = beta_reduce(cur, tol)?;
        chain.push(next);
    }
}

/// Open-polydisc membership from positive definiteness of [`gn_matrix`].
///
/// Only defined for `|p| < 1 - p_unimodular_band`; closer to the circle the
/// call fails with [`PolydiscError::SchurNotApplicable`].
pub fn in_gn_schur(pt: &SymPoint, tol: &ToleranceConfig) -> Result<RegionVerdict, PolydiscError> {
    tol.validate()?;
    let pm = pt.p().norm();
    if pm >= 1.0 - tol.p_unimodular_band {
        return Err(PolydiscError::SchurNotApplicable { p_modulus: pm });
    }
    let verdict = definiteness(&gn_matrix(pt)?, tol.matrix_tol)?;
    let region = match verdict.kind {
        Definiteness::PositiveDefinite => Region::InteriorGn,
        Definiteness::SemidefiniteBand => Region::ToleranceBand,
        Definiteness::Indefinite => Region::Outside,
    };
    Ok(RegionVerdict {
        region,
        method: Method::GnSchur,
        certificate: Certificate::MinPivot(verdict.min_pivot_or_eig),
        margin: Some(verdict.min_pivot_or_eig),
    })
}

fn chain_verdict(
    method: Method,
    region: Region,
    chain: Vec<SymPoint>,
    delegated: Option<Box<RegionVerdict>>,
    margin: Option<f64>,
) -> RegionVerdict {
    RegionVerdict {
        region,
        method,
        certificate: Certificate::BetaChain { chain, delegated },
        margin,
    }
}
