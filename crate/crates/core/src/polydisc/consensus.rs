use serde::{Deserialize, Serialize};

use super::{
    classify_oracle, in_gamma_recursive, in_gn_recursive, in_gn_schur, Certificate, Method, PolydiscError, Region,
    RegionVerdict, SymPoint, ToleranceConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MethodOutcome {
    Verdict(RegionVerdict),
    NotApplicable { method: Method, reason: String },
    Failed { method: Method, error: String },
}

impl MethodOutcome {
    pub fn method(&self) -> Method {
        match self {
            MethodOutcome::Verdict(v) => v.method,
            MethodOutcome::NotApplicable { method, .. } | MethodOutcome::Failed { method, .. } => *method,
        }
    }

    pub fn region(&self) -> Option<Region> {
        match self {
            MethodOutcome::Verdict(v) => Some(v.region),
            _ => None,
        }
    }
}

/// Verdicts of every method, in the fixed order oracle, Γ recursion,
/// 𝔾 recursion, Schur.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusReport {
    pub outcomes: Vec<MethodOutcome>,
    /// The common region when the methods agree up to tolerance bands.
    pub agreed: Option<Region>,
    pub unanimous: bool,
    /// Some pair of decisive verdicts differs.
    pub disagreement: bool,
    /// Some method reports interior while another reports outside. Boundary
    /// verdicts are within a band of both and never count as anomalies.
    pub anomaly: bool,
}

impl ConsensusReport {
    pub fn outcome(&self, method: Method) -> Option<&MethodOutcome> {
        self.outcomes.iter().find(|o| o.method() == method)
    }

    /// Largest zero modulus reported by the oracle, if it succeeded.
    pub fn max_root_modulus(&self) -> Option<f64> {
        match self.outcome(Method::Oracle) {
            Some(MethodOutcome::Verdict(RegionVerdict {
                certificate: Certificate::Roots { max_modulus, .. },
                ..
            })) => Some(*max_modulus),
            _ => None,
        }
    }
}

/// Runs every membership method on `pt` and compares the answers.
///
/// A failure in one method is recorded in its outcome and does not stop the
/// others. The Schur test is skipped when `|p|` is within the unimodular band.
pub fn classify_consensus(pt: &SymPoint, tol: &ToleranceConfig) -> ConsensusReport {
    let run =
        |method: Method, f: fn(&SymPoint, &ToleranceConfig) -> Result<RegionVerdict, PolydiscError>| match f(pt, tol) {
            Ok(v) => MethodOutcome::Verdict(v),
            Err(e @ PolydiscError::SchurNotApplicable { .. }) => MethodOutcome::NotApplicable {
                method,
                reason: e.to_string(),
            },
            Err(e) => MethodOutcome::Failed {
                method,
                error: e.to_string(),
            },
        };
    let outcomes = vec![
        run(Method::Oracle, classify_oracle),
        run(Method::GammaRecursive, in_gamma_recursive),
        run(Method::GnRecursive, in_gn_recursive),
        run(Method::GnSchur, in_gn_schur),
    ];
    summarize(outcomes)
}

fn summarize(outcomes: Vec<MethodOutcome>) -> ConsensusReport {
    let regions: Vec<Region> = outcomes.iter().filter_map(MethodOutcome::region).collect();
    let decisive: Vec<Region> = regions
        .iter()
        .copied()
        .filter(|r| *r != Region::ToleranceBand)
        .collect();
    let has = |r: Region| decisive.contains(&r);
    let anomaly = has(Region::InteriorGn) && has(Region::Outside);

    let boundary_like = |r: &Region| matches!(r, Region::BoundaryGamma | Region::DistinguishedBoundary);
    let agreed = if decisive.is_empty() {
        (!regions.is_empty()).then_some(Region::ToleranceBand)
    } else if decisive.iter().all(|r| *r == decisive[0]) {
        Some(decisive[0])
    } else if decisive.iter().all(boundary_like) {
        let oracle = outcomes
            .iter()
            .find(|o| o.method() == Method::Oracle)
            .and_then(MethodOutcome::region)
            .filter(boundary_like);
        Some(oracle.unwrap_or(Region::BoundaryGamma))
    } else {
        None
    };
    let disagreement = !decisive.is_empty() && agreed.is_none();
    ConsensusReport {
        unanimous: agreed.is_some() && regions.len() == outcomes.len(),
        outcomes,
        agreed,
        disagreement,
        anomaly,
    }
}
