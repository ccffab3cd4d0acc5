//! Subcommand bodies. Each writes to the given sink so the binary and the
//! tests share one code path.

use std::io::Write;
use std::time::Instant;

use anyhow::{ensure, Result};
use rayon::prelude::*;
use serde::Serialize;
use symdisc::polydisc::{beta_reduce, reconstruction_residual, Method, MethodOutcome};
use symdisc::{
    classify_consensus, classify_oracle, in_gamma_recursive, in_gn_schur, Complex64, ConsensusReport, PolydiscError,
    Region, RegionVerdict, SymPoint, ToleranceConfig,
};

use crate::grid::{rasterize, write_csv, write_pgm, GridSpec};
use crate::records::{write_points, PointRecord};
use crate::sample::{SampleKind, Sampler};
use crate::{OutputFormat, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassifySummary {
    pub points: usize,
    pub anomalies: usize,
    pub disagreements: usize,
}

#[derive(Serialize)]
struct ClassifyLine<'a> {
    id: &'a str,
    n: usize,
    #[serde(flatten)]
    report: &'a ConsensusReport,
    max_root_modulus: Option<f64>,
}

const METHODS: [Method; 4] = [
    Method::Oracle,
    Method::GammaRecursive,
    Method::GnRecursive,
    Method::GnSchur,
];

fn outcome_label(report: &ConsensusReport, method: Method) -> &'static str {
    match report.outcome(method) {
        Some(MethodOutcome::Verdict(v)) => v.region.as_str(),
        Some(MethodOutcome::NotApplicable { .. }) => "not_applicable",
        Some(MethodOutcome::Failed { .. }) | None => "error",
    }
}

/// One consensus report per record, in input order.
pub fn classify(records: &[PointRecord], config: &RunConfig, out: &mut impl Write) -> Result<ClassifySummary> {
    let points: Vec<SymPoint> = records.iter().map(PointRecord::to_point).collect::<Result<_>>()?;
    let tol = config.tolerances;
    tol.validate()?;
    let reports: Vec<ConsensusReport> =
        config.install(|| points.par_iter().map(|pt| classify_consensus(pt, &tol)).collect())?;

    let mut summary = ClassifySummary {
        points: reports.len(),
        ..Default::default()
    };
    let mut csv = (config.output_format == OutputFormat::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv.as_mut() {
        let mut header = vec![
            "id",
            "n",
            "agreed",
            "unanimous",
            "disagreement",
            "anomaly",
            "max_root_modulus",
        ];
        header.extend(METHODS.iter().map(|m| m.as_str()));
        w.write_record(&header)?;
    }
    for (rec, report) in records.iter().zip(&reports) {
        summary.anomalies += report.anomaly as usize;
        summary.disagreements += report.disagreement as usize;
        match csv.as_mut() {
            None => {
                let line = ClassifyLine {
                    id: &rec.id,
                    n: rec.n,
                    report,
                    max_root_modulus: report.max_root_modulus(),
                };
                serde_json::to_writer(&mut *out, &line)?;
                out.write_all(b"\n")?;
            }
            Some(w) => {
                let mut row = vec![
                    rec.id.clone(),
                    rec.n.to_string(),
                    report.agreed.map_or("none", Region::as_str).to_string(),
                    report.unanimous.to_string(),
                    report.disagreement.to_string(),
                    report.anomaly.to_string(),
                    report.max_root_modulus().map_or(String::new(), |m| m.to_string()),
                ];
                row.extend(METHODS.iter().map(|&m| outcome_label(report, m).to_string()));
                w.write_record(&row)?;
            }
        }
    }
    if let Some(w) = csv {
        out.write_all(&w.into_inner()?)?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionStep {
    pub dim: usize,
    pub coords: Vec<Complex64>,
    /// Reconstruction residual of the previous point from this one; absent
    /// for the input itself.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionChain {
    pub id: String,
    pub n: usize,
    pub steps: Vec<ReductionStep>,
    /// Why the chain ended before dimension one.
    pub stop: Option<String>,
}

/// β-chain from dimension `n` down to one, or down to the first point whose
/// `|p|` is not below `1 - p_unimodular_band`.
pub fn reduction_chain(id: &str, pt: &SymPoint, tol: &ToleranceConfig) -> ReductionChain {
    let mut steps = vec![ReductionStep {
        dim: pt.dim(),
        coords: pt.coords().to_vec(),
        residual: None,
    }];
    let mut cur = pt.clone();
    let mut stop = None;
    while cur.dim() > 1 {
        match beta_reduce(&cur, tol) {
            Ok(beta) => {
                steps.push(ReductionStep {
                    dim: beta.dim(),
                    coords: beta.coords().to_vec(),
                    residual: Some(reconstruction_residual(&cur, &beta)),
                });
                cur = beta;
            }
            Err(PolydiscError::ReductionUndefined { p_modulus }) => {
                stop = Some(format!(
                    "band stop at step {}: |p| = {p_modulus} is not below 1 - {}",
                    steps.len(),
                    tol.p_unimodular_band
                ));
                break;
            }
            Err(e) => {
                stop = Some(e.to_string());
                break;
            }
        }
    }
    ReductionChain {
        id: id.to_string(),
        n: pt.dim(),
        steps,
        stop,
    }
}

pub fn reduce(records: &[PointRecord], config: &RunConfig, out: &mut impl Write) -> Result<()> {
    let tol = config.tolerances;
    tol.validate()?;
    let chains: Vec<ReductionChain> = records
        .iter()
        .map(|rec| Ok(reduction_chain(&rec.id, &rec.to_point()?, &tol)))
        .collect::<Result<_>>()?;
    match config.output_format {
        OutputFormat::Json => {
            for chain in &chains {
                serde_json::to_writer(&mut *out, chain)?;
                out.write_all(b"\n")?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["id", "step", "dim", "residual", "coords", "stop"])?;
            for chain in &chains {
                for (i, step) in chain.steps.iter().enumerate() {
                    let coords: Vec<String> = step.coords.iter().map(|c| format!("{} {}", c.re, c.im)).collect();
                    let last = i + 1 == chain.steps.len();
                    w.write_record([
                        chain.id.clone(),
                        i.to_string(),
                        step.dim.to_string(),
                        step.residual.map_or(String::new(), |r| r.to_string()),
                        coords.join(";"),
                        if last {
                            chain.stop.clone().unwrap_or_default()
                        } else {
                            String::new()
                        },
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes the CSV code matrix to `out` and, if requested, a P5 image to
/// `pgm`. Returns the number of cells whose evaluation failed.
pub fn grid(spec: &GridSpec, config: &RunConfig, out: &mut impl Write, pgm: Option<&mut dyn Write>) -> Result<usize> {
    let tol = config.tolerances;
    tol.validate()?;
    let (cells, failures) = config.install(|| rasterize(spec, &tol))??;
    write_csv(out, &cells)?;
    if let Some(mut img) = pgm {
        write_pgm(&mut img, &cells)?;
    }
    Ok(failures)
}

pub fn sample_records(kind: SampleKind, n: usize, count: usize, seed: u64) -> Result<Vec<PointRecord>> {
    ensure!(count >= 1, "count must be at least 1");
    ensure!(
        (1..=symdisc::polynomial::MAX_DEGREE).contains(&n),
        "n must be between 1 and 16"
    );
    let mut sampler = Sampler::new(seed);
    Ok((0..count)
        .map(|i| PointRecord::from_point(format!("{}-{i}", kind.as_str()), &sampler.point(kind, n)))
        .collect())
}

pub fn sample(kind: SampleKind, n: usize, count: usize, config: &RunConfig, out: &mut impl Write) -> Result<()> {
    let records = sample_records(kind, n, count, config.seed)?;
    write_points(out, &records, config.output_format)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub method: &'static str,
    pub count: usize,
    pub median_ns: f64,
}

/// Median wall time per classification for the recursive, Schur and oracle
/// methods on interior samples. Timings are informational.
pub fn bench(n_range: std::ops::RangeInclusive<usize>, count: usize, config: &RunConfig) -> Result<Vec<BenchRow>> {
    ensure!(!n_range.is_empty(), "empty n range");
    ensure!(
        *n_range.start() >= 1 && *n_range.end() <= 16,
        "n range must lie within 1..=16"
    );
    ensure!(count >= 1, "count must be at least 1");
    let tol = config.tolerances;
    tol.validate()?;
    type Classifier = fn(&SymPoint, &ToleranceConfig) -> Result<RegionVerdict, PolydiscError>;
    let methods: [(&'static str, Classifier); 3] = [
        ("recursive", in_gamma_recursive),
        ("schur", in_gn_schur),
        ("oracle", classify_oracle),
    ];
    let mut rows = Vec::new();
    for n in n_range {
        let points: Vec<SymPoint> = {
            let mut s = Sampler::new(config.seed);
            (0..count).map(|_| s.point(SampleKind::Interior, n)).collect()
        };
        for (name, f) in methods {
            let mut times: Vec<f64> = points
                .iter()
                .map(|pt| {
                    let start = Instant::now();
                    let r = f(pt, &tol);
                    let elapsed = start.elapsed().as_nanos() as f64;
                    std::hint::black_box(r.is_ok());
                    elapsed
                })
                .collect();
            times.sort_by(f64::total_cmp);
            let median_ns = if count % 2 == 1 {
                times[count / 2]
            } else {
                0.5 * (times[count / 2 - 1] + times[count / 2])
            };
            rows.push(BenchRow {
                n,
                method: name,
                count,
                median_ns,
            });
        }
    }
    Ok(rows)
}

pub fn write_bench(rows: &[BenchRow], format: OutputFormat, out: &mut impl Write) -> Result<()> {
    match format {
        OutputFormat::Json => {
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                out.write_all(b"\n")?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses `a-b`, `a..b`, `a..=b` or a single `a` into an inclusive range.
pub fn parse_n_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let s = s.trim();
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    Ok(a.trim().parse()?..=b.trim().parse()?)
}
