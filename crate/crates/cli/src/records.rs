//! Point files.
//!
//! JSON-lines: one object per line,
//! `{"id":"a","n":2,"coords":[[s1_re,s1_im],[p_re,p_im]]}`.
//!
//! CSV: header `id,n,s1_re,s1_im,...,p_re,p_im`, then one row per point. All
//! rows of a CSV file share one dimension.

use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use symdisc::{Complex64, SymPoint};

use crate::OutputFormat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub id: String,
    pub n: usize,
    pub coords: Vec<[f64; 2]>,
}

impl PointRecord {
    pub fn from_point(id: impl Into<String>, pt: &SymPoint) -> Self {
        Self {
            id: id.into(),
            n: pt.dim(),
            coords: pt.coords().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_point(&self) -> Result<SymPoint> {
        if self.coords.len() != self.n {
            bail!(
                "record {}: n = {} but {} coordinates given",
                self.id,
                self.n,
                self.coords.len()
            );
        }
        let coords = self.coords.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        SymPoint::new(coords).with_context(|| format!("record {}", self.id))
    }
}

/// Column names for a CSV point file of dimension `n`.
pub fn csv_header(n: usize) -> Vec<String> {
    let mut cols = vec!["id".to_string(), "n".to_string()];
    for j in 1..n {
        cols.push(format!("s{j}_re"));
        cols.push(format!("s{j}_im"));
    }
    cols.push("p_re".into());
    cols.push("p_im".into());
    cols
}

pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<PointRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.with_context(|| format!("line {}", i + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PointRecord =
            serde_json::from_str(&line).with_context(|| format!("line {}: invalid point record", i + 1))?;
        rec.to_point().with_context(|| format!("line {}", i + 1))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_csv(reader: impl std::io::Read) -> Result<Vec<PointRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        // Line numbers count the header.
        let line = i + 2;
        let row = row.with_context(|| format!("line {line}"))?;
        let id = row.get(0).context("missing id")?.to_string();
        let n: usize = row
            .get(1)
            .context("missing n")?
            .trim()
            .parse()
            .with_context(|| format!("line {line}: invalid n"))?;
        if row.len() != 2 + 2 * n {
            bail!(
                "line {line}: expected {} columns for n = {n}, found {}",
                2 + 2 * n,
                row.len()
            );
        }
        let values: Vec<f64> = (2..row.len())
            .map(|k| row[k].trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("line {line}: invalid number"))?;
        let rec = PointRecord {
            id,
            n,
            coords: values.chunks(2).map(|c| [c[0], c[1]]).collect(),
        };
        rec.to_point().with_context(|| format!("line {line}"))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_points(out: &mut impl Write, records: &[PointRecord], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => {
            for rec in records {
                serde_json::to_writer(&mut *out, rec)?;
                out.write_all(b"\n")?;
            }
        }
        OutputFormat::Csv => {
            let Some(first) = records.first() else {
                return Ok(());
            };
            if let Some(bad) = records.iter().find(|r| r.n != first.n) {
                bail!(
                    "CSV point files need a single dimension: {} has n = {}, {} has n = {}",
                    first.id,
                    first.n,
                    bad.id,
                    bad.n
                );
            }
            let mut wtr = csv::Writer::from_writer(&mut *out);
            wtr.write_record(csv_header(first.n))?;
            for rec in records {
                let mut row = vec![rec.id.clone(), rec.n.to_string()];
                for [re, im] in &rec.coords {
                    row.push(re.to_string());
                    row.push(im.to_string());
                }
                wtr.write_record(&row)?;
            }
            wtr.flush()?;
        }
    }
    Ok(())
}
