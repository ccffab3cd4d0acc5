use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use symdisc::ToleranceConfig;
use symdisc_cli::commands;
use symdisc_cli::config::DEFAULT_SEED;
use symdisc_cli::grid::{Axis, GridSpec};
use symdisc_cli::records::{read_csv, read_jsonl, PointRecord};
use symdisc_cli::sample::SampleKind;
use symdisc_cli::{OutputFormat, RunConfig};

/// Membership tests for the symmetrized polydisc.
#[derive(Parser)]
#[command(name = "symdisc", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "SYMDISC_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true, env = "SYMDISC_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, env = "SYMDISC_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, global = true, env = "SYMDISC_BOUNDARY_BAND")]
    boundary_band: Option<f64>,
    #[arg(long, global = true, env = "SYMDISC_MATRIX_TOL")]
    matrix_tol: Option<f64>,
    #[arg(long, global = true, env = "SYMDISC_ROOT_RESIDUAL")]
    root_residual: Option<f64>,
    #[arg(long, global = true, env = "SYMDISC_P_BAND")]
    p_band: Option<f64>,
}

impl Global {
    fn config(&self) -> Result<RunConfig> {
        let mut tol = ToleranceConfig::default();
        if let Some(v) = self.boundary_band {
            tol.boundary_band = v;
        }
        if let Some(v) = self.matrix_tol {
            tol.matrix_tol = v;
        }
        if let Some(v) = self.root_residual {
            tol.root_residual = v;
        }
        if let Some(v) = self.p_band {
            tol.p_unimodular_band = v;
        }
        tol.validate()?;
        Ok(RunConfig {
            tolerances: tol,
            seed: self.seed,
            parallelism: self.jobs,
            output_format: self.format,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify every point of a file with all methods.
    Classify {
        /// Point file; `.csv` is read as CSV, anything else as JSON-lines, `-` is stdin.
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the reduction chain of every point.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rasterize a two-dimensional slice.
    Grid {
        #[arg(long, required_unless_present = "spec")]
        n: Option<usize>,
        /// `selector:min:max:steps`, e.g. `s1.re:-3:3:601`.
        #[arg(long, required_unless_present = "spec")]
        x: Option<Axis>,
        #[arg(long, required_unless_present = "spec")]
        y: Option<Axis>,
        /// Base point as comma-separated `re,im` pairs; zeros if omitted.
        #[arg(long)]
        fixed: Option<String>,
        /// JSON grid specification, used instead of the flags above.
        #[arg(long, conflicts_with_all = ["n", "x", "y", "fixed"])]
        spec: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Generate a seeded point corpus.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Median timing per method over a range of dimensions.
    Bench {
        /// Inclusive range such as `2-8`.
        #[arg(long, default_value = "2-8")]
        n: String,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_points(path: &Path) -> Result<Vec<PointRecord>> {
    if path == Path::new("-") {
        return read_jsonl(io::stdin().lock());
    }
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let records = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv(BufReader::new(file))
    } else {
        read_jsonl(BufReader::new(file))
    };
    records.with_context(|| format!("reading {}", path.display()))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_fixed(s: &str, n: usize) -> Result<Vec<[f64; 2]>> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .context("--fixed must be comma-separated numbers")?;
    if values.len() != 2 * n {
        bail!("--fixed needs {} numbers for n = {n}, got {}", 2 * n, values.len());
    }
    Ok(values.chunks(2).map(|c| [c[0], c[1]]).collect())
}

fn run(cli: Cli) -> Result<bool> {
    let config = cli.global.config()?;
    match cli.command {
        Command::Classify { input, output } => {
            let records = read_points(&input)?;
            let mut out = sink(output.as_deref())?;
            let summary = commands::classify(&records, &config, &mut out)?;
            out.flush()?;
            if summary.anomalies > 0 {
                eprintln!(
                    "{} of {} points had contradictory verdicts",
                    summary.anomalies, summary.points
                );
            }
            Ok(summary.anomalies == 0)
        }
        Command::Reduce { input, output } => {
            let records = read_points(&input)?;
            let mut out = sink(output.as_deref())?;
            commands::reduce(&records, &config, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Grid {
            n,
            x,
            y,
            fixed,
            spec,
            output,
            pgm,
        } => {
            let spec = match spec {
                Some(path) => {
                    let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                    serde_json::from_reader(BufReader::new(file))
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                None => {
                    let n = n.context("--n is required")?;
                    GridSpec {
                        n,
                        x: x.context("--x is required")?,
                        y: y.context("--y is required")?,
                        fixed: match fixed {
                            Some(s) => parse_fixed(&s, n)?,
                            None => vec![[0.0, 0.0]; n],
                        },
                    }
                }
            };
            let mut out = sink(output.as_deref())?;
            let mut img = pgm.as_deref().map(|p| sink(Some(p))).transpose()?;
            let failures = commands::grid(&spec, &config, &mut out, img.as_mut().map(|w| w as &mut dyn Write))?;
            out.flush()?;
            if let Some(w) = img.as_mut() {
                w.flush()?;
            }
            if failures > 0 {
                eprintln!("{failures} cells could not be evaluated and were marked as tolerance band");
            }
            Ok(true)
        }
        Command::Sample { kind, n, count, output } => {
            let mut out = sink(output.as_deref())?;
            commands::sample(kind, n, count, &config, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Bench { n, count, output } => {
            let rows = commands::bench(commands::parse_n_range(&n)?, count, &config)?;
            let mut out = sink(output.as_deref())?;
            commands::write_bench(&rows, config.output_format, &mut out)?;
            out.flush()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
