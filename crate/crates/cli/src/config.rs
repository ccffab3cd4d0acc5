use serde::{Deserialize, Serialize};
use symdisc::ToleranceConfig;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerances: ToleranceConfig,
    pub seed: u64,
    pub parallelism: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: ToleranceConfig::default(),
            seed: DEFAULT_SEED,
            parallelism: 1,
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    /// Runs `f` on a pool with `parallelism` workers.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism.max(1))
            .build()?;
        Ok(pool.install(f))
    }
}
