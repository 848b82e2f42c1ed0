//! Data ingestion, synthetic trials, partitioning, experiment runs and reports.

pub mod config;
pub mod dataset;
pub mod runner;
pub mod synth;

pub use config::{DataSource, ExperimentConfig};
pub use dataset::{load_dataset, write_dataset, DatasetManifest, Subject};
pub use runner::{partition, run_experiment, ResultRow, ResultTable, Split, SummaryRow};
pub use synth::{synth_generate, SynthParams};

use crate::error::Result;

/// Loads the configured data source; synthetic data becomes a single subject `synth`.
pub fn load_source(cfg: &ExperimentConfig) -> Result<Vec<Subject>> {
    match &cfg.data {
        DataSource::Manifest(path) => load_dataset(path, cfg.channels.as_deref()),
        DataSource::Synth(p) => Ok(vec![Subject {
            name: "synth".into(),
            channels: (1..=p.channels).map(|i| format!("ch{i}")).collect(),
            data: synth_generate(p)?,
        }]),
    }
}
