//! Experiment harness: data ingestion, synthetic corpora, configuration,
//! model bundles, reports and the command implementations used by the CLI.

pub mod bundle;
pub mod commands;
pub mod config;
pub mod ingest;
pub mod report;
pub mod synthetic;

pub use bundle::ModelBundle;
pub use config::{CodeGenerator, CodeMethod, CodeSource, DatasetSource, ExperimentConfig};
pub use ingest::{load_csv, load_image_dir, parse_csv, parse_pgm};
pub use report::{CompareReport, EvalOutcome};
pub use synthetic::{generate_synthetic, SyntheticSpec};
