//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "dataset": { "synthetic": { "class_count": 15, "dim": 30 } },
//!   "pca_components": 30,
//!   "code": { "generator": { "method": "bch", "length": 31 } },
//!   "train": { "cost": "weighted", "epochs": 300, "learning_rate": { "fixed": 0.03 } },
//!   "split": { "train_per_class": 6, "test_per_class": 5 },
//!   "threshold": 25.0
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ingest;
use super::synthetic::{generate_synthetic, SyntheticSpec};
use crate::codebook::{self, CodeMatrix};
use crate::dataset::Dataset;
use crate::decoder::check_threshold;
use crate::error::{Error, Result};
use crate::evaluator::SplitSpec;
use crate::network::TrainConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSource {
    Csv(PathBuf),
    ImageDir(PathBuf),
    Synthetic(SyntheticSpec),
}

impl DatasetSource {
    pub fn load(&self, base: &Path) -> Result<Dataset> {
        match self {
            DatasetSource::Csv(path) => ingest::load_csv(&base.join(path)),
            DatasetSource::ImageDir(path) => ingest::load_image_dir(&base.join(path)),
            DatasetSource::Synthetic(spec) => generate_synthetic(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeMethod {
    OneVsAll,
    OneVsOne,
    Exhaustive,
    Dense,
    Sparse,
    Bch,
}

impl CodeMethod {
    pub const NAMES: [&'static str; 6] = ["onevsall", "onevsone", "exhaustive", "dense", "sparse", "bch"];

    pub fn parse(name: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_owned())).map_err(|_| {
            Error::InvalidConfig(format!(
                "unknown code method {name:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))
        })
    }
}

fn default_trials() -> usize {
    100
}

/// Parameters for building a code matrix from one of the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeGenerator {
    pub method: CodeMethod,
    /// Code length for `dense`/`sparse`, block length for `bch`.
    #[serde(default)]
    pub length: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Hill-climbing iterations applied to binary outputs afterwards.
    #[serde(default)]
    pub hill_climb: usize,
}

impl CodeGenerator {
    pub fn new(method: CodeMethod) -> Self {
        Self {
            method,
            length: None,
            seed: 0,
            trials: default_trials(),
            hill_climb: 0,
        }
    }

    pub fn build(&self, class_count: usize) -> Result<CodeMatrix> {
        let length = |default: usize| self.length.unwrap_or(default);
        let matrix = match self.method {
            CodeMethod::OneVsAll => codebook::one_vs_all(class_count)?,
            CodeMethod::OneVsOne => codebook::one_vs_one(class_count)?,
            CodeMethod::Exhaustive => codebook::exhaustive(class_count)?,
            CodeMethod::Dense => codebook::dense_random(
                class_count,
                length(codebook::default_dense_length(class_count)),
                self.seed,
                self.trials,
            )?,
            CodeMethod::Sparse => codebook::sparse_random(
                class_count,
                length(codebook::default_sparse_length(class_count)),
                self.seed,
                self.trials,
            )?,
            CodeMethod::Bch => codebook::bch(class_count, length(31))?,
        };
        if self.hill_climb > 0 {
            codebook::hill_climb_improve(&matrix, self.hill_climb, self.seed)
        } else {
            Ok(matrix)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSource {
    Generator(CodeGenerator),
    File(PathBuf),
}

impl CodeSource {
    pub fn load(&self, base: &Path, class_count: usize) -> Result<CodeMatrix> {
        let matrix = match self {
            CodeSource::Generator(generator) => generator.build(class_count)?,
            CodeSource::File(path) => {
                let path = base.join(path);
                fs::read_to_string(&path)
                    .map_err(|e| Error::io(&path, &e))?
                    .parse::<CodeMatrix>()?
            }
        };
        if matrix.class_count() != class_count {
            return Err(Error::InvalidMatrix(format!(
                "code matrix has {} rows but the dataset has {class_count} classes",
                matrix.class_count()
            )));
        }
        Ok(matrix)
    }
}

fn default_pca() -> Option<usize> {
    Some(30)
}

fn default_threshold() -> f64 {
    25.0
}

fn default_columns() -> Vec<(usize, usize)> {
    vec![(2, 9), (4, 7), (6, 5), (8, 3)]
}

fn default_split() -> SplitSpec {
    SplitSpec::new(6, 5)
}

fn default_code() -> CodeSource {
    CodeSource::Generator(CodeGenerator {
        length: Some(31),
        ..CodeGenerator::new(CodeMethod::Bch)
    })
}

fn default_dataset() -> DatasetSource {
    DatasetSource::Synthetic(SyntheticSpec::default())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_dataset")]
    pub dataset: DatasetSource,
    /// `null` disables PCA.
    #[serde(default = "default_pca")]
    pub pca_components: Option<usize>,
    #[serde(default = "default_code")]
    pub code: CodeSource,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default = "default_split")]
    pub split: SplitSpec,
    /// Robustness-rate rejection threshold in percent.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// `(m, n)` Gm/Pn columns evaluated by `compare`.
    #[serde(default = "default_columns")]
    pub compare_columns: Vec<(usize, usize)>,
    /// Evaluate splits on the rayon thread pool.
    #[serde(default)]
    pub parallel: bool,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| {
            Error::parse(Some(e.line()), format!("config: {e}"))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
        let mut config = Self::from_json(&text)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        check_threshold(self.threshold)?;
        self.train.validate()?;
        if self.pca_components == Some(0) {
            return Err(Error::InvalidConfig("pca_components must be at least 1".into()));
        }
        if self.compare_columns.iter().any(|&(m, n)| m == 0 || n == 0) {
            return Err(Error::InvalidConfig("compare columns need m, n ≥ 1".into()));
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        self.dataset.load(&self.base_dir)
    }

    pub fn load_matrix(&self, class_count: usize) -> Result<CodeMatrix> {
        self.code.load(&self.base_dir, class_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{CostVariant, LearningRate};

    #[test]
    fn defaults() {
        let config = ExperimentConfig::default();
        assert_eq!(config.pca_components, Some(30));
        assert_eq!(config.threshold, 25.0);
        assert_eq!(config.split.split_count, 10);
        assert_eq!(config.compare_columns, vec![(2, 9), (4, 7), (6, 5), (8, 3)]);
        assert_eq!(config.dataset, DatasetSource::Synthetic(SyntheticSpec::default()));
    }

    #[test]
    fn parses_full_config() {
        let config = ExperimentConfig::from_json(
            r#"{
                "dataset": {"csv": "data.csv"},
                "pca_components": null,
                "code": {"generator": {"method": "sparse", "length": 40, "seed": 3}},
                "train": {"cost": "standard", "epochs": 5, "learning_rate": {"decay": {"initial": 0.5, "decay": 0.99}},
                          "update_mode": "full_batch", "hidden_dim": 8},
                "split": {"train_per_class": 2, "test_per_class": 9, "split_count": 3, "seed": 7},
                "threshold": 10
            }"#,
        )
        .unwrap();
        assert_eq!(config.pca_components, None);
        assert_eq!(config.train.cost, CostVariant::Standard);
        assert_eq!(config.train.learning_rate, LearningRate::Decay { initial: 0.5, decay: 0.99 });
        assert_eq!(config.split.seed, 7);
        assert_eq!(config.dataset, DatasetSource::Csv("data.csv".into()));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert_eq!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).unwrap_err().category(), "parse-error");
        assert_eq!(
            ExperimentConfig::from_json(r#"{"threshold": 120}"#).unwrap_err().category(),
            "invalid-threshold"
        );
        assert_eq!(
            ExperimentConfig::from_json(r#"{"train": {"epochs": 0}}"#).unwrap_err().category(),
            "invalid-config"
        );
    }

    #[test]
    fn method_names() {
        for name in CodeMethod::NAMES {
            CodeMethod::parse(name).unwrap();
        }
        assert!(CodeMethod::parse("random").is_err());
    }

    #[test]
    fn generator_defaults_follow_class_count() {
        let dense = CodeGenerator::new(CodeMethod::Dense).build(15).unwrap();
        assert_eq!(dense.code_length(), 39);
        let sparse = CodeGenerator::new(CodeMethod::Sparse).build(15).unwrap();
        assert_eq!(sparse.code_length(), 59);
    }
}
