//! Gm/Pn evaluation protocol.
//!
//! `Gm/Pn` draws `m` training and `n` test samples per class without
//! replacement. A run repeats this over `split_count` seeded splits, trains a
//! fresh network per split and averages the recognition, error, rejection and
//! reliability rates. Split partitions and network seeds depend only on the
//! split seed, the training seed and the split index, so two runs that differ
//! only in the cost variant see identical splits and initial weights.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::CodeMatrix;
use crate::dataset::Dataset;
use crate::decoder::{check_threshold, classify_with_reject};
use crate::error::{Error, Result};
use crate::features::PcaModel;
use crate::network::{self, Mlp, Target, TrainConfig, TrainTrace};
use crate::rng::{self, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub test_per_class: usize,
    #[serde(default = "default_split_count")]
    pub split_count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_split_count() -> usize {
    10
}

impl SplitSpec {
    pub fn new(train_per_class: usize, test_per_class: usize) -> Self {
        Self {
            train_per_class,
            test_per_class,
            split_count: default_split_count(),
            seed: 0,
        }
    }

    /// Column label such as `G6/P5`.
    pub fn label(&self) -> String {
        format!("G{}/P{}", self.train_per_class, self.test_per_class)
    }

    fn validate(&self) -> Result<()> {
        if self.train_per_class == 0 || self.test_per_class == 0 || self.split_count == 0 {
            return Err(Error::InvalidConfig(format!(
                "split {} × {} splits needs positive counts",
                self.label(),
                self.split_count
            )));
        }
        Ok(())
    }
}

/// Sample indices of one train/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per class: shuffle the class's samples with the split's stream, take the
/// first `m` for training and the next `n` for testing.
pub fn split_gm_pn(dataset: &Dataset, spec: &SplitSpec, split_index: usize) -> Result<Split> {
    spec.validate()?;
    let needed = spec.train_per_class + spec.test_per_class;
    let mut rng = rng::stream(spec.seed, Domain::Split, split_index as u64);
    let mut split = Split {
        train: Vec::new(),
        test: Vec::new(),
    };
    for (class, mut indices) in dataset.indices_by_class().into_iter().enumerate() {
        if indices.len() < needed {
            return Err(Error::InsufficientData(format!(
                "class {class} has {} samples; {} needs {needed}",
                indices.len(),
                spec.label()
            )));
        }
        indices.shuffle(&mut rng);
        split.train.extend_from_slice(&indices[..spec.train_per_class]);
        split.test.extend_from_slice(&indices[spec.train_per_class..needed]);
    }
    Ok(split)
}

/// Rates for one evaluated test set, all in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitMetrics {
    pub total: usize,
    pub correct: usize,
    pub wrong: usize,
    pub rejected: usize,
    pub recognition_rate: f64,
    pub error_rate: f64,
    pub rejection_rate: f64,
    /// `recognition / (recognition + error)`; `None` when every sample was rejected.
    pub reliability: Option<f64>,
}

impl SplitMetrics {
    pub fn from_counts(correct: usize, wrong: usize, rejected: usize) -> Result<Self> {
        let total = correct + wrong + rejected;
        if total == 0 {
            return Err(Error::EmptyInput("test set is empty".into()));
        }
        let pct = |k: usize| 100.0 * k as f64 / total as f64;
        let (recognition_rate, error_rate) = (pct(correct), pct(wrong));
        let reliability = (correct + wrong > 0)
            .then(|| 100.0 * recognition_rate / (recognition_rate + error_rate));
        Ok(Self {
            total,
            correct,
            wrong,
            rejected,
            recognition_rate,
            error_rate,
            rejection_rate: pct(rejected),
            reliability,
        })
    }
}

/// Arithmetic means over splits; reliability averages the splits where it is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanMetrics {
    pub recognition_rate: f64,
    pub error_rate: f64,
    pub rejection_rate: f64,
    pub reliability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub splits: Vec<SplitMetrics>,
    pub mean: MeanMetrics,
}

impl EvaluationReport {
    pub fn from_splits(splits: Vec<SplitMetrics>) -> Result<Self> {
        if splits.is_empty() {
            return Err(Error::EmptyInput("no splits to average".into()));
        }
        let n = splits.len() as f64;
        let avg = |f: fn(&SplitMetrics) -> f64| splits.iter().map(f).sum::<f64>() / n;
        let defined: Vec<f64> = splits.iter().filter_map(|s| s.reliability).collect();
        let mean = MeanMetrics {
            recognition_rate: avg(|s| s.recognition_rate),
            error_rate: avg(|s| s.error_rate),
            rejection_rate: avg(|s| s.rejection_rate),
            reliability: (!defined.is_empty())
                .then(|| defined.iter().sum::<f64>() / defined.len() as f64),
        };
        Ok(Self { splits, mean })
    }
}

/// Decodes every test sample and tallies accepted-correct, accepted-wrong and rejected.
pub fn evaluate<U: AsRef<[f64]>>(
    net: &Mlp,
    inputs: &[U],
    labels: &[usize],
    matrix: &CodeMatrix,
    threshold_percent: f64,
) -> Result<SplitMetrics> {
    check_threshold(threshold_percent)?;
    if inputs.is_empty() {
        return Err(Error::EmptyInput("test set is empty".into()));
    }
    if inputs.len() != labels.len() {
        return Err(Error::InvalidDimension(format!(
            "{} test inputs but {} labels",
            inputs.len(),
            labels.len()
        )));
    }
    let (mut correct, mut wrong, mut rejected) = (0, 0, 0);
    for (u, &label) in inputs.iter().zip(labels) {
        let decision = classify_with_reject(&net.forward(u.as_ref())?, matrix, threshold_percent)?;
        if decision.rejected {
            rejected += 1;
        } else if decision.predicted_class == label {
            correct += 1;
        } else {
            wrong += 1;
        }
    }
    SplitMetrics::from_counts(correct, wrong, rejected)
}

/// Everything needed to train and evaluate over a series of splits.
#[derive(Debug, Clone, Copy)]
pub struct Experiment<'a> {
    pub dataset: &'a Dataset,
    pub matrix: &'a CodeMatrix,
    pub train: &'a TrainConfig,
    pub split: &'a SplitSpec,
    pub threshold_percent: f64,
    /// PCA dimension; capped at `min(train samples − 1, input dim)`. `None` skips PCA.
    pub pca_components: Option<usize>,
    /// Runs splits on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

/// A network trained on one split together with its projected test set.
#[derive(Debug, Clone)]
pub struct TrainedSplit {
    pub pca: Option<PcaModel>,
    pub net: Mlp,
    pub trace: TrainTrace,
    pub test_inputs: Vec<Vec<f64>>,
    pub test_labels: Vec<usize>,
}

impl TrainedSplit {
    pub fn evaluate(&self, matrix: &CodeMatrix, threshold_percent: f64) -> Result<SplitMetrics> {
        evaluate(&self.net, &self.test_inputs, &self.test_labels, matrix, threshold_percent)
    }
}

/// Seed for the network of split `split_index`; independent of the cost variant.
pub fn split_training_seed(train_seed: u64, split_seed: u64, split_index: usize) -> u64 {
    rng::derive_seed(
        train_seed,
        Domain::SplitTraining,
        rng::derive_seed(split_seed, Domain::Split, split_index as u64),
    )
}

/// Target vectors for `labels` under `matrix`.
pub fn encode_labels(matrix: &CodeMatrix, labels: &[usize]) -> Result<Vec<Vec<Target>>> {
    labels.iter().map(|&l| matrix.encode_targets(l)).collect()
}

/// Fits PCA on the training part of split `split_index` and trains a fresh network.
pub fn train_split(experiment: &Experiment<'_>, split_index: usize) -> Result<TrainedSplit> {
    let Experiment {
        dataset,
        matrix,
        train,
        split,
        pca_components,
        ..
    } = *experiment;
    if dataset.class_count() != matrix.class_count() {
        return Err(Error::InvalidMatrix(format!(
            "dataset has {} classes, code matrix has {}",
            dataset.class_count(),
            matrix.class_count()
        )));
    }
    let partition = split_gm_pn(dataset, split, split_index)?;
    let pick = |idx: &[usize]| -> Vec<Vec<f64>> {
        idx.iter().map(|&i| dataset.features()[i].clone()).collect()
    };
    let (mut train_inputs, mut test_inputs) = (pick(&partition.train), pick(&partition.test));
    let train_labels: Vec<usize> = partition.train.iter().map(|&i| dataset.labels()[i]).collect();
    let test_labels: Vec<usize> = partition.test.iter().map(|&i| dataset.labels()[i]).collect();

    let pca = match pca_components {
        Some(k) => {
            let k = k.min(train_inputs.len() - 1).min(dataset.dim()).max(1);
            let model = PcaModel::fit(&train_inputs, k)?;
            train_inputs = project_all(&model, &train_inputs)?;
            test_inputs = project_all(&model, &test_inputs)?;
            Some(model)
        }
        None => None,
    };

    let seed = split_training_seed(train.seed, split.seed, split_index);
    let config = TrainConfig {
        seed,
        ..train.clone()
    };
    let targets = encode_labels(matrix, &train_labels)?;
    let input_dim = train_inputs[0].len();
    let net = Mlp::init(input_dim, train.hidden_dim, matrix.code_length(), seed, train.init_scale)?;
    let (net, trace) = network::train(&net, &train_inputs, &targets, &config)?;
    Ok(TrainedSplit {
        pca,
        net,
        trace,
        test_inputs,
        test_labels,
    })
}

pub fn project_all(model: &PcaModel, inputs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    inputs.iter().map(|x| model.project(x)).collect()
}

/// Trains and evaluates every split, then averages.
pub fn run_experiment(experiment: &Experiment<'_>) -> Result<EvaluationReport> {
    let mut reports = run_experiment_at(experiment, &[experiment.threshold_percent])?;
    Ok(reports.remove(0))
}

/// Like [`run_experiment`], but scores each trained network at every threshold
/// in `thresholds`, returning one averaged report per threshold.
pub fn run_experiment_at(
    experiment: &Experiment<'_>,
    thresholds: &[f64],
) -> Result<Vec<EvaluationReport>> {
    for &t in thresholds {
        check_threshold(t)?;
    }
    let run = |index: usize| -> Result<Vec<SplitMetrics>> {
        let trained = train_split(experiment, index)?;
        thresholds
            .iter()
            .map(|&t| trained.evaluate(experiment.matrix, t))
            .collect()
    };
    let count = experiment.split.split_count;
    let per_split: Vec<Vec<SplitMetrics>> = if experiment.parallel {
        (0..count).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..count).map(run).collect::<Result<_>>()?
    };
    (0..thresholds.len())
        .map(|t| EvaluationReport::from_splits(per_split.iter().map(|s| s[t]).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_dataset(classes: usize, per_class: usize) -> Dataset {
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for c in 0..classes {
            for i in 0..per_class {
                features.push(vec![c as f64, i as f64]);
                labels.push(c);
            }
        }
        Dataset::new(features, labels).unwrap()
    }

    #[test]
    fn yale_sized_split_counts() {
        let data = grid_dataset(15, 11);
        let s = split_gm_pn(&data, &SplitSpec::new(8, 3), 0).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (120, 45));
        let s = split_gm_pn(&data, &SplitSpec::new(2, 9), 3).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (30, 135));
    }

    #[test]
    fn splits_are_deterministic_and_disjoint() {
        let data = grid_dataset(4, 10);
        let spec = SplitSpec { seed: 9, ..SplitSpec::new(4, 5) };
        let a = split_gm_pn(&data, &spec, 2).unwrap();
        assert_eq!(a, split_gm_pn(&data, &spec, 2).unwrap());
        assert_ne!(a, split_gm_pn(&data, &spec, 3).unwrap());
        assert!(a.train.iter().all(|i| !a.test.contains(i)));
        for class in 0..4 {
            let count = |idx: &[usize]| idx.iter().filter(|&&i| data.labels()[i] == class).count();
            assert_eq!((count(&a.train), count(&a.test)), (4, 5));
        }
    }

    #[test]
    fn insufficient_samples() {
        let data = grid_dataset(3, 5);
        let err = split_gm_pn(&data, &SplitSpec::new(4, 2), 0).unwrap_err();
        assert_eq!(err.category(), "insufficient-data");
    }

    #[test]
    fn hand_built_counts() {
        let m = SplitMetrics::from_counts(2, 1, 1).unwrap();
        assert_eq!((m.recognition_rate, m.error_rate, m.rejection_rate), (50.0, 25.0, 25.0));
        assert!((m.reliability.unwrap() - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(SplitMetrics::from_counts(0, 0, 3).unwrap().reliability, None);
        assert_eq!(SplitMetrics::from_counts(0, 0, 0).unwrap_err().category(), "empty-input");
    }

    #[test]
    fn no_rejection_means_reliability_equals_recognition() {
        let m = SplitMetrics::from_counts(7, 3, 0).unwrap();
        assert!((m.reliability.unwrap() - m.recognition_rate).abs() < 1e-12);
    }

    #[test]
    fn averages_skip_undefined_reliability() {
        let splits = vec![
            SplitMetrics::from_counts(3, 1, 0).unwrap(),
            SplitMetrics::from_counts(0, 0, 4).unwrap(),
        ];
        let report = EvaluationReport::from_splits(splits).unwrap();
        assert_eq!(report.mean.recognition_rate, 37.5);
        assert_eq!(report.mean.rejection_rate, 50.0);
        assert_eq!(report.mean.reliability, Some(75.0));
    }
}
