//! Implementations behind the `codegen`, `train`, `eval` and `compare` commands.

use std::fs;
use std::path::{Path, PathBuf};

use super::bundle::ModelBundle;
use super::config::{CodeGenerator, CodeMethod, ExperimentConfig};
use super::ingest;
use super::report::{CompareColumn, CompareReport, EvalOutcome, VariantResult};
use crate::codebook::CodeMatrix;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluator::{self, encode_labels, Experiment, SplitSpec};
use crate::features::PcaModel;
use crate::network::{self, CostVariant, Mlp, TrainConfig, TrainTrace};

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, &e))
}

/// `<path>` with `suffix` appended to its file name.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[derive(Debug, Clone)]
pub struct CodegenArgs {
    pub method: CodeMethod,
    pub classes: usize,
    pub length: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub hill_climb: usize,
    pub out: PathBuf,
}

/// Writes the matrix and returns a one-line `key=value` analysis.
pub fn cmd_codegen(args: &CodegenArgs) -> Result<String> {
    let generator = CodeGenerator {
        method: args.method,
        length: args.length,
        seed: args.seed,
        trials: args.trials,
        hill_climb: args.hill_climb,
    };
    let matrix = generator.build(args.classes)?;
    write_file(&args.out, matrix.to_text())?;
    let analysis = matrix.analyze();
    Ok(format!(
        "classes={} length={} d={} t={}",
        matrix.class_count(),
        matrix.code_length(),
        analysis.min_row_distance,
        analysis.correcting_capability
    ))
}

/// Fits PCA and trains a network on the whole configured dataset.
pub fn train_bundle(config: &ExperimentConfig) -> Result<(ModelBundle, TrainTrace)> {
    let dataset = config.load_dataset()?;
    let matrix = config.load_matrix(dataset.class_count())?;
    let pca = match config.pca_components {
        Some(k) => Some(PcaModel::fit(
            dataset.features(),
            k.min(dataset.len().saturating_sub(1)).min(dataset.dim()).max(1),
        )?),
        None => None,
    };
    let inputs = match &pca {
        Some(model) => evaluator::project_all(model, dataset.features())?,
        None => dataset.features().to_vec(),
    };
    let targets = encode_labels(&matrix, dataset.labels())?;
    let train: &TrainConfig = &config.train;
    let net = Mlp::init(inputs[0].len(), train.hidden_dim, matrix.code_length(), train.seed, train.init_scale)?;
    let (network, trace) = network::train(&net, &inputs, &targets, train)?;
    let bundle = ModelBundle { pca, network, matrix };
    Ok((bundle, trace))
}

#[derive(Debug, Clone)]
pub struct TrainArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    /// Defaults to `<out>.trace.csv`.
    pub trace: Option<PathBuf>,
}

pub fn cmd_train(args: &TrainArgs) -> Result<String> {
    let config = ExperimentConfig::load(&args.config)?;
    let (bundle, trace) = train_bundle(&config)?;
    write_file(&args.out, bundle.encode())?;
    let trace_path = args.trace.clone().unwrap_or_else(|| sibling(&args.out, ".trace.csv"));
    write_file(&trace_path, trace.to_csv())?;
    let last = trace.last().expect("at least one epoch");
    Ok(format!(
        "epochs={} standard_cost={:e} weighted_cost={:e}",
        trace.rows.len(),
        last.standard_cost,
        last.weighted_cost
    ))
}

/// Scores a bundle on every sample of `dataset`.
pub fn evaluate_bundle(bundle: &ModelBundle, dataset: &Dataset, threshold: f64) -> Result<EvalOutcome> {
    if dataset.dim() != bundle.input_dim() {
        return Err(Error::InvalidDimension(format!(
            "data has {} features, bundle expects {}",
            dataset.dim(),
            bundle.input_dim()
        )));
    }
    let inputs = dataset
        .features()
        .iter()
        .map(|x| bundle.prepare(x))
        .collect::<Result<Vec<_>>>()?;
    let targets = encode_labels(&bundle.matrix, dataset.labels())?;
    let (standard_cost, weighted_cost) = network::costs(&bundle.network, &inputs, &targets)?;
    let metrics = evaluator::evaluate(&bundle.network, &inputs, dataset.labels(), &bundle.matrix, threshold)?;
    Ok(EvalOutcome {
        threshold,
        metrics,
        standard_cost,
        weighted_cost,
    })
}

/// Loads a dataset from a CSV file, an image directory, or the dataset
/// section of a JSON experiment config.
pub fn load_data_source(path: &Path) -> Result<Dataset> {
    if path.is_dir() {
        ingest::load_image_dir(path)
    } else if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        ExperimentConfig::load(path)?.load_dataset()
    } else {
        ingest::load_csv(path)
    }
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub bundle: PathBuf,
    pub data: PathBuf,
    pub threshold: f64,
    pub report: PathBuf,
}

pub fn cmd_eval(args: &EvalArgs) -> Result<String> {
    let bytes = fs::read(&args.bundle).map_err(|e| Error::io(&args.bundle, &e))?;
    let bundle = ModelBundle::decode(&bytes)?;
    let dataset = load_data_source(&args.data)?;
    let outcome = evaluate_bundle(&bundle, &dataset, args.threshold)?;
    let text = if is_csv(&args.report) { outcome.to_csv() } else { outcome.to_text() };
    write_file(&args.report, text)?;
    let m = &outcome.metrics;
    Ok(format!(
        "recognition={:.2} error={:.2} rejection={:.2} reliability={}",
        m.recognition_rate,
        m.error_rate,
        m.rejection_rate,
        m.reliability.map_or("n/a".into(), |r| format!("{r:.2}"))
    ))
}

/// Runs both cost variants over the configured Gm/Pn columns on shared splits.
pub fn compare(config: &ExperimentConfig) -> Result<CompareReport> {
    let dataset = config.load_dataset()?;
    let matrix = config.load_matrix(dataset.class_count())?;
    compare_on(config, &dataset, &matrix)
}

pub fn compare_on(config: &ExperimentConfig, dataset: &Dataset, matrix: &CodeMatrix) -> Result<CompareReport> {
    let mut columns = Vec::with_capacity(config.compare_columns.len());
    for &(m, n) in &config.compare_columns {
        let split = SplitSpec {
            train_per_class: m,
            test_per_class: n,
            ..config.split
        };
        let run = |cost: CostVariant| -> Result<VariantResult> {
            let train = TrainConfig { cost, ..config.train.clone() };
            let experiment = Experiment {
                dataset,
                matrix,
                train: &train,
                split: &split,
                threshold_percent: config.threshold,
                pca_components: config.pca_components,
                parallel: config.parallel,
            };
            let mut reports = evaluator::run_experiment_at(&experiment, &[0.0, config.threshold])?;
            let with_reject = reports.pop().expect("two thresholds");
            let accuracy = reports.pop().expect("two thresholds");
            Ok(VariantResult { accuracy, with_reject })
        };
        columns.push(CompareColumn {
            split,
            standard: run(CostVariant::Standard)?,
            weighted: run(CostVariant::Weighted)?,
        });
    }
    Ok(CompareReport {
        class_count: matrix.class_count(),
        code_length: matrix.code_length(),
        min_row_distance: matrix.min_row_distance(),
        threshold: config.threshold,
        columns,
    })
}

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub config: PathBuf,
    pub report: PathBuf,
}

/// Writes the comparison table to `report` (CSV when it ends in `.csv`) and
/// per-split rows to `<report>.splits.csv`.
pub fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let config = ExperimentConfig::load(&args.config)?;
    let report = compare(&config)?;
    let csv = report.to_csv();
    let main = if is_csv(&args.report) { csv.clone() } else { report.to_text() };
    write_file(&args.report, main)?;
    write_file(&sibling(&args.report, ".splits.csv"), csv)?;
    Ok(report.to_text())
}
