//! Text tables and CSV for evaluation and comparison results.

use std::fmt::Write;

use crate::evaluator::{EvaluationReport, SplitMetrics, SplitSpec};

/// Result of evaluating a trained bundle on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome {
    pub threshold: f64,
    pub metrics: SplitMetrics,
    /// `E` on the evaluated samples.
    pub standard_cost: f64,
    /// `Ē` on the evaluated samples.
    pub weighted_cost: f64,
}

fn fmt_opt(value: Option<f64>, decimals: usize) -> String {
    value.map_or_else(|| "n/a".to_owned(), |v| format!("{v:.decimals$}"))
}

impl EvalOutcome {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let m = &self.metrics;
        vec![
            ("samples", m.total.to_string()),
            ("threshold", format!("{:.2}", self.threshold)),
            ("correct", m.correct.to_string()),
            ("wrong", m.wrong.to_string()),
            ("rejected", m.rejected.to_string()),
            ("recognition_rate", format!("{:.4}", m.recognition_rate)),
            ("error_rate", format!("{:.4}", m.error_rate)),
            ("rejection_rate", format!("{:.4}", m.rejection_rate)),
            ("reliability", fmt_opt(m.reliability, 4)),
            ("standard_cost", format!("{:e}", self.standard_cost)),
            ("weighted_cost", format!("{:e}", self.weighted_cost)),
        ]
    }

    pub fn to_text(&self) -> String {
        self.fields()
            .into_iter()
            .map(|(k, v)| format!("{k:<18}{v}\n"))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let fields = self.fields();
        let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), values.join(","))
    }
}

/// Both cost variants evaluated on the same splits, without rejection and at
/// the configured threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantResult {
    pub accuracy: EvaluationReport,
    pub with_reject: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareColumn {
    pub split: SplitSpec,
    pub standard: VariantResult,
    pub weighted: VariantResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub class_count: usize,
    pub code_length: usize,
    pub min_row_distance: usize,
    pub threshold: f64,
    pub columns: Vec<CompareColumn>,
}

const METHOD_WIDTH: usize = 17;
const COLUMN_WIDTH: usize = 9;

impl CompareReport {
    fn table(&self, title: &str, cell: impl Fn(&VariantResult) -> Option<f64>) -> String {
        let mut out = format!("{title}\n{:<METHOD_WIDTH$}", "Method");
        for c in &self.columns {
            write!(out, "{:>COLUMN_WIDTH$}", c.split.label()).unwrap();
        }
        out.push('\n');
        for (name, pick) in [
            ("Standard BP", (|c: &CompareColumn| &c.standard) as fn(&CompareColumn) -> &VariantResult),
            ("Proposed method", |c: &CompareColumn| &c.weighted),
        ] {
            write!(out, "{name:<METHOD_WIDTH$}").unwrap();
            for c in &self.columns {
                write!(out, "{:>COLUMN_WIDTH$}", fmt_opt(cell(pick(c)), 2)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Recognition accuracy table in the Standard-vs-Proposed layout, followed
    /// by reliability at the rejection threshold.
    pub fn to_text(&self) -> String {
        let splits = self.columns.first().map_or(0, |c| c.split.split_count);
        let mut out = format!(
            "Code matrix {}x{} (d = {}), {} splits per column\n\n",
            self.class_count, self.code_length, self.min_row_distance, splits
        );
        out += &self.table("Recognition accuracy (%)", |v| Some(v.accuracy.mean.recognition_rate));
        out.push('\n');
        out += &self.table(
            &format!("Reliability (%) at robustness threshold {:.0}%", self.threshold),
            |v| v.with_reject.mean.reliability,
        );
        out.push('\n');
        out += &self.table(
            &format!("Rejection rate (%) at robustness threshold {:.0}%", self.threshold),
            |v| Some(v.with_reject.mean.rejection_rate),
        );
        out
    }

    /// One row per (column, variant, threshold, split).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "column,variant,threshold,split,recognition_rate,error_rate,rejection_rate,reliability\n",
        );
        for c in &self.columns {
            for (variant, result) in [("standard", &c.standard), ("weighted", &c.weighted)] {
                for (threshold, report) in [(0.0, &result.accuracy), (self.threshold, &result.with_reject)] {
                    for (i, s) in report.splits.iter().enumerate() {
                        writeln!(
                            out,
                            "{},{variant},{threshold:.2},{i},{:.6},{:.6},{:.6},{}",
                            c.split.label(),
                            s.recognition_rate,
                            s.error_rate,
                            s.rejection_rate,
                            fmt_opt(s.reliability, 6)
                        )
                        .unwrap();
                    }
                }
            }
        }
        out
    }
}
