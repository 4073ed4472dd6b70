//! Nearest-codeword decoding with a robustness-rate reject option.
//!
//! Distances between a real-valued output vector and a codeword are L1 sums
//! over the codeword's non-masked positions; on `{0,1}` outputs they reduce to
//! Hamming distance. The robustness rate of a decision is
//!
//! ```text
//! RR = (L(cw2, ȳ) − L(cw1, ȳ)) / H(cw2, cw1) × 100
//! ```
//!
//! with `cw1`, `cw2` the closest and second-closest rows and `H` the integer
//! Hamming distance over positions both rows specify.

use crate::codebook::{CodeMatrix, Trit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub predicted_class: usize,
    pub distances: Vec<f64>,
    /// Percent, in `[0, 100]`.
    pub robustness_rate: f64,
    pub rejected: bool,
}

/// `L_i = Σ_j |Z_ij − y_j|` over the non-masked positions of row `i`.
pub fn distances(output: &[f64], matrix: &CodeMatrix) -> Result<Vec<f64>> {
    if output.len() != matrix.code_length() {
        return Err(Error::InvalidDimension(format!(
            "output vector has {} entries, code length is {}",
            output.len(),
            matrix.code_length()
        )));
    }
    Ok(matrix
        .rows()
        .map(|row| {
            row.iter()
                .zip(output)
                .filter_map(|(z, y)| z.value().map(|z| (z - y).abs()))
                .sum()
        })
        .collect())
}

/// Indices of the smallest and second-smallest entries, lowest index on ties.
fn two_closest(distances: &[f64]) -> (usize, usize) {
    let mut order: Vec<usize> = (0..distances.len()).collect();
    order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]).then(a.cmp(&b)));
    (order[0], order[1])
}

/// `argmin_i L_i`, lowest index on ties.
pub fn classify(output: &[f64], matrix: &CodeMatrix) -> Result<usize> {
    let distances = distances(output, matrix)?;
    Ok(two_closest(&distances).0)
}

fn rate_from(distances: &[f64], matrix: &CodeMatrix) -> Result<(usize, f64)> {
    if distances.len() < 2 {
        return Err(Error::InvalidMatrix("robustness rate needs at least two classes".into()));
    }
    let (first, second) = two_closest(distances);
    let separation = matrix.row_distance(first, second);
    if separation == 0 {
        return Err(Error::InvalidMatrix(format!(
            "rows {first} and {second} are not separated on shared positions"
        )));
    }
    let rate = (distances[second] - distances[first]) / separation as f64 * 100.0;
    // Only masked rows can push the margin past the pair separation.
    let rate = if matrix.is_binary() { rate } else { rate.min(100.0) };
    Ok((first, rate))
}

/// Robustness rate of the nearest-codeword decision, in percent.
pub fn robustness_rate(output: &[f64], matrix: &CodeMatrix) -> Result<f64> {
    let distances = distances(output, matrix)?;
    rate_from(&distances, matrix).map(|(_, rate)| rate)
}

/// Decodes and rejects when the robustness rate falls below `threshold_percent`.
/// The predicted class is filled in for rejected samples as well.
pub fn classify_with_reject(
    output: &[f64],
    matrix: &CodeMatrix,
    threshold_percent: f64,
) -> Result<DecodeResult> {
    check_threshold(threshold_percent)?;
    let distances = distances(output, matrix)?;
    let (predicted_class, robustness_rate) = rate_from(&distances, matrix)?;
    Ok(DecodeResult {
        predicted_class,
        distances,
        robustness_rate,
        rejected: robustness_rate < threshold_percent,
    })
}

pub fn check_threshold(threshold_percent: f64) -> Result<()> {
    if (0.0..=100.0).contains(&threshold_percent) {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(threshold_percent))
    }
}

/// Binary output vector with bit `j` taken from row `class` and flipped where
/// `flips` lists it; masked positions become 0.5.
pub fn corrupted_codeword(matrix: &CodeMatrix, class: usize, flips: &[usize]) -> Vec<f64> {
    let mut out: Vec<f64> = matrix
        .row(class)
        .iter()
        .map(|t| match t {
            Trit::Zero => 0.0,
            Trit::One => 1.0,
            Trit::DontCare => 0.5,
        })
        .collect();
    for &j in flips {
        out[j] = 1.0 - out[j];
    }
    out
}
