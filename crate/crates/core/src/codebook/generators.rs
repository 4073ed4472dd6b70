use rand::Rng;

use super::{CodeMatrix, Trit};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};

fn check_class_count(class_count: usize) -> Result<()> {
    if class_count < 3 {
        return Err(Error::InvalidClassCount(class_count));
    }
    Ok(())
}

/// One-per-class coding: the `C × C` identity pattern.
pub fn one_vs_all(class_count: usize) -> Result<CodeMatrix> {
    check_class_count(class_count)?;
    let rows = (0..class_count)
        .map(|i| (0..class_count).map(|j| Trit::from_bit(i == j)).collect())
        .collect();
    CodeMatrix::from_rows(rows)
}

/// One column per class pair `(p, q)`, `p < q` in lexicographic order:
/// `1` for `p`, `0` for `q`, don't-care for every other class.
pub fn one_vs_one(class_count: usize) -> Result<CodeMatrix> {
    check_class_count(class_count)?;
    let pairs: Vec<(usize, usize)> = (0..class_count)
        .flat_map(|p| (p + 1..class_count).map(move |q| (p, q)))
        .collect();
    let rows = (0..class_count)
        .map(|i| {
            pairs
                .iter()
                .map(|&(p, q)| match i {
                    _ if i == p => Trit::One,
                    _ if i == q => Trit::Zero,
                    _ => Trit::DontCare,
                })
                .collect()
        })
        .collect();
    CodeMatrix::from_rows(rows)
}

/// Largest class count accepted by [`exhaustive`].
pub const EXHAUSTIVE_MAX_CLASSES: usize = 7;

/// Every non-trivial two-way partition of the classes, one per column.
///
/// Row 0 is all ones; row `i` alternates runs of `2^(C-1-i)` zeros and ones.
pub fn exhaustive(class_count: usize) -> Result<CodeMatrix> {
    check_class_count(class_count)?;
    if class_count > EXHAUSTIVE_MAX_CLASSES {
        return Err(Error::UnsupportedSize(format!(
            "exhaustive codes support at most {EXHAUSTIVE_MAX_CLASSES} classes, got {class_count}"
        )));
    }
    let length = (1usize << (class_count - 1)) - 1;
    let rows = (0..class_count)
        .map(|i| {
            if i == 0 {
                return vec![Trit::One; length];
            }
            let run = 1usize << (class_count - 1 - i);
            (0..length).map(|j| Trit::from_bit((j / run) % 2 == 1)).collect()
        })
        .collect();
    CodeMatrix::from_rows(rows)
}

/// `round(10 · log2 C)`; 39 for 15 classes.
pub fn default_dense_length(class_count: usize) -> usize {
    (10.0 * (class_count as f64).log2()).round() as usize
}

/// `round(15 · log2 C)`; 59 for 15 classes.
pub fn default_sparse_length(class_count: usize) -> usize {
    (15.0 * (class_count as f64).log2()).round() as usize
}

fn check_random_args(class_count: usize, code_length: usize, trials: usize) -> Result<()> {
    check_class_count(class_count)?;
    let min_length = (class_count as f64).log2().ceil() as usize;
    if code_length < min_length {
        return Err(Error::UnsupportedSize(format!(
            "code length {code_length} cannot separate {class_count} classes (need ≥ {min_length})"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

/// Draws `trials` candidates and keeps the valid one with the largest minimum
/// row distance; the earliest candidate wins ties.
fn best_of(
    class_count: usize,
    code_length: usize,
    seed: u64,
    trials: usize,
    domain: Domain,
    draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Trit,
) -> Result<CodeMatrix> {
    let mut best: Option<(usize, CodeMatrix)> = None;
    for trial in 0..trials {
        let mut rng = rng::stream(seed, domain, trial as u64);
        let rows = (0..class_count)
            .map(|_| (0..code_length).map(|_| draw(&mut rng)).collect())
            .collect();
        let candidate = CodeMatrix::from_rows_unchecked(rows)?;
        if !candidate.is_valid() {
            continue;
        }
        let d = candidate.min_row_distance();
        if best.as_ref().is_none_or(|(best_d, _)| d > *best_d) {
            best = Some((d, candidate));
        }
    }
    best.map(|(_, m)| m).ok_or_else(|| {
        Error::GenerationFailed(format!(
            "no valid {class_count}×{code_length} matrix in {trials} trials"
        ))
    })
}

/// Random binary code: entries uniform over `{0, 1}`.
pub fn dense_random(
    class_count: usize,
    code_length: usize,
    seed: u64,
    trials: usize,
) -> Result<CodeMatrix> {
    check_random_args(class_count, code_length, trials)?;
    best_of(class_count, code_length, seed, trials, Domain::DenseCode, |rng| {
        Trit::from_bit(rng.random::<bool>())
    })
}

/// Random ternary code: `P(0) = P(1) = 1/4`, `P(*) = 1/2`.
pub fn sparse_random(
    class_count: usize,
    code_length: usize,
    seed: u64,
    trials: usize,
) -> Result<CodeMatrix> {
    check_random_args(class_count, code_length, trials)?;
    best_of(class_count, code_length, seed, trials, Domain::SparseCode, |rng| {
        match rng.random_range(0..4u8) {
            0 => Trit::Zero,
            1 => Trit::One,
            _ => Trit::DontCare,
        }
    })
}
