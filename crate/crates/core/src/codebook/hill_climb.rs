use rand::seq::SliceRandom;
use rand::Rng;

use super::{CodeMatrix, Trit};
use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// `(d, number of row pairs at distance d)`; larger `d`, then fewer pairs, is better.
fn score(matrix: &CodeMatrix) -> (usize, usize) {
    let mut d = usize::MAX;
    let mut tight = 0;
    for a in 0..matrix.class_count() {
        for b in a + 1..matrix.class_count() {
            let dist = matrix.row_distance(a, b);
            if dist < d {
                d = dist;
                tight = 1;
            } else if dist == d {
                tight += 1;
            }
        }
    }
    (d, tight)
}

fn better(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Randomised hill climbing on single-bit flips of a binary matrix.
///
/// Each iteration picks a row that sits in a closest pair and tries its bits
/// in a seeded random order. The first flip that raises the minimum distance
/// (or keeps it while removing a closest pair) is taken; failing that, the
/// first valid flip that keeps the minimum distance is taken as a sideways
/// move. Flips that break validation or lower the minimum are never accepted.
pub fn hill_climb_improve(matrix: &CodeMatrix, iterations: usize, seed: u64) -> Result<CodeMatrix> {
    if !matrix.is_binary() {
        return Err(Error::InvalidMatrix("hill climbing needs a binary matrix".into()));
    }
    matrix.validate()?;
    let mut current = matrix.clone();
    let mut current_score = score(&current);
    let mut rng = rng::stream(seed, Domain::HillClimb, 0);
    let mut columns: Vec<usize> = (0..current.code_length()).collect();

    for _ in 0..iterations {
        let (d, _) = current_score;
        let tight_rows: Vec<usize> = (0..current.class_count())
            .filter(|&a| {
                (0..current.class_count()).any(|b| b != a && current.row_distance(a, b) == d)
            })
            .collect();
        let row = tight_rows[rng.random_range(0..tight_rows.len())];
        columns.shuffle(&mut rng);

        let mut sideways = None;
        let mut improved = None;
        for &col in &columns {
            let mut trial = current.clone();
            trial.set(row, col, flip(trial.get(row, col)));
            if !trial.is_valid() {
                continue;
            }
            let trial_score = score(&trial);
            if better(trial_score, current_score) {
                improved = Some((trial, trial_score));
                break;
            }
            if trial_score.0 == d && sideways.is_none() {
                sideways = Some((trial, trial_score));
            }
        }
        if let Some((next, next_score)) = improved.or(sideways) {
            current = next;
            current_score = next_score;
        }
    }
    Ok(current)
}

fn flip(t: Trit) -> Trit {
    t.flipped()
}
