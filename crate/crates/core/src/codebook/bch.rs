//! Binary primitive BCH codes of length 15, 31 and 63.
//!
//! Polynomials over GF(2) are packed into a `u64` with bit `i` holding the
//! coefficient of `x^i`; every generator used here has degree below 64.

use super::{CodeMatrix, Trit};
use crate::error::{Error, Result};

/// Primitive polynomials defining GF(2^m) for m = 4, 5, 6.
const PRIMITIVE: [(usize, u64); 3] = [(4, 0b1_0011), (5, 0b10_0101), (6, 0b100_0011)];

/// Parameters of one binary BCH code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BchParams {
    pub block_length: usize,
    pub message_length: usize,
    /// Designed distance `2t + 1`; the true minimum distance is at least this.
    pub designed_distance: usize,
    pub generator: u64,
}

struct Field {
    exp: Vec<usize>,
    log: Vec<usize>,
    order: usize,
}

impl Field {
    fn new(m: usize, primitive: u64) -> Self {
        let order = (1 << m) - 1;
        let mut exp = vec![0; 2 * order];
        let mut log = vec![0; order + 1];
        let mut x: u64 = 1;
        for (i, slot) in exp.iter_mut().enumerate().take(order) {
            *slot = x as usize;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Self { exp, log, order }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a] + self.log[b]]
        }
    }

    /// Minimal polynomial of `α^power`, as a GF(2) polynomial.
    fn minimal_polynomial(&self, power: usize) -> u64 {
        let mut coset = Vec::new();
        let mut e = power % self.order;
        while !coset.contains(&e) {
            coset.push(e);
            e = (2 * e) % self.order;
        }
        // Expand Π (x + α^e) with coefficients in GF(2^m).
        let mut poly = vec![1usize];
        for &e in &coset {
            let root = self.exp[e];
            let mut next = vec![0usize; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] ^= c;
                next[i] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            debug_assert!(c <= 1, "minimal polynomial has GF(2) coefficients");
            acc | ((c as u64) << i)
        })
    }
}

fn degree(p: u64) -> usize {
    63 - p.leading_zeros() as usize
}

fn clmul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            out ^= a << i;
        }
    }
    out
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// All non-trivial BCH codes of the given block length, by increasing designed distance.
pub fn bch_family(block_length: usize) -> Result<Vec<BchParams>> {
    let &(m, primitive) = PRIMITIVE
        .iter()
        .find(|(m, _)| (1 << m) - 1 == block_length)
        .ok_or_else(|| {
            Error::UnsupportedSize(format!(
                "BCH block length must be 15, 31 or 63, got {block_length}"
            ))
        })?;
    let field = Field::new(m, primitive);
    let mut family: Vec<BchParams> = Vec::new();
    let mut generator = 1u64;
    let mut used: Vec<u64> = Vec::new();
    for t in 1..=block_length / 2 {
        for power in [2 * t - 1, 2 * t] {
            let minimal = field.minimal_polynomial(power);
            if !used.contains(&minimal) {
                used.push(minimal);
                generator = clmul(generator, minimal);
            }
        }
        let k = block_length - degree(generator);
        if k <= 1 {
            break;
        }
        let params = BchParams {
            block_length,
            message_length: k,
            designed_distance: 2 * t + 1,
            generator,
        };
        match family.last_mut() {
            Some(last) if last.message_length == k => *last = params,
            _ => family.push(params),
        }
    }
    Ok(family)
}

impl BchParams {
    /// Smallest standard message length `k` with `2^k ≥ class_count`.
    pub fn for_classes(block_length: usize, class_count: usize) -> Result<Self> {
        let family = bch_family(block_length)?;
        family
            .into_iter()
            .filter(|p| 1usize << p.message_length >= class_count)
            .min_by_key(|p| p.message_length)
            .ok_or_else(|| {
                Error::UnsupportedSize(format!(
                    "no BCH code of length {block_length} holds {class_count} classes"
                ))
            })
    }

    /// Systematic encoding: message bits on `x^(n-1) … x^(n-k)`, parity below.
    pub fn encode(&self, message: u64) -> u64 {
        let shifted = message << (self.block_length - self.message_length);
        shifted | poly_mod(shifted, self.generator)
    }

    /// Codeword bits, highest power first.
    fn codeword_row(&self, message: u64) -> Vec<Trit> {
        let word = self.encode(message);
        (0..self.block_length)
            .rev()
            .map(|i| Trit::from_bit(word >> i & 1 == 1))
            .collect()
    }
}

fn matrix_for(params: &BchParams, messages: &[u64]) -> Result<CodeMatrix> {
    CodeMatrix::from_rows_unchecked(messages.iter().map(|&m| params.codeword_row(m)).collect())
}

/// BCH code matrix with `class_count` rows and `block_length` columns.
///
/// Rows are the codewords of messages `1..=C`. When that selection breaks a
/// column rule, codewords are swapped against unused ones greedily, always
/// taking the swap that removes the most violations, until the matrix is valid.
pub fn bch(class_count: usize, block_length: usize) -> Result<CodeMatrix> {
    if class_count < 3 {
        return Err(Error::InvalidClassCount(class_count));
    }
    if class_count < usize::BITS as usize && block_length >= (1usize << (class_count - 1)) - 1 {
        // Beyond this no binary matrix avoids repeated or complementary columns;
        // at the bound the exhaustive code is the only candidate.
        return Err(Error::UnsupportedSize(format!(
            "{class_count} classes allow fewer than {block_length} distinct columns"
        )));
    }
    let params = BchParams::for_classes(block_length, class_count)?;
    let mut selected: Vec<u64> = (1..=class_count as u64).collect();
    let mut spare: Vec<u64> = (class_count as u64 + 1..1u64 << params.message_length).collect();
    let mut matrix = matrix_for(&params, &selected)?;
    let mut violations = matrix.violation_count();
    while violations > 0 {
        let mut best: Option<(usize, usize, usize, CodeMatrix)> = None;
        for slot in 0..selected.len() {
            for (s, &candidate) in spare.iter().enumerate() {
                let mut trial = selected.clone();
                trial[slot] = candidate;
                let trial_matrix = matrix_for(&params, &trial)?;
                let count = trial_matrix.violation_count();
                if best.as_ref().is_none_or(|b| count < b.0) {
                    best = Some((count, slot, s, trial_matrix));
                }
            }
        }
        match best {
            Some((count, slot, s, trial_matrix)) if count < violations => {
                std::mem::swap(&mut selected[slot], &mut spare[s]);
                matrix = trial_matrix;
                violations = count;
            }
            _ => {
                return Err(Error::GenerationFailed(format!(
                    "BCH({block_length},{}) selection for {class_count} classes keeps {violations} column violations",
                    params.message_length
                )))
            }
        }
    }
    Ok(matrix)
}
