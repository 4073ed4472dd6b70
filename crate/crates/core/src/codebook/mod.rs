//! ECOC code matrices.
//!
//! A [`CodeMatrix`] assigns every class a codeword over `{0, 1, *}` where `*`
//! ([`Trit::DontCare`]) marks a position that carries no training signal and
//! is ignored when measuring distances. Generators for the usual families
//! live in the submodules and are re-exported here.

mod bch;
mod generators;
mod hill_climb;

pub use bch::{bch, BchParams};
pub use generators::{
    default_dense_length, default_sparse_length, dense_random, exhaustive, one_vs_all,
    one_vs_one, sparse_random,
};
pub use hill_climb::hill_climb_improve;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single code-matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    DontCare,
}

impl Trit {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    /// Numeric target value, `None` when masked.
    pub fn value(self) -> Option<f64> {
        match self {
            Trit::Zero => Some(0.0),
            Trit::One => Some(1.0),
            Trit::DontCare => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::DontCare => '*',
        }
    }

    fn flipped(self) -> Self {
        match self {
            Trit::Zero => Trit::One,
            Trit::One => Trit::Zero,
            Trit::DontCare => Trit::DontCare,
        }
    }
}

/// Minimum row separation of a matrix and the number of bit errors it can absorb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeAnalysis {
    pub min_row_distance: usize,
    pub correcting_capability: usize,
}

/// A `class_count × code_length` table of [`Trit`]s, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeMatrix {
    class_count: usize,
    code_length: usize,
    entries: Vec<Trit>,
}

impl CodeMatrix {
    /// Builds a matrix from rows and checks every structural invariant.
    pub fn from_rows(rows: Vec<Vec<Trit>>) -> Result<Self> {
        let matrix = Self::from_rows_unchecked(rows)?;
        matrix.validate()?;
        Ok(matrix)
    }

    /// Builds a matrix requiring only a rectangular, non-empty shape.
    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<Trit>>) -> Result<Self> {
        let class_count = rows.len();
        let code_length = rows.first().map_or(0, Vec::len);
        if class_count == 0 || code_length == 0 {
            return Err(Error::InvalidMatrix("matrix has no entries".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != code_length) {
            return Err(Error::InvalidMatrix(format!(
                "row {i} has length {} but row 0 has length {code_length}",
                rows[i].len()
            )));
        }
        Ok(Self {
            class_count,
            code_length,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn code_length(&self) -> usize {
        self.code_length
    }

    pub fn get(&self, row: usize, col: usize) -> Trit {
        self.entries[row * self.code_length + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Trit) {
        self.entries[row * self.code_length + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Trit] {
        &self.entries[row * self.code_length..(row + 1) * self.code_length]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Trit]> {
        self.entries.chunks(self.code_length)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Trit> + '_ {
        (0..self.class_count).map(move |r| self.get(r, col))
    }

    pub fn is_binary(&self) -> bool {
        !self.entries.contains(&Trit::DontCare)
    }

    /// Hamming distance between two rows over their mutually non-masked positions.
    pub fn row_distance(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .filter(|(x, y)| **x != Trit::DontCare && **y != Trit::DontCare && x != y)
            .count()
    }

    /// Checks the structural invariants every usable code matrix must satisfy.
    pub fn validate(&self) -> Result<()> {
        match self.first_violation() {
            None => Ok(()),
            Some(reason) => Err(Error::InvalidMatrix(reason)),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    fn first_violation(&self) -> Option<String> {
        let mut found = None;
        self.scan_violations(&mut |reason| {
            found = Some(reason());
            false
        });
        found
    }

    /// Number of distinct invariant violations; zero iff the matrix is valid.
    pub(crate) fn violation_count(&self) -> usize {
        let mut count = 0;
        self.scan_violations(&mut |_| {
            count += 1;
            true
        });
        count
    }

    /// Feeds each violation to `report`; stops early when it returns `false`.
    fn scan_violations(&self, report: &mut dyn FnMut(&dyn Fn() -> String) -> bool) {
        if self.class_count < 3 && !report(&|| format!("{} classes; need at least 3", self.class_count)) {
            return;
        }
        for (i, row) in self.rows().enumerate() {
            if row.iter().all(|t| *t == Trit::DontCare)
                && !report(&|| format!("row {i} is entirely don't-care"))
            {
                return;
            }
        }
        for col in 0..self.code_length {
            let has_zero = self.column(col).any(|t| t == Trit::Zero);
            let has_one = self.column(col).any(|t| t == Trit::One);
            if !(has_zero && has_one)
                && !report(&|| format!("column {col} lacks a 0 or a 1"))
            {
                return;
            }
        }
        for a in 0..self.class_count {
            for b in a + 1..self.class_count {
                if self.row_distance(a, b) == 0
                    && !report(&|| format!("rows {a} and {b} coincide on shared positions"))
                {
                    return;
                }
            }
        }
        if !self.is_binary() {
            return;
        }
        for a in 0..self.code_length {
            for b in a + 1..self.code_length {
                let mut same = true;
                let mut opposite = true;
                for r in 0..self.class_count {
                    let (x, y) = (self.get(r, a), self.get(r, b));
                    same &= x == y;
                    opposite &= x != y;
                }
                if same && !report(&|| format!("columns {a} and {b} are identical")) {
                    return;
                }
                if opposite && !report(&|| format!("columns {a} and {b} are complementary")) {
                    return;
                }
            }
        }
    }

    /// Minimum pairwise row distance `d` and correcting capability `floor((d-1)/2)`.
    pub fn analyze(&self) -> CodeAnalysis {
        let mut d = usize::MAX;
        for a in 0..self.class_count {
            for b in a + 1..self.class_count {
                d = d.min(self.row_distance(a, b));
            }
        }
        if d == usize::MAX {
            d = 0;
        }
        CodeAnalysis {
            min_row_distance: d,
            correcting_capability: d.saturating_sub(1) / 2,
        }
    }

    pub fn min_row_distance(&self) -> usize {
        self.analyze().min_row_distance
    }

    /// Target vector for `label`: `Some(0.0)`/`Some(1.0)` per bit, `None` where masked.
    pub fn encode_targets(&self, label: usize) -> Result<Vec<Option<f64>>> {
        if label >= self.class_count {
            return Err(Error::InvalidLabel {
                label,
                class_count: self.class_count,
            });
        }
        Ok(self.row(label).iter().map(|t| t.value()).collect())
    }

    /// One line per row, `0`/`1`/`*` per entry, trailing newline.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text format without checking matrix invariants.
    pub fn parse_unchecked(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (index, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(Trit::Zero),
                    '1' => Ok(Trit::One),
                    '*' => Ok(Trit::DontCare),
                    other => Err(Error::parse(
                        Some(index + 1),
                        format!("unexpected character {other:?} in code matrix"),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first().map(Vec::len) {
                if row.len() != first {
                    return Err(Error::parse(
                        Some(index + 1),
                        format!("ragged row: {} entries, expected {first}", row.len()),
                    ));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(None, "code matrix text is empty"));
        }
        Self::from_rows_unchecked(rows)
    }
}

impl fmt::Display for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            for t in row {
                write!(f, "{}", t.as_char())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for CodeMatrix {
    type Err = Error;

    /// Parses the text format and validates the result.
    fn from_str(text: &str) -> Result<Self> {
        let matrix = Self::parse_unchecked(text)?;
        matrix.validate()?;
        Ok(matrix)
    }
}
