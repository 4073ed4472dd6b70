use crate::error::{Error, Result};

/// Labelled feature vectors with contiguous class labels `0..class_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    class_count: usize,
}

impl Dataset {
    /// Every class in `0..=max(label)` must occur and all vectors share one length.
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyInput("dataset has no samples".into()));
        }
        if features.len() != labels.len() {
            return Err(Error::InvalidDimension(format!(
                "{} feature vectors but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::InvalidDimension("feature vectors are empty".into()));
        }
        if let Some(i) = features.iter().position(|f| f.len() != dim) {
            return Err(Error::InvalidDimension(format!(
                "sample {i} has {} features, expected {dim}",
                features[i].len()
            )));
        }
        if features.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDimension("features must be finite".into()));
        }
        let class_count = labels.iter().max().map_or(0, |m| m + 1);
        let mut present = vec![false; class_count];
        labels.iter().for_each(|&l| present[l] = true);
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::InsufficientData(format!(
                "labels are not contiguous: class {missing} has no samples"
            )));
        }
        Ok(Self {
            features,
            labels,
            class_count,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features[0].len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Sample indices of each class, in dataset order.
    pub fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.class_count];
        for (i, &l) in self.labels.iter().enumerate() {
            by_class[l].push(i);
        }
        by_class
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_label_gaps_and_ragged_rows() {
        let err = Dataset::new(vec![vec![1.0], vec![2.0]], vec![0, 2]).unwrap_err();
        assert_eq!(err.category(), "insufficient-data");
        let err = Dataset::new(vec![vec![1.0], vec![2.0, 3.0]], vec![0, 1]).unwrap_err();
        assert_eq!(err.category(), "invalid-dimension");
        let ok = Dataset::new(vec![vec![1.0], vec![2.0], vec![3.0]], vec![1, 0, 1]).unwrap();
        assert_eq!(ok.indices_by_class(), vec![vec![1], vec![0, 2]]);
    }
}
