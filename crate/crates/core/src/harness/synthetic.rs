use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// Gaussian-cluster stand-in for a face corpus: `class_count` isotropic
/// clusters in `dim` dimensions, centres drawn from a standard normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub class_count: usize,
    pub dim: usize,
    pub samples_per_class: usize,
    /// Standard deviation of every cluster, relative to the unit spread of centres.
    pub cluster_spread: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            class_count: 15,
            dim: 30,
            samples_per_class: 11,
            cluster_spread: 1.5,
            seed: 0,
        }
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    if spec.class_count == 0 || spec.dim == 0 || spec.samples_per_class == 0 {
        return Err(Error::InvalidConfig(
            "synthetic class_count, dim and samples_per_class must be positive".into(),
        ));
    }
    if !(spec.cluster_spread.is_finite() && spec.cluster_spread >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "cluster_spread {} must be finite and non-negative",
            spec.cluster_spread
        )));
    }
    let mut features = Vec::with_capacity(spec.class_count * spec.samples_per_class);
    let mut labels = Vec::with_capacity(features.capacity());
    for class in 0..spec.class_count {
        let mut rng = rng::stream(spec.seed, Domain::Synthetic, class as u64);
        let center: Vec<f64> = (0..spec.dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        for _ in 0..spec.samples_per_class {
            features.push(
                center
                    .iter()
                    .map(|c| {
                        let noise: f64 = StandardNormal.sample(&mut rng);
                        c + spec.cluster_spread * noise
                    })
                    .collect(),
            );
            labels.push(class);
        }
    }
    Dataset::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_yale_scale() {
        let data = generate_synthetic(&SyntheticSpec::default()).unwrap();
        assert_eq!((data.len(), data.dim(), data.class_count()), (165, 30, 15));
    }

    #[test]
    fn zero_spread_collapses_to_centres() {
        let spec = SyntheticSpec { cluster_spread: 0.0, ..SyntheticSpec::default() };
        let data = generate_synthetic(&spec).unwrap();
        for class in data.indices_by_class() {
            assert!(class.iter().all(|&i| data.features()[i] == data.features()[class[0]]));
        }
    }

    #[test]
    fn seeded() {
        let spec = SyntheticSpec { seed: 4, ..SyntheticSpec::default() };
        let a = generate_synthetic(&spec).unwrap();
        assert_eq!(a, generate_synthetic(&spec).unwrap());
        assert_ne!(a, generate_synthetic(&SyntheticSpec::default()).unwrap());
    }

    #[test]
    fn rejects_bad_spread() {
        let spec = SyntheticSpec { cluster_spread: -1.0, ..SyntheticSpec::default() };
        assert_eq!(generate_synthetic(&spec).unwrap_err().category(), "invalid-config");
    }
}
