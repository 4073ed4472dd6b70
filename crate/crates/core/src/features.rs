//! PCA representation stage.
//!
//! Inputs are mean-centred only; no per-feature variance scaling is applied.
//! When samples are fewer than dimensions the eigenproblem is solved on the
//! `N × N` Gram matrix and mapped back, which is what makes 1024-pixel images
//! with a few hundred samples cheap.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative eigenvalue floor below which a direction counts as absent.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// `output_dim × input_dim`, row-major; rows are unit eigenvectors.
    components: Vec<f64>,
    eigenvalues: Vec<f64>,
    input_dim: usize,
    output_dim: usize,
}

impl PcaModel {
    /// Fits the top-`k` principal components of `samples`.
    pub fn fit<S: AsRef<[f64]>>(samples: &[S], k: usize) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InsufficientData(format!(
                "PCA needs at least 2 samples, got {n}"
            )));
        }
        let l = samples[0].as_ref().len();
        if let Some(i) = samples.iter().position(|s| s.as_ref().len() != l) {
            return Err(Error::InvalidDimension(format!(
                "sample {i} has {} features, sample 0 has {l}",
                samples[i].as_ref().len()
            )));
        }
        let max_k = (n - 1).min(l);
        if k == 0 || k > max_k {
            return Err(Error::InvalidDimension(format!(
                "requested {k} components; valid range is 1..={max_k}"
            )));
        }

        let mut mean = vec![0.0; l];
        for s in samples {
            for (m, x) in mean.iter_mut().zip(s.as_ref()) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let centered = DMatrix::from_fn(n, l, |i, j| samples[i].as_ref()[j] - mean[j]);
        let scale = 1.0 / (n as f64 - 1.0);

        let (values, vectors) = if l > n {
            let gram = (&centered * centered.transpose()) * scale;
            let (values, gram_vectors) = sorted_eigen(gram, k);
            // Map v ↦ Xᵀv / sqrt((N-1) λ), which is a unit eigenvector of the covariance.
            let mut vectors = Vec::with_capacity(k);
            for (value, v) in values.iter().zip(&gram_vectors) {
                let mut u = centered.transpose() * v;
                let norm = u.norm();
                if *value > 0.0 && norm > 0.0 {
                    u /= norm;
                }
                vectors.push(u);
            }
            (values, vectors)
        } else {
            let covariance = (centered.transpose() * &centered) * scale;
            sorted_eigen(covariance, k)
        };

        let largest = values.first().copied().unwrap_or(0.0).max(0.0);
        let achievable = values
            .iter()
            .filter(|v| **v > RANK_TOLERANCE * largest && **v > 0.0)
            .count();
        if achievable < k {
            return Err(Error::RankDeficient {
                requested: k,
                achievable,
            });
        }

        let mut components = Vec::with_capacity(k * l);
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(k);
        for mut v in vectors {
            // Re-orthogonalise against earlier components to tighten round-off.
            for b in &basis {
                let overlap = b.dot(&v);
                v.axpy(-overlap, b, 1.0);
            }
            v /= v.norm();
            let pivot = v
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best })
                .0;
            if v[pivot] < 0.0 {
                v.neg_mut();
            }
            components.extend(v.iter().copied());
            basis.push(v);
        }

        Ok(Self {
            mean,
            components,
            eigenvalues: values.into_iter().map(|v| v.max(0.0)).collect(),
            input_dim: l,
            output_dim: k,
        })
    }

    /// Rebuilds a model from stored parts, checking shapes.
    pub fn from_parts(
        mean: Vec<f64>,
        components: Vec<f64>,
        eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        let input_dim = mean.len();
        let output_dim = eigenvalues.len();
        if input_dim == 0 || output_dim == 0 || components.len() != input_dim * output_dim {
            return Err(Error::InvalidDimension(format!(
                "PCA parts: mean {input_dim}, eigenvalues {output_dim}, components {}",
                components.len()
            )));
        }
        if mean.iter().chain(&components).chain(&eigenvalues).any(|x| !x.is_finite()) {
            return Err(Error::InvalidDimension("PCA parts contain non-finite values".into()));
        }
        Ok(Self {
            mean,
            components,
            eigenvalues,
            input_dim,
            output_dim,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-major `output_dim × input_dim` component matrix.
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &[f64] {
        &self.components[index * self.input_dim..(index + 1) * self.input_dim]
    }

    /// `components · (x − mean)`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::InvalidDimension(format!(
                "expected {} features, got {}",
                self.input_dim,
                x.len()
            )));
        }
        Ok((0..self.output_dim)
            .map(|c| {
                self.component(c)
                    .iter()
                    .zip(x.iter().zip(&self.mean))
                    .map(|(w, (xi, mi))| w * (xi - mi))
                    .sum()
            })
            .collect())
    }

    /// `mean + componentsᵀ · z`.
    pub fn reconstruct(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.output_dim {
            return Err(Error::InvalidDimension(format!(
                "expected {} coordinates, got {}",
                self.output_dim,
                z.len()
            )));
        }
        let mut out = self.mean.clone();
        for (c, zc) in z.iter().enumerate() {
            for (o, w) in out.iter_mut().zip(self.component(c)) {
                *o += zc * w;
            }
        }
        Ok(out)
    }
}

/// Top-`k` eigenpairs of a symmetric matrix, eigenvalues descending.
fn sorted_eigen(matrix: DMatrix<f64>, k: usize) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eigen = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));
    order.truncate(k);
    let values = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eigen.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}
