//! Datasets, train/val/test splits, and preprocessing state.
//!
//! Preprocessing statistics are always fitted on the training rows only and
//! then applied unchanged everywhere, so no information leaks across splits.
//! Targets are divided by the training-split target mean, matching the usual
//! benchmark protocol; a near-zero mean disables the division and sets a
//! flag instead of blowing up.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SeededRng;
use crate::Real;

/// Feature matrix plus target vector, optionally preprocessed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Matrix,
    pub targets: Vec<Real>,
    pub name: String,
    pub preprocessing: Option<Preprocessing>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, features: Matrix, targets: Vec<Real>) -> Result<Self> {
        if features.rows() != targets.len() {
            return Err(Error::shape(format!(
                "feature rows {} != target count {}",
                features.rows(),
                targets.len()
            )));
        }
        Ok(Self {
            features,
            targets,
            name: name.into(),
            preprocessing: None,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.features.cols()
    }
}

/// Per-feature standardization plus target mean division, fitted on train.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    pub feature_means: Vec<Real>,
    pub feature_stds: Vec<Real>,
    pub target_mean: Real,
    /// Set when the training target mean was too close to zero to divide by.
    pub target_mean_skipped: bool,
}

impl Preprocessing {
    const ZERO_MEAN_EPS: Real = 1e-12;

    /// Fit on the rows selected by `train_idx` (population std; constant
    /// columns get std clamped to 1 so they standardize to all-zero).
    pub fn fit(dataset: &Dataset, train_idx: &[usize]) -> Result<Self> {
        if train_idx.is_empty() {
            return Err(Error::config("cannot fit preprocessing on an empty split".to_string()));
        }
        let d = dataset.feature_count();
        let n = train_idx.len() as Real;
        let mut means = vec![0.0; d];
        for &i in train_idx {
            for (j, m) in means.iter_mut().enumerate() {
                *m += dataset.features.get(i, j);
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut stds = vec![0.0; d];
        for &i in train_idx {
            for j in 0..d {
                let dev = dataset.features.get(i, j) - means[j];
                stds[j] += dev * dev;
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
            if *s < 1e-12 {
                *s = 1.0;
            }
        }
        let target_mean =
            train_idx.iter().map(|&i| dataset.targets[i]).sum::<Real>() / n;
        let skipped = target_mean.abs() < Self::ZERO_MEAN_EPS;
        Ok(Self {
            feature_means: means,
            feature_stds: stds,
            target_mean: if skipped { 1.0 } else { target_mean },
            target_mean_skipped: skipped,
        })
    }

    /// Apply to a whole dataset, returning a preprocessed copy.
    pub fn apply(&self, dataset: &Dataset) -> Result<Dataset> {
        if dataset.feature_count() != self.feature_means.len() {
            return Err(Error::shape(format!(
                "preprocessing fitted on {} features, dataset has {}",
                self.feature_means.len(),
                dataset.feature_count()
            )));
        }
        let mut features = dataset.features.clone();
        for i in 0..features.rows() {
            let row = features.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.feature_means[j]) / self.feature_stds[j];
            }
        }
        let targets = dataset
            .targets
            .iter()
            .map(|&y| y / self.target_mean)
            .collect();
        Ok(Dataset {
            features,
            targets,
            name: dataset.name.clone(),
            preprocessing: Some(self.clone()),
        })
    }

    /// Undo the target transform (features are not needed back).
    pub fn un_preprocess_target(&self, y: Real) -> Real {
        y * self.target_mean
    }

    /// Interval widths scale by the same factor as targets.
    pub fn target_scale(&self) -> Real {
        self.target_mean
    }
}

/// Disjoint index lists partitioning `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Split ratios; must sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: Real,
    pub val: Real,
    pub test: Real,
}

impl SplitRatios {
    /// Default benchmark protocol split.
    pub const WIDTH_PROTOCOL: SplitRatios = SplitRatios {
        train: 0.6,
        val: 0.2,
        test: 0.2,
    };

    /// Orthogonality protocol split: 0.4 test, then 0.9/0.1 train/val.
    pub const ORTHOGONALITY_PROTOCOL: SplitRatios = SplitRatios {
        train: 0.54,
        val: 0.06,
        test: 0.40,
    };

    pub fn validate(&self) -> Result<()> {
        let sum = self.train + self.val + self.test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("split ratios must sum to 1, got {sum}")));
        }
        if self.train <= 0.0 || self.val < 0.0 || self.test < 0.0 {
            return Err(Error::config("split ratios must be nonnegative with train > 0".to_string()));
        }
        Ok(())
    }
}

impl Split {
    /// Seeded shuffle followed by contiguous slicing.
    pub fn generate(n: usize, ratios: SplitRatios, seed: u64) -> Result<Split> {
        ratios.validate()?;
        if n == 0 {
            return Err(Error::config("cannot split an empty dataset".to_string()));
        }
        let mut rng = SeededRng::new(seed);
        let perm = rng.permutation(n);
        let n_train = (ratios.train * n as Real).floor() as usize;
        let n_val = (ratios.val * n as Real).floor() as usize;
        if n_train == 0 || n_train + n_val >= n {
            return Err(Error::config(format!(
                "split ratios leave an empty split at n = {n}"
            )));
        }
        Ok(Split {
            train: perm[..n_train].to_vec(),
            val: perm[n_train..n_train + n_val].to_vec(),
            test: perm[n_train + n_val..].to_vec(),
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_dataset(n: usize) -> Dataset {
        let rows: Vec<Vec<Real>> = (0..n).map(|i| vec![i as Real, (i * i) as Real]).collect();
        let targets: Vec<Real> = (0..n).map(|i| 2.0 + i as Real).collect();
        Dataset::new("toy", Matrix::from_rows(&rows).unwrap(), targets).unwrap()
    }

    #[test]
    fn split_sizes_and_partition() {
        let split = Split::generate(10, SplitRatios::WIDTH_PROTOCOL, 0).unwrap();
        assert_eq!(split.train.len(), 6);
        assert_eq!(split.val.len(), 2);
        assert_eq!(split.test.len(), 2);
        let mut all: Vec<usize> = split
            .train
            .iter()
            .chain(&split.val)
            .chain(&split.test)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn split_is_deterministic() {
        let a = Split::generate(100, SplitRatios::WIDTH_PROTOCOL, 42).unwrap();
        let b = Split::generate(100, SplitRatios::WIDTH_PROTOCOL, 42).unwrap();
        assert_eq!(a, b);
        let c = Split::generate(100, SplitRatios::WIDTH_PROTOCOL, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn preprocessing_standardizes_train_rows() {
        let ds = toy_dataset(50);
        let split = Split::generate(50, SplitRatios::WIDTH_PROTOCOL, 1).unwrap();
        let prep = Preprocessing::fit(&ds, &split.train).unwrap();
        let out = prep.apply(&ds).unwrap();
        for j in 0..ds.feature_count() {
            let vals: Vec<Real> = split.train.iter().map(|&i| out.features.get(i, j)).collect();
            let mean = vals.iter().sum::<Real>() / vals.len() as Real;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<Real>() / vals.len() as Real;
            assert!(mean.abs() < 1e-10, "col {j} mean {mean}");
            assert!((var.sqrt() - 1.0).abs() < 1e-6, "col {j} std {}", var.sqrt());
        }
    }

    #[test]
    fn target_round_trip() {
        let ds = toy_dataset(20);
        let split = Split::generate(20, SplitRatios::WIDTH_PROTOCOL, 2).unwrap();
        let prep = Preprocessing::fit(&ds, &split.train).unwrap();
        let out = prep.apply(&ds).unwrap();
        for i in 0..ds.len() {
            let back = prep.un_preprocess_target(out.targets[i]);
            assert!((back - ds.targets[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_mean_target_skips_division() {
        let rows: Vec<Vec<Real>> = (0..4).map(|i| vec![i as Real]).collect();
        let ds = Dataset::new(
            "zero",
            Matrix::from_rows(&rows).unwrap(),
            vec![-1.0, 1.0, -2.0, 2.0],
        )
        .unwrap();
        let prep = Preprocessing::fit(&ds, &[0, 1, 2, 3]).unwrap();
        assert!(prep.target_mean_skipped);
        let out = prep.apply(&ds).unwrap();
        assert_eq!(out.targets, ds.targets);
    }

    #[test]
    fn constant_feature_column_standardizes_to_zero() {
        let rows: Vec<Vec<Real>> = (0..5).map(|_| vec![3.0]).collect();
        let ds = Dataset::new(
            "const",
            Matrix::from_rows(&rows).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
        )
        .unwrap();
        let prep = Preprocessing::fit(&ds, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(prep.feature_stds, vec![1.0]);
        let out = prep.apply(&ds).unwrap();
        assert!(out.features.column(0).iter().all(|&v| v == 0.0));
    }
}
