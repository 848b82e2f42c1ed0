//! LDA, QDA and KNN producing per-class probabilities.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

pub const DEFAULT_KNN_K: usize = 5;
pub const DEFAULT_QDA_REG: f64 = 1e-3;
/// Ridge on the pooled LDA covariance, relative to its mean variance.
pub const LDA_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierKind {
    Lda,
    Qda { reg: f64 },
    Knn { k: usize },
}

impl ClassifierKind {
    pub const DEFAULT_SET: [ClassifierKind; 3] = [
        ClassifierKind::Lda,
        ClassifierKind::Qda {
            reg: DEFAULT_QDA_REG,
        },
        ClassifierKind::Knn { k: DEFAULT_KNN_K },
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Lda => "lda",
            ClassifierKind::Qda { .. } => "qda",
            ClassifierKind::Knn { .. } => "knn",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ClassifierKind::Qda { reg } if !(reg >= 0.0 && reg.is_finite()) => Err(Error::Config(
                format!("QDA regularization must be nonnegative, got {reg}"),
            )),
            ClassifierKind::Knn { k: 0 } => Err(Error::Config("KNN needs k >= 1".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lda" => Ok(ClassifierKind::Lda),
            "qda" => Ok(ClassifierKind::Qda {
                reg: DEFAULT_QDA_REG,
            }),
            "knn" => Ok(ClassifierKind::Knn { k: DEFAULT_KNN_K }),
            other => Err(Error::Config(format!("unknown classifier '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
struct Gaussian {
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    /// `-0.5 log det(Sigma)`, zero for the shared-covariance case.
    log_norm: f64,
    log_prior: f64,
}

impl Gaussian {
    fn log_density(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.mean;
        let z = self.chol.l().solve_lower_triangular(&d).expect("triangular factor");
        self.log_prior + self.log_norm - 0.5 * z.norm_squared()
    }
}

#[derive(Debug, Clone)]
enum Params {
    Gaussians(Vec<Gaussian>),
    Knn {
        k: usize,
        train: DMatrix<f64>,
        labels: Vec<usize>,
    },
}

/// A fitted classifier; immutable.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    kind: ClassifierKind,
    n_classes: usize,
    dim: usize,
    params: Params,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The stored training matrix, for KNN models.
    pub fn training_set(&self) -> Option<&DMatrix<f64>> {
        match &self.params {
            Params::Knn { train, .. } => Some(train),
            Params::Gaussians(_) => None,
        }
    }
}

fn class_counts(labels: &[usize]) -> Result<Vec<usize>> {
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    if n_classes < 2 || counts.iter().any(|&c| c < 2) {
        return Err(Error::NotEnoughClasses(format!("class counts {counts:?}")));
    }
    Ok(counts)
}

fn class_mean(x: &DMatrix<f64>, labels: &[usize], class: usize, count: usize) -> DVector<f64> {
    let mut m = DVector::zeros(x.ncols());
    for (row, &l) in x.row_iter().zip(labels) {
        if l == class {
            m += row.transpose();
        }
    }
    m / count as f64
}

fn scatter(x: &DMatrix<f64>, labels: &[usize], class: usize, mean: &DVector<f64>) -> DMatrix<f64> {
    let dim = x.ncols();
    let mut s = DMatrix::zeros(dim, dim);
    for (row, &l) in x.row_iter().zip(labels) {
        if l == class {
            let d = row.transpose() - mean;
            s += &d * d.transpose();
        }
    }
    s
}

fn regularized_cholesky(mut cov: DMatrix<f64>, rel: f64, fallback_scale: f64) -> Result<Cholesky<f64, Dyn>> {
    let dim = cov.nrows();
    let mut scale = cov.trace() / dim as f64;
    if !(scale > 0.0) {
        scale = fallback_scale;
    }
    if !scale.is_finite() {
        return Err(Error::DegenerateFeatures("non-finite covariance".into()));
    }
    let ridge = rel * scale;
    for i in 0..dim {
        cov[(i, i)] += ridge;
    }
    Cholesky::new(cov).ok_or_else(|| {
        Error::DegenerateFeatures("covariance not positive definite after regularization".into())
    })
}

pub fn fit(kind: ClassifierKind, features: &DMatrix<f64>, labels: &[usize]) -> Result<TrainedModel> {
    kind.validate()?;
    if features.nrows() != labels.len() {
        return Err(Error::ShapeError(format!(
            "{} feature rows for {} labels",
            features.nrows(),
            labels.len()
        )));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFeatures("non-finite feature value".into()));
    }
    let counts = class_counts(labels)?;
    let n_classes = counts.len();
    let n = labels.len() as f64;
    let dim = features.ncols();

    let params = match kind {
        ClassifierKind::Knn { k } => Params::Knn {
            k: k.min(labels.len()),
            train: features.clone(),
            labels: labels.to_vec(),
        },
        ClassifierKind::Lda => {
            let means: Vec<_> = (0..n_classes)
                .map(|c| class_mean(features, labels, c, counts[c]))
                .collect();
            let mut pooled = DMatrix::zeros(dim, dim);
            for (c, m) in means.iter().enumerate() {
                pooled += scatter(features, labels, c, m);
            }
            pooled /= (labels.len() - n_classes).max(1) as f64;
            let chol = regularized_cholesky(pooled, LDA_RIDGE, 1.0)?;
            Params::Gaussians(
                means
                    .into_iter()
                    .zip(&counts)
                    .map(|(mean, &c)| Gaussian {
                        mean,
                        chol: chol.clone(),
                        log_norm: 0.0,
                        log_prior: (c as f64 / n).ln(),
                    })
                    .collect(),
            )
        }
        ClassifierKind::Qda { reg } => {
            let mut total_var = 0.0;
            let mut parts = Vec::with_capacity(n_classes);
            for (c, &count) in counts.iter().enumerate() {
                let mean = class_mean(features, labels, c, count);
                let cov = scatter(features, labels, c, &mean) / (count - 1) as f64;
                total_var += cov.trace() / dim as f64;
                parts.push((mean, cov));
            }
            // a class with zero spread borrows the average scale of the others
            let fallback = total_var / n_classes as f64;
            let mut gaussians = Vec::with_capacity(n_classes);
            for (c, (mean, cov)) in parts.into_iter().enumerate() {
                let chol = regularized_cholesky(cov, reg, fallback)?;
                let log_det: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
                gaussians.push(Gaussian {
                    mean,
                    chol,
                    log_norm: -0.5 * log_det,
                    log_prior: (counts[c] as f64 / n).ln(),
                });
            }
            Params::Gaussians(gaussians)
        }
    };
    Ok(TrainedModel {
        kind,
        n_classes,
        dim,
        params,
    })
}

/// `samples x classes` matrix of posterior probabilities.
pub fn predict_proba(model: &TrainedModel, features: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if features.ncols() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            got: features.ncols(),
        });
    }
    let c = model.n_classes;
    let mut out = DMatrix::zeros(features.nrows(), c);
    match &model.params {
        Params::Gaussians(gs) => {
            for (r, row) in features.row_iter().enumerate() {
                let x = row.transpose();
                let logs: Vec<f64> = gs.iter().map(|g| g.log_density(&x)).collect();
                let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
                let total: f64 = exps.iter().sum();
                for (j, e) in exps.iter().enumerate() {
                    out[(r, j)] = e / total;
                }
            }
        }
        Params::Knn { k, train, labels } => {
            let mut dist: Vec<(f64, usize)> = Vec::with_capacity(train.nrows());
            for (r, row) in features.row_iter().enumerate() {
                dist.clear();
                dist.extend(
                    train
                        .row_iter()
                        .enumerate()
                        .map(|(i, t)| ((t - row).norm_squared(), i)),
                );
                dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let mut votes = vec![0usize; c];
                for &(_, i) in &dist[..*k] {
                    votes[labels[i]] += 1;
                }
                for (j, v) in votes.into_iter().enumerate() {
                    out[(r, j)] = v as f64 / *k as f64;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn blobs(seed: u64, n: usize, sep: f64) -> (DMatrix<f64>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = DMatrix::zeros(2 * n, 3);
        let mut y = Vec::new();
        for i in 0..2 * n {
            let class = i % 2;
            for j in 0..3 {
                let v: f64 = rng.sample(StandardNormal);
                x[(i, j)] = v + if j == 0 { sep * class as f64 } else { 0.0 };
            }
            y.push(class);
        }
        (x, y)
    }

    fn accuracy(p: &DMatrix<f64>, y: &[usize]) -> f64 {
        let hits = p
            .row_iter()
            .zip(y)
            .filter(|(row, &l)| row.transpose().argmax().0 == l)
            .count();
        hits as f64 / y.len() as f64
    }

    #[test]
    fn separated_blobs() {
        let (x, y) = blobs(1, 50, 5.0);
        for kind in ClassifierKind::DEFAULT_SET {
            let m = fit(kind, &x, &y).unwrap();
            let p = predict_proba(&m, &x).unwrap();
            assert!(accuracy(&p, &y) >= 0.95, "{kind}");
            for row in p.row_iter() {
                assert!((row.sum() - 1.0).abs() < 1e-9);
                assert!(row.iter().all(|v| *v >= 0.0));
            }
        }
        let lda = fit(ClassifierKind::Lda, &x, &y).unwrap();
        let at_mean = DMatrix::from_row_slice(1, 3, &[5.0, 0.0, 0.0]);
        assert!(predict_proba(&lda, &at_mean).unwrap()[(0, 1)] >= 0.9);
    }

    #[test]
    fn knn_rules() {
        let x = DMatrix::from_row_slice(4, 1, &[0.0, 1.0, 2.0, 3.0]);
        let y = [0, 0, 1, 1];
        let m = fit(ClassifierKind::Knn { k: 1 }, &x, &y).unwrap();
        assert_eq!(m.training_set().unwrap(), &x);
        let p = predict_proba(&m, &DMatrix::from_row_slice(1, 1, &[2.0])).unwrap();
        assert_eq!(p.row(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 1.0]);

        let m = fit(ClassifierKind::Knn { k: 2 }, &x, &y).unwrap();
        let p = predict_proba(&m, &DMatrix::from_row_slice(1, 1, &[1.5])).unwrap();
        assert_eq!(p.row(0).iter().copied().collect::<Vec<_>>(), vec![0.5, 0.5]);

        // k larger than the training set is capped
        let m = fit(ClassifierKind::Knn { k: 50 }, &x, &y).unwrap();
        let p = predict_proba(&m, &x).unwrap();
        assert!(p.iter().all(|v| *v == 0.5));
    }

    #[test]
    fn errors_and_degenerate_columns() {
        let (x, y) = blobs(2, 10, 3.0);
        assert!(matches!(
            fit(ClassifierKind::Lda, &x, &[0; 20]),
            Err(Error::NotEnoughClasses(_))
        ));
        let m = fit(ClassifierKind::Lda, &x, &y).unwrap();
        assert!(matches!(
            predict_proba(&m, &DMatrix::zeros(1, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
        // a duplicated column survives through regularization
        let mut dup = x.clone().insert_column(3, 0.0);
        for i in 0..dup.nrows() {
            dup[(i, 3)] = dup[(i, 0)];
        }
        for kind in ClassifierKind::DEFAULT_SET {
            let m = fit(kind, &dup, &y).unwrap();
            let p = predict_proba(&m, &dup).unwrap();
            assert!(p.iter().all(|v| v.is_finite()));
        }
        assert!(matches!(
            fit(ClassifierKind::Qda { reg: 0.0 }, &dup, &y),
            Err(Error::DegenerateFeatures(_))
        ));
        assert!(fit(ClassifierKind::Knn { k: 0 }, &x, &y).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lda_translation_invariant(seed in 0u64..1000, shift in prop::collection::vec(-50.0..50.0f64, 3)) {
            let (x, y) = blobs(seed, 12, 1.5);
            let mut moved = x.clone();
            for mut row in moved.row_iter_mut() {
                for j in 0..3 {
                    row[j] += shift[j];
                }
            }
            let a = predict_proba(&fit(ClassifierKind::Lda, &x, &y).unwrap(), &x).unwrap();
            let b = predict_proba(&fit(ClassifierKind::Lda, &moved, &y).unwrap(), &moved).unwrap();
            prop_assert!((a - b).amax() < 1e-9);
        }

        #[test]
        fn rows_are_distributions(seed in 0u64..1000, q in prop::collection::vec(-10.0..10.0f64, 3)) {
            let (x, y) = blobs(seed, 8, 0.5);
            let query = DMatrix::from_row_slice(1, 3, &q);
            for kind in ClassifierKind::DEFAULT_SET {
                let p = predict_proba(&fit(kind, &x, &y).unwrap(), &query).unwrap();
                prop_assert!((p.sum() - 1.0).abs() < 1e-9);
                prop_assert!(p.iter().all(|v| *v >= 0.0));
            }
        }

        #[test]
        fn knn_permutation_invariant(seed in 0u64..1000) {
            let (x, y) = blobs(seed, 10, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..x.nrows()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let xp = x.select_rows(&perm);
            let yp: Vec<usize> = perm.iter().map(|&i| y[i]).collect();
            let kind = ClassifierKind::Knn { k: 5 };
            let a = predict_proba(&fit(kind, &x, &y).unwrap(), &x).unwrap();
            let b = predict_proba(&fit(kind, &xp, &yp).unwrap(), &x).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
