use ndarray::{concatenate, Axis};

use crate::datasets::BinaryDataset;
use crate::linalg::squared_euclidean;
use crate::par::map_indices;
use crate::{OhitError, Result};

/// Per-test-sample scores and thresholded predictions. `true` marks the
/// minority (positive) class.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPredictions {
    /// Higher means more minority-like.
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
    pub predictions: Vec<bool>,
}

impl ScoredPredictions {
    pub fn new(scores: Vec<f64>, labels: Vec<bool>, predictions: Vec<bool>) -> Result<Self> {
        if scores.len() != labels.len() || labels.len() != predictions.len() {
            return Err(OhitError::Contract(format!(
                "{} scores, {} labels, {} predictions",
                scores.len(),
                labels.len(),
                predictions.len()
            )));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(OhitError::Contract("non-finite score".into()));
        }
        Ok(Self {
            scores,
            labels,
            predictions,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// k-NN classifier. The score of a test sample is the minority fraction
/// among its `k` nearest training samples (ties by lower index, minority
/// rows first); scores of at least 0.5 predict the minority class.
///
/// Test samples are ordered minority first, then majority.
pub fn knn_classify(
    train: &BinaryDataset,
    test: &BinaryDataset,
    k: usize,
) -> Result<ScoredPredictions> {
    if train.series_len() != test.series_len() {
        return Err(OhitError::Contract(format!(
            "train series have length {}, test series {}",
            train.series_len(),
            test.series_len()
        )));
    }
    if k == 0 {
        return Err(OhitError::Parameter("k_cls must be at least 1".into()));
    }
    let n_train = train.n_min() + train.n_maj();
    let k = if k > n_train {
        log::warn!("k_cls = {k} exceeds {n_train} training samples; clamping");
        n_train
    } else {
        k
    };
    let train_x =
        concatenate(Axis(0), &[train.minority(), train.majority()]).expect("matching widths");
    let test_x =
        concatenate(Axis(0), &[test.minority(), test.majority()]).expect("matching widths");
    let n_train_min = train.n_min();

    let scores = map_indices(test_x.nrows(), |t| {
        let q = test_x.row(t);
        let mut d: Vec<(f64, usize)> = (0..n_train)
            .map(|i| (squared_euclidean(q, train_x.row(i)), i))
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, cmp);
        }
        let hits = d[..k].iter().filter(|&&(_, i)| i < n_train_min).count();
        hits as f64 / k as f64
    });
    let labels = (0..test_x.nrows()).map(|i| i < test.n_min()).collect();
    let predictions = scores.iter().map(|&s| s >= 0.5).collect();
    ScoredPredictions::new(scores, labels, predictions)
}
