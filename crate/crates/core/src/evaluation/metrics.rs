use serde::{Deserialize, Serialize};

use super::classifier::ScoredPredictions;
use crate::{OhitError, Result};

/// Confusion counts with the minority as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(sp: &ScoredPredictions) -> ConfusionCounts {
    let mut c = ConfusionCounts::default();
    for (&truth, &pred) in sp.labels.iter().zip(&sp.predictions) {
        match (truth, pred) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    c
}

/// Threshold metrics. `precision` and `f1` are NaN when undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub recall: f64,
    pub specificity: f64,
    pub precision: f64,
    pub f1: f64,
    pub gmean: f64,
}

impl Metrics {
    /// Derives F1 and G-mean from recall, specificity and precision.
    pub fn from_rates(recall: f64, specificity: f64, precision: f64) -> Self {
        let f1 = if precision.is_nan() || precision + recall == 0.0 {
            f64::NAN
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            recall,
            specificity,
            precision,
            f1,
            gmean: (recall * specificity).sqrt(),
        }
    }
}

pub fn metrics(c: &ConfusionCounts) -> Result<Metrics> {
    if c.tp + c.fn_ == 0 || c.tn + c.fp == 0 {
        return Err(OhitError::DegenerateEvaluation(
            "test set must contain both classes".into(),
        ));
    }
    let recall = c.tp as f64 / (c.tp + c.fn_) as f64;
    let specificity = c.tn as f64 / (c.tn + c.fp) as f64;
    let precision = if c.tp + c.fp == 0 {
        f64::NAN
    } else {
        c.tp as f64 / (c.tp + c.fp) as f64
    };
    Ok(Metrics::from_rates(recall, specificity, precision))
}

/// Area under the ROC curve as the normalized Mann–Whitney statistic, with
/// midranks for tied scores.
pub fn auc(sp: &ScoredPredictions) -> Result<f64> {
    let n_pos = sp.labels.iter().filter(|&&l| l).count();
    let n_neg = sp.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(OhitError::DegenerateEvaluation(
            "AUC needs both classes".into(),
        ));
    }
    let mut order: Vec<usize> = (0..sp.len()).collect();
    order.sort_by(|&a, &b| sp.scores[a].total_cmp(&sp.scores[b]));

    let mut pos_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && sp.scores[order[j + 1]] == sp.scores[order[i]] {
            j += 1;
        }
        // ranks i+1..=j+1 share their mean
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            if sp.labels[idx] {
                pos_rank_sum += mid;
            }
        }
        i = j + 1;
    }
    let np = n_pos as f64;
    Ok((pos_rank_sum - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sp(scores: &[f64], labels: &[bool]) -> ScoredPredictions {
        let preds = scores.iter().map(|&s| s >= 0.5).collect();
        ScoredPredictions::new(scores.to_vec(), labels.to_vec(), preds).unwrap()
    }

    #[test]
    fn counts() {
        let all_right = sp(&[1.0, 0.9, 0.1, 0.0], &[true, true, false, false]);
        let c = confusion(&all_right);
        assert_eq!((c.fp, c.fn_), (0, 0));
        let all_neg = sp(&[0.1, 0.2, 0.3], &[true, false, false]);
        let c = confusion(&all_neg);
        assert_eq!((c.tp, c.fp, c.tn, c.fn_), (0, 0, 2, 1));
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn derived_metrics() {
        let m = Metrics::from_rates(0.771, 0.796, 0.561);
        assert_abs_diff_eq!(m.gmean, 0.783, epsilon = 1e-3);
        assert_abs_diff_eq!(m.f1, 0.649, epsilon = 1e-3);
    }

    #[test]
    fn undefined_precision() {
        let m = metrics(&ConfusionCounts {
            tp: 0,
            fp: 0,
            tn: 30,
            fn_: 5,
        })
        .unwrap();
        assert!(m.precision.is_nan());
        assert!(m.f1.is_nan());
        assert_eq!(m.gmean, 0.0);
        assert_eq!(m.recall, 0.0);
    }

    #[test]
    fn zero_precision_and_recall() {
        let m = metrics(&ConfusionCounts {
            tp: 0,
            fp: 3,
            tn: 3,
            fn_: 2,
        })
        .unwrap();
        assert_eq!(m.precision, 0.0);
        assert!(m.f1.is_nan());
    }

    #[test]
    fn missing_class() {
        let c = ConfusionCounts {
            tp: 3,
            fp: 0,
            tn: 0,
            fn_: 1,
        };
        assert!(matches!(
            metrics(&c),
            Err(OhitError::DegenerateEvaluation(_))
        ));
        assert!(auc(&sp(&[0.1, 0.2], &[true, true])).is_err());
    }

    #[test]
    fn auc_extremes() {
        assert_eq!(
            auc(&sp(&[0.9, 0.8, 0.1, 0.2], &[true, true, false, false])).unwrap(),
            1.0
        );
        assert_eq!(
            auc(&sp(&[0.5; 4], &[true, false, true, false])).unwrap(),
            0.5
        );
        assert_eq!(auc(&sp(&[0.1, 0.9], &[true, false])).unwrap(), 0.0);
    }
}
