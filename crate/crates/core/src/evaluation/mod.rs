//! Classification, metrics and significance testing for comparing
//! oversamplers.

mod benchmark;
mod classifier;
mod metrics;
mod report;
mod wilcoxon;

pub use benchmark::{
    benchmark, BenchmarkConfig, CellOutcome, DataSource, DatasetSpec, MetricValues, DEFAULT_K_CLS,
};
pub use classifier::{knn_classify, ScoredPredictions};
pub use metrics::{auc, confusion, metrics, ConfusionCounts, Metrics};
pub use report::{Cell, Comparison, EvaluationReport, Metric};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult, EXACT_LIMIT};
