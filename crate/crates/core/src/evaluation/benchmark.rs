use std::path::PathBuf;

use super::classifier::knn_classify;
use super::metrics::{auc, confusion, metrics};
use super::report::{Cell, EvaluationReport, Metric};
pub use super::report::{CellOutcome, MetricValues};
use crate::datasets::{binarize, load_series, z_normalize_row, BinaryDataset};
use crate::par::map_slice;
use crate::pipeline::{resample, Method, Mode, OhitConfig};
use crate::Result;

pub const DEFAULT_K_CLS: usize = 5;

#[derive(Debug, Clone)]
pub enum DataSource {
    Files {
        train: PathBuf,
        test: PathBuf,
        delimiter: char,
    },
    InMemory {
        train: Box<BinaryDataset>,
        test: Box<BinaryDataset>,
    },
}

#[derive(Debug, Clone)]
pub struct DatasetSpec {
    pub name: String,
    pub source: DataSource,
    /// Raw tags forming the minority class (ignored for in-memory data).
    pub minority: Vec<String>,
}

impl DatasetSpec {
    fn load(&self) -> Result<(BinaryDataset, BinaryDataset)> {
        match &self.source {
            DataSource::InMemory { train, test } => Ok(((**train).clone(), (**test).clone())),
            DataSource::Files {
                train,
                test,
                delimiter,
            } => {
                let train = binarize(&load_series(train, *delimiter)?, &self.minority)?;
                let test = binarize(&load_series(test, *delimiter)?, &self.minority)?;
                Ok((train, test))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    /// Oversampling settings; its seed is replaced by each entry of `seeds`.
    pub ohit: OhitConfig,
    /// Every cell is averaged over one run per seed.
    pub seeds: Vec<u64>,
    pub k_cls: usize,
    /// Method the others are tested against; defaults to full OHIT when
    /// present, else the first method.
    pub reference: Option<Method>,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            ohit: OhitConfig::default(),
            seeds: vec![0],
            k_cls: DEFAULT_K_CLS,
            reference: None,
        }
    }
}

fn one_run(
    train: &BinaryDataset,
    test: &BinaryDataset,
    method: Method,
    cfg: &BenchmarkConfig,
    seed: u64,
) -> Result<MetricValues> {
    let ohit_cfg = OhitConfig {
        seed,
        ..cfg.ohit.clone()
    };
    let resampled = resample(train, method, &ohit_cfg)?;
    let sp = knn_classify(&resampled.data, test, cfg.k_cls)?;
    let m = metrics(&confusion(&sp))?;
    Ok(MetricValues {
        f1: m.f1,
        gmean: m.gmean,
        auc: auc(&sp)?,
        recall: m.recall,
        specificity: m.specificity,
        precision: m.precision,
    })
}

fn run_cell(
    train: &BinaryDataset,
    test: &BinaryDataset,
    method: Method,
    cfg: &BenchmarkConfig,
) -> Result<MetricValues> {
    let seeds = if cfg.seeds.is_empty() {
        vec![0]
    } else {
        cfg.seeds.clone()
    };
    let runs = seeds
        .iter()
        .map(|&s| one_run(train, test, method, cfg, s))
        .collect::<Result<Vec<_>>>()?;
    let mean = |m: Metric| runs.iter().map(|r| r.get(m)).sum::<f64>() / runs.len() as f64;
    Ok(MetricValues {
        f1: mean(Metric::F1),
        gmean: mean(Metric::Gmean),
        auc: mean(Metric::Auc),
        recall: mean(Metric::Recall),
        specificity: mean(Metric::Specificity),
        precision: mean(Metric::Precision),
    })
}

fn single_line(msg: String) -> String {
    msg.replace(['\n', '\r', '\t'], " ")
}

/// Resamples every training set with every method, classifies the test set
/// with k-NN and records all metrics, then runs Wilcoxon tests of the
/// reference method against the rest.
///
/// A failing (dataset, method) cell becomes an error entry; the run goes
/// on. Cell metrics are means over the configured seeds (NaN if any seed
/// produced NaN).
pub fn benchmark(
    datasets: &[DatasetSpec],
    methods: &[Method],
    cfg: &BenchmarkConfig,
) -> Result<EvaluationReport> {
    let normalize = cfg.ohit.normalize;
    let loaded: Vec<std::result::Result<(BinaryDataset, BinaryDataset), String>> =
        map_slice(datasets, |spec| {
            spec.load()
                .map(|(train, test)| {
                    if normalize {
                        // resample() normalizes the training side itself.
                        (train, test.map_rows(z_normalize_row))
                    } else {
                        (train, test)
                    }
                })
                .map_err(|e| single_line(e.to_string()))
        });

    let jobs: Vec<(usize, Method)> = (0..datasets.len())
        .flat_map(|d| methods.iter().map(move |&m| (d, m)))
        .collect();
    let cells = map_slice(&jobs, |&(d, method)| {
        let outcome = match &loaded[d] {
            Err(msg) => CellOutcome::Error(msg.clone()),
            Ok((train, test)) => match run_cell(train, test, method, cfg) {
                Ok(v) => CellOutcome::Metrics(v),
                Err(e) => CellOutcome::Error(single_line(e.to_string())),
            },
        };
        Cell {
            dataset: datasets[d].name.clone(),
            method: method.name(),
            outcome,
        }
    });

    let mut report = EvaluationReport {
        cells,
        comparisons: Vec::new(),
    };
    let reference = cfg.reference.or_else(|| {
        methods
            .iter()
            .copied()
            .find(|&m| m == Method::Ohit(Mode::Full))
            .or_else(|| methods.first().copied())
    });
    if let Some(reference) = reference {
        report.comparisons = report.compare(&reference.name())?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn tiny() -> DatasetSpec {
        let train = BinaryDataset::from_parts(
            "tiny",
            Array2::from_shape_fn((6, 4), |(i, j)| (i + j) as f64 * 0.1),
            Array2::from_shape_fn((12, 4), |(i, j)| 3.0 + (i * j) as f64 * 0.05),
            "1",
            "0",
        )
        .unwrap();
        let test = train.clone();
        DatasetSpec {
            name: "tiny".into(),
            source: DataSource::InMemory {
                train: Box::new(train),
                test: Box::new(test),
            },
            minority: vec![],
        }
    }

    #[test]
    fn single_method_single_row() {
        let r = benchmark(&[tiny()], &[Method::None], &BenchmarkConfig::default()).unwrap();
        assert_eq!(r.cells.len(), 1);
        assert!(matches!(r.cells[0].outcome, CellOutcome::Metrics(_)));
        // Only the reference itself: nothing to compare.
        assert!(r.comparisons.is_empty());
    }

    #[test]
    fn missing_files_become_error_cells() {
        let missing = DatasetSpec {
            name: "gone".into(),
            source: DataSource::Files {
                train: "/nonexistent/train.csv".into(),
                test: "/nonexistent/test.csv".into(),
                delimiter: ',',
            },
            minority: vec!["1".into()],
        };
        let r = benchmark(
            &[tiny(), missing],
            &[Method::None, Method::Ros],
            &BenchmarkConfig::default(),
        )
        .unwrap();
        assert_eq!(r.cells.len(), 4);
        assert!(matches!(r.cells[2].outcome, CellOutcome::Error(_)));
        assert!(matches!(r.cells[3].outcome, CellOutcome::Error(_)));
        assert_eq!(r.comparisons.len(), Metric::ALL.len());
    }
}
