use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::wilcoxon::wilcoxon_signed_rank;
use crate::{OhitError, Result};

const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    F1,
    Gmean,
    Auc,
    Recall,
    Specificity,
    Precision,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::F1,
        Metric::Gmean,
        Metric::Auc,
        Metric::Recall,
        Metric::Specificity,
        Metric::Precision,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::Gmean => "gmean",
            Metric::Auc => "auc",
            Metric::Recall => "recall",
            Metric::Specificity => "specificity",
            Metric::Precision => "precision",
        }
    }
}

impl FromStr for Metric {
    type Err = OhitError;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| OhitError::Report(format!("unknown metric {s:?}")))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_some(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Averaged metrics of one (dataset, method) cell. Undefined values are
/// NaN.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MetricValues {
    #[serde(with = "nan_as_null")]
    pub f1: f64,
    #[serde(with = "nan_as_null")]
    pub gmean: f64,
    #[serde(with = "nan_as_null")]
    pub auc: f64,
    #[serde(with = "nan_as_null")]
    pub recall: f64,
    #[serde(with = "nan_as_null")]
    pub specificity: f64,
    #[serde(with = "nan_as_null")]
    pub precision: f64,
}

impl MetricValues {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::F1 => self.f1,
            Metric::Gmean => self.gmean,
            Metric::Auc => self.auc,
            Metric::Recall => self.recall,
            Metric::Specificity => self.specificity,
            Metric::Precision => self.precision,
        }
    }

    fn set(&mut self, m: Metric, v: f64) {
        match m {
            Metric::F1 => self.f1 = v,
            Metric::Gmean => self.gmean = v,
            Metric::Auc => self.auc = v,
            Metric::Recall => self.recall = v,
            Metric::Specificity => self.specificity = v,
            Metric::Precision => self.precision = v,
        }
    }

    fn all_nan() -> Self {
        Self {
            f1: f64::NAN,
            gmean: f64::NAN,
            auc: f64::NAN,
            recall: f64::NAN,
            specificity: f64::NAN,
            precision: f64::NAN,
        }
    }
}

/// Bitwise equality, so NaN cells compare equal to themselves.
impl PartialEq for MetricValues {
    fn eq(&self, other: &Self) -> bool {
        Metric::ALL
            .iter()
            .all(|&m| self.get(m).to_bits() == other.get(m).to_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellOutcome {
    Metrics(MetricValues),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub dataset: String,
    pub method: String,
    pub outcome: CellOutcome,
}

impl Cell {
    pub fn value(&self, m: Metric) -> Option<f64> {
        match &self.outcome {
            CellOutcome::Metrics(v) => Some(v.get(m)),
            CellOutcome::Error(_) => None,
        }
    }
}

/// Wilcoxon comparison of a reference method against another across
/// datasets, for one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub reference: String,
    pub other: String,
    pub metric: Metric,
    /// `None` when no dataset has a defined value for both methods.
    pub p_value: Option<f64>,
    pub n_pairs: usize,
    /// Datasets where the reference scores strictly higher.
    pub wins: usize,
    pub losses: usize,
}

impl Comparison {
    /// `p`, suffixed with `+` for a significant reference win and `-` for a
    /// significant loss.
    pub fn marked(&self) -> String {
        match self.p_value {
            None => "NA".into(),
            Some(p) => {
                let mark = if p < SIGNIFICANCE && self.wins > self.losses {
                    "+"
                } else if p < SIGNIFICANCE && self.losses > self.wins {
                    "-"
                } else {
                    ""
                };
                format!("{p:.4e}{mark}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub cells: Vec<Cell>,
    pub comparisons: Vec<Comparison>,
}

fn first_seen<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

impl EvaluationReport {
    pub fn datasets(&self) -> Vec<String> {
        first_seen(self.cells.iter().map(|c| c.dataset.as_str()))
    }

    pub fn methods(&self) -> Vec<String> {
        first_seen(self.cells.iter().map(|c| c.method.as_str()))
    }

    pub fn cell(&self, dataset: &str, method: &str) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.method == method)
    }

    pub fn value(&self, dataset: &str, method: &str, m: Metric) -> Option<f64> {
        self.cell(dataset, method).and_then(|c| c.value(m))
    }

    /// Paired Wilcoxon tests of `reference` against every other method.
    /// Datasets where either value is missing or NaN are skipped.
    pub fn compare(&self, reference: &str) -> Result<Vec<Comparison>> {
        let datasets = self.datasets();
        let mut out = Vec::new();
        for other in self.methods().into_iter().filter(|m| m != reference) {
            for metric in Metric::ALL {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for ds in &datasets {
                    if let (Some(x), Some(y)) = (
                        self.value(ds, reference, metric),
                        self.value(ds, &other, metric),
                    ) {
                        if !x.is_nan() && !y.is_nan() {
                            a.push(x);
                            b.push(y);
                        }
                    }
                }
                let p_value = if a.is_empty() {
                    None
                } else {
                    Some(wilcoxon_signed_rank(&a, &b)?.p_value)
                };
                out.push(Comparison {
                    reference: reference.to_string(),
                    other: other.clone(),
                    metric,
                    p_value,
                    n_pairs: a.len(),
                    wins: a.iter().zip(&b).filter(|(x, y)| x > y).count(),
                    losses: a.iter().zip(&b).filter(|(x, y)| x < y).count(),
                });
            }
        }
        Ok(out)
    }

    /// Mean of every metric per method over datasets with defined values.
    pub fn averages(&self) -> Vec<(String, MetricValues)> {
        let datasets = self.datasets();
        self.methods()
            .into_iter()
            .map(|method| {
                let mut avg = MetricValues::all_nan();
                for metric in Metric::ALL {
                    let vals: Vec<f64> = datasets
                        .iter()
                        .filter_map(|ds| self.value(ds, &method, metric))
                        .filter(|v| !v.is_nan())
                        .collect();
                    if !vals.is_empty() {
                        avg.set(metric, vals.iter().sum::<f64>() / vals.len() as f64);
                    }
                }
                (method, avg)
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| OhitError::Report(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| OhitError::Report(e.to_string()))
    }

    /// One row per dataset × method × metric; failed cells produce a single
    /// `error` row carrying the message.
    pub fn write_cells<W: Write>(&self, mut w: W, delim: char) -> Result<()> {
        writeln!(w, "dataset{delim}method{delim}metric{delim}value")?;
        for c in &self.cells {
            match &c.outcome {
                CellOutcome::Metrics(v) => {
                    for m in Metric::ALL {
                        writeln!(
                            w,
                            "{}{delim}{}{delim}{m}{delim}{}",
                            c.dataset,
                            c.method,
                            v.get(m)
                        )?;
                    }
                }
                CellOutcome::Error(msg) => {
                    writeln!(
                        w,
                        "{}{delim}{}{delim}error{delim}{}",
                        c.dataset, c.method, msg
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Reads cells written by [`write_cells`](Self::write_cells). The
    /// comparisons are left empty.
    pub fn read_cells<R: Read>(r: R, delim: char) -> Result<Self> {
        let mut report = EvaluationReport::default();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            if i == 0 || line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.splitn(4, delim).collect();
            let [dataset, method, metric, value] = fields[..] else {
                return Err(OhitError::Report(format!(
                    "line {}: expected 4 fields",
                    i + 1
                )));
            };
            if metric == "error" {
                report.cells.push(Cell {
                    dataset: dataset.into(),
                    method: method.into(),
                    outcome: CellOutcome::Error(value.into()),
                });
                continue;
            }
            let metric: Metric = metric.parse()?;
            let value: f64 = value
                .parse()
                .map_err(|_| OhitError::Report(format!("line {}: bad value {value:?}", i + 1)))?;
            let existing = report
                .cells
                .iter_mut()
                .rev()
                .find(|c| c.dataset == dataset && c.method == method);
            match existing {
                Some(Cell {
                    outcome: CellOutcome::Metrics(v),
                    ..
                }) => v.set(metric, value),
                _ => {
                    let mut v = MetricValues::all_nan();
                    v.set(metric, value);
                    report.cells.push(Cell {
                        dataset: dataset.into(),
                        method: method.into(),
                        outcome: CellOutcome::Metrics(v),
                    });
                }
            }
        }
        Ok(report)
    }

    /// Reference-vs-method rows with one p-value column per metric.
    pub fn write_wilcoxon<W: Write>(&self, mut w: W, delim: char) -> Result<()> {
        write!(w, "comparison")?;
        for m in Metric::ALL {
            write!(w, "{delim}{m}")?;
        }
        writeln!(w)?;
        let mut rows: Vec<(&str, &str)> = Vec::new();
        for c in &self.comparisons {
            if !rows.contains(&(c.reference.as_str(), c.other.as_str())) {
                rows.push((&c.reference, &c.other));
            }
        }
        for (reference, other) in rows {
            write!(w, "{reference} vs {other}")?;
            for m in Metric::ALL {
                let cell = self
                    .comparisons
                    .iter()
                    .find(|c| c.reference == reference && c.other == other && c.metric == m)
                    .map(Comparison::marked)
                    .unwrap_or_else(|| "NA".into());
                write!(w, "{delim}{cell}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Per-method averages, one column per metric.
    pub fn write_averages<W: Write>(&self, mut w: W, delim: char) -> Result<()> {
        write!(w, "method")?;
        for m in Metric::ALL {
            write!(w, "{delim}{m}")?;
        }
        writeln!(w)?;
        for (method, avg) in self.averages() {
            write!(w, "{method}")?;
            for m in Metric::ALL {
                write!(w, "{delim}{:.4}", avg.get(m))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
