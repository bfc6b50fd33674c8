//! Fixed-length labeled series: loading, writing and minority/majority
//! binarization.
//!
//! Files follow the UCR archive layout: one sample per line, the class label
//! first, then the `d` values of the series, all separated by a single
//! delimiter character. Labels are kept as opaque strings so that `-1`, `1`
//! and `1.0` stay distinct classes.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{concatenate, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::{OhitError, Result};

pub const DEFAULT_DELIMITER: char = ',';

/// Raw labeled series: `n` rows of length `d` plus one label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeriesSet {
    name: String,
    series: Array2<f64>,
    labels: Vec<String>,
}

impl LabeledSeriesSet {
    pub fn new(name: impl Into<String>, series: Array2<f64>, labels: Vec<String>) -> Result<Self> {
        let (n, d) = series.dim();
        if n == 0 {
            return Err(OhitError::EmptyInput);
        }
        if d == 0 {
            return Err(OhitError::Format {
                line: 1,
                message: "series have length zero".into(),
            });
        }
        if labels.len() != n {
            return Err(OhitError::Contract(format!(
                "{} labels for {} series",
                labels.len(),
                n
            )));
        }
        if let Some((row, _)) = series
            .rows()
            .into_iter()
            .enumerate()
            .find(|(_, r)| r.iter().any(|v| !v.is_finite()))
        {
            return Err(OhitError::Format {
                line: row + 1,
                message: "non-finite value".into(),
            });
        }
        Ok(Self {
            name: name.into(),
            series,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> ArrayView2<'_, f64> {
        self.series.view()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.series.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series_len(&self) -> usize {
        self.series.ncols()
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> BTreeSet<&str> {
        self.labels.iter().map(String::as_str).collect()
    }
}

fn split_fields(line: &str, delimiter: char) -> Vec<&str> {
    if delimiter.is_whitespace() {
        line.split_whitespace().collect()
    } else {
        line.split(delimiter).map(str::trim).collect()
    }
}

/// Parses UCR-style text from any reader. Blank lines are skipped.
pub fn parse_series<R: Read>(
    reader: R,
    delimiter: char,
    name: impl Into<String>,
) -> Result<LabeledSeriesSet> {
    let reader = BufReader::new(reader);
    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(&line, delimiter);
        let (label, rest) = fields.split_first().expect("non-empty line has a field");
        if label.is_empty() {
            return Err(OhitError::Format {
                line: line_no,
                message: "empty class label".into(),
            });
        }
        match width {
            None if rest.is_empty() => {
                return Err(OhitError::Format {
                    line: line_no,
                    message: "line has a label but no values".into(),
                })
            }
            None => width = Some(rest.len()),
            Some(w) if w != rest.len() => {
                return Err(OhitError::Format {
                    line: line_no,
                    message: format!("expected {} values, found {}", w, rest.len()),
                })
            }
            Some(_) => {}
        }
        for field in rest {
            let v: f64 = field.parse().map_err(|_| OhitError::Parse {
                line: line_no,
                value: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(OhitError::Format {
                    line: line_no,
                    message: format!("non-finite value {field:?}"),
                });
            }
            values.push(v);
        }
        labels.push(label.to_string());
    }

    let d = width.ok_or(OhitError::EmptyInput)?;
    let series =
        Array2::from_shape_vec((labels.len(), d), values).expect("row widths were validated");
    LabeledSeriesSet::new(name, series, labels)
}

/// Loads a UCR-style file. The dataset name is the file stem.
pub fn load_series(path: impl AsRef<Path>, delimiter: char) -> Result<LabeledSeriesSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| OhitError::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_series(file, delimiter, name)
}

/// Writes rows in the same layout `parse_series` reads. Values use Rust's
/// shortest round-trip formatting, so reloading is bit-exact.
pub fn write_rows<'a, W, I>(writer: W, rows: I, delimiter: char) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, ndarray::ArrayView1<'a, f64>)>,
{
    let mut w = BufWriter::new(writer);
    for (label, row) in rows {
        write!(w, "{label}")?;
        for v in row.iter() {
            write!(w, "{delimiter}{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series<W: Write>(set: &LabeledSeriesSet, writer: W, delimiter: char) -> Result<()> {
    write_rows(
        writer,
        set.labels.iter().map(String::as_str).zip(set.series.rows()),
        delimiter,
    )
}

pub fn save_series(set: &LabeledSeriesSet, path: impl AsRef<Path>, delimiter: char) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| OhitError::io(path, e))?;
    write_series(set, file, delimiter)
}

/// Two-class view of a dataset. Minority is the positive class.
///
/// Row provenance is kept so the set can be written back in its original
/// row order; synthetic minority rows have no source row and are appended.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    name: String,
    minority: Array2<f64>,
    majority: Array2<f64>,
    minority_labels: Vec<String>,
    minority_tags: Vec<String>,
    majority_tags: Vec<String>,
    minority_source: Vec<Option<usize>>,
    majority_source: Vec<usize>,
}

impl BinaryDataset {
    /// Builds a dataset directly from minority and majority matrices.
    ///
    /// Rows are tagged with the first minority label and `majority_label`.
    pub fn from_parts(
        name: impl Into<String>,
        minority: Array2<f64>,
        majority: Array2<f64>,
        minority_label: &str,
        majority_label: &str,
    ) -> Result<Self> {
        if minority.nrows() == 0 || majority.nrows() == 0 {
            return Err(OhitError::DegenerateSplit(format!(
                "{} minority and {} majority samples",
                minority.nrows(),
                majority.nrows()
            )));
        }
        if minority.ncols() != majority.ncols() || minority.ncols() == 0 {
            return Err(OhitError::Contract(format!(
                "minority has {} columns, majority {}",
                minority.ncols(),
                majority.ncols()
            )));
        }
        if minority
            .iter()
            .chain(majority.iter())
            .any(|v| !v.is_finite())
        {
            return Err(OhitError::Contract("non-finite value in dataset".into()));
        }
        let n_min = minority.nrows();
        let n_maj = majority.nrows();
        Ok(Self {
            name: name.into(),
            minority,
            majority,
            minority_labels: vec![minority_label.to_string()],
            minority_tags: vec![minority_label.to_string(); n_min],
            majority_tags: vec![majority_label.to_string(); n_maj],
            minority_source: (0..n_min).map(Some).collect(),
            majority_source: (n_min..n_min + n_maj).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn minority(&self) -> ArrayView2<'_, f64> {
        self.minority.view()
    }

    pub fn majority(&self) -> ArrayView2<'_, f64> {
        self.majority.view()
    }

    pub fn n_min(&self) -> usize {
        self.minority.nrows()
    }

    pub fn n_maj(&self) -> usize {
        self.majority.nrows()
    }

    pub fn series_len(&self) -> usize {
        self.minority.ncols()
    }

    /// Raw tags mapped to the minority side, in the order they were given.
    pub fn minority_labels(&self) -> &[String] {
        &self.minority_labels
    }

    /// Tag written for synthetic minority rows: the first minority label.
    pub fn synthetic_tag(&self) -> &str {
        &self.minority_labels[0]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Returns a copy with `rows` appended to the minority side.
    pub fn with_synthetic_minority(&self, rows: ArrayView2<'_, f64>) -> Result<Self> {
        if rows.nrows() == 0 {
            return Ok(self.clone());
        }
        if rows.ncols() != self.series_len() {
            return Err(OhitError::Contract(format!(
                "synthetic rows have {} columns, dataset has {}",
                rows.ncols(),
                self.series_len()
            )));
        }
        let mut out = self.clone();
        out.minority =
            concatenate(Axis(0), &[self.minority.view(), rows]).expect("column counts checked");
        let tag = self.synthetic_tag().to_string();
        out.minority_tags
            .extend(std::iter::repeat_n(tag, rows.nrows()));
        out.minority_source
            .extend(std::iter::repeat_n(None, rows.nrows()));
        Ok(out)
    }

    /// Applies `f` to every row on both sides.
    pub fn map_rows(&self, f: impl Fn(ndarray::ArrayViewMut1<'_, f64>)) -> Self {
        let mut out = self.clone();
        for row in out.minority.rows_mut() {
            f(row);
        }
        for row in out.majority.rows_mut() {
            f(row);
        }
        out
    }

    /// Flattens back to a labeled set: original rows in source order, then
    /// synthetic rows.
    pub fn to_series_set(&self) -> LabeledSeriesSet {
        enum Row {
            Min(usize),
            Maj(usize),
        }
        let mut keyed: Vec<(usize, Row)> = Vec::with_capacity(self.n_min() + self.n_maj());
        let mut extra = usize::MAX / 2;
        for (i, src) in self.minority_source.iter().enumerate() {
            let key = src.unwrap_or_else(|| {
                extra += 1;
                extra
            });
            keyed.push((key, Row::Min(i)));
        }
        for (i, &src) in self.majority_source.iter().enumerate() {
            keyed.push((src, Row::Maj(i)));
        }
        keyed.sort_by_key(|(k, _)| *k);

        let d = self.series_len();
        let mut series = Array2::zeros((keyed.len(), d));
        let mut labels = Vec::with_capacity(keyed.len());
        for (out_row, (_, row)) in keyed.iter().enumerate() {
            let (view, tag) = match *row {
                Row::Min(i) => (self.minority.row(i), &self.minority_tags[i]),
                Row::Maj(i) => (self.majority.row(i), &self.majority_tags[i]),
            };
            series.row_mut(out_row).assign(&view);
            labels.push(tag.clone());
        }
        LabeledSeriesSet::new(self.name.clone(), series, labels)
            .expect("binary dataset rows are valid")
    }
}

/// Splits a labeled set into minority (any of `minority_labels`) and
/// majority (everything else).
pub fn binarize<S: AsRef<str>>(
    data: &LabeledSeriesSet,
    minority_labels: &[S],
) -> Result<BinaryDataset> {
    let mut wanted: Vec<String> = Vec::new();
    for tag in minority_labels {
        let tag = tag.as_ref().trim().to_string();
        if !wanted.contains(&tag) {
            wanted.push(tag);
        }
    }
    if wanted.is_empty() {
        return Err(OhitError::DegenerateSplit(
            "no minority labels given".into(),
        ));
    }

    let mut min_rows = Vec::new();
    let mut maj_rows = Vec::new();
    for (i, label) in data.labels.iter().enumerate() {
        if wanted.iter().any(|w| w == label) {
            min_rows.push(i);
        } else {
            maj_rows.push(i);
        }
    }
    if min_rows.is_empty() {
        return Err(OhitError::DegenerateSplit(format!(
            "minority labels {:?} match no sample in {}",
            wanted, data.name
        )));
    }
    if maj_rows.is_empty() {
        return Err(OhitError::DegenerateSplit(format!(
            "minority labels {:?} match every sample in {}",
            wanted, data.name
        )));
    }

    let take = |rows: &[usize]| data.series.select(Axis(0), rows);
    Ok(BinaryDataset {
        name: data.name.clone(),
        minority: take(&min_rows),
        majority: take(&maj_rows),
        minority_labels: wanted,
        minority_tags: min_rows.iter().map(|&i| data.labels[i].clone()).collect(),
        majority_tags: maj_rows.iter().map(|&i| data.labels[i].clone()).collect(),
        minority_source: min_rows.into_iter().map(Some).collect(),
        majority_source: maj_rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub n_min: usize,
    pub n_maj: usize,
    /// Imbalance ratio `n_maj / n_min`.
    pub ir: f64,
}

pub fn class_stats(data: &BinaryDataset) -> ClassStats {
    ClassStats {
        n_min: data.n_min(),
        n_maj: data.n_maj(),
        ir: data.n_maj() as f64 / data.n_min() as f64,
    }
}

/// Per-series z-normalization (zero mean, unit variance). Constant series
/// are only centered.
pub fn z_normalize_row(mut row: ndarray::ArrayViewMut1<'_, f64>) {
    let n = row.len() as f64;
    let mean = row.sum() / n;
    let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    row.mapv_inplace(|v| if sd > 0.0 { (v - mean) / sd } else { v - mean });
}

/// Published class layout of a benchmark dataset from the UCR archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub abbreviation: &'static str,
    pub minority: &'static [&'static str],
    pub length: usize,
    /// `(n_min, n_maj)` of the training split.
    pub train: (usize, usize),
    /// `(n_min, n_maj)` of the test split.
    pub test: (usize, usize),
    /// Whether the minority class merges several original classes.
    pub multimodal: bool,
}

const fn entry(
    name: &'static str,
    abbreviation: &'static str,
    minority: &'static [&'static str],
    length: usize,
    train: (usize, usize),
    test: (usize, usize),
    multimodal: bool,
) -> CatalogEntry {
    CatalogEntry {
        name,
        abbreviation,
        minority,
        length,
        train,
        test,
        multimodal,
    }
}

/// Unimodal and multimodal benchmark datasets with their minority classes.
pub const UCR_CATALOG: &[CatalogEntry] = &[
    entry("Yoga", "Yg", &["1"], 426, (137, 163), (1393, 1607), false),
    entry("Herring", "Hr", &["2"], 512, (25, 39), (26, 38), false),
    entry(
        "Strawberry",
        "Sb",
        &["1"],
        235,
        (132, 238),
        (219, 394),
        false,
    ),
    entry(
        "PhalangesOutlinesCorrect",
        "POC",
        &["0"],
        80,
        (628, 1172),
        (332, 526),
        false,
    ),
    entry("Lighting2", "Lt2", &["-1"], 637, (20, 40), (28, 33), false),
    entry(
        "ProximalPhalanxOutlineCorrect",
        "PPOC",
        &["0"],
        80,
        (194, 406),
        (92, 199),
        false,
    ),
    entry("ECG200", "E200", &["-1"], 96, (31, 69), (36, 64), false),
    entry(
        "Earthquakes",
        "Eq",
        &["0"],
        512,
        (35, 104),
        (58, 264),
        false,
    ),
    entry(
        "Two_Patterns",
        "Tp",
        &["2"],
        128,
        (237, 763),
        (1011, 2989),
        false,
    ),
    entry("Car", "Car", &["3"], 577, (11, 49), (19, 41), false),
    entry(
        "ProximalPhalanxOutlineAgeGroup",
        "PPOA",
        &["1"],
        80,
        (72, 328),
        (17, 188),
        false,
    ),
    entry("Wafer", "Wf", &["-1"], 152, (97, 903), (665, 5499), false),
    entry(
        "Worms",
        "Ws",
        &["5", "2", "3"],
        900,
        (31, 46),
        (73, 108),
        true,
    ),
    entry("Plane", "Pl", &["3", "5"], 144, (36, 69), (54, 51), true),
    entry(
        "Haptics",
        "Ht",
        &["1", "5"],
        1092,
        (51, 104),
        (127, 181),
        true,
    ),
    entry("FISH", "FISH", &["4", "5"], 463, (43, 132), (57, 118), true),
    entry(
        "UWaveGestureLibraryAll",
        "UWGLA",
        &["8", "3"],
        945,
        (206, 690),
        (914, 2668),
        true,
    ),
    entry(
        "InsectWingbeatSound",
        "IWS",
        &["1", "2"],
        256,
        (40, 180),
        (360, 1620),
        true,
    ),
    entry(
        "Cricket_Z",
        "CZ",
        &["3", "5"],
        300,
        (52, 338),
        (78, 312),
        true,
    ),
    entry(
        "SwedishLeaf",
        "SL",
        &["10", "7"],
        128,
        (54, 446),
        (96, 529),
        true,
    ),
    entry(
        "FaceAll",
        "FA",
        &["1", "2"],
        131,
        (80, 480),
        (210, 1480),
        true,
    ),
    entry(
        "MedicalImages",
        "MI",
        &["5", "6", "8"],
        99,
        (23, 358),
        (69, 691),
        true,
    ),
    entry(
        "ShapesAll",
        "SA",
        &["1", "2", "3"],
        512,
        (30, 570),
        (30, 570),
        true,
    ),
    entry(
        "NonInvasiveFatalECG_Thorax1",
        "NIFT",
        &["1", "23"],
        750,
        (71, 1729),
        (100, 1865),
        true,
    ),
];

/// Looks a catalog entry up by full name or abbreviation (case-insensitive).
pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    UCR_CATALOG
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name) || e.abbreviation.eq_ignore_ascii_case(name))
}
