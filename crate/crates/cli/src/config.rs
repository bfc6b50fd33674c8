//! TOML benchmark configuration.
//!
//! ```toml
//! seeds = [0, 1, 2]
//! k_cls = 5
//! delimiter = "tab"
//! methods = ["none", "ros", "smote", "ohit", "ohit/no_drsnn"]
//! reference = "ohit"
//!
//! [ohit]
//! k = 10
//! drt = 0.6
//! eta = "balance"
//!
//! [[dataset]]
//! name = "ECG200"
//! train = "ECG200/ECG200_TRAIN.tsv"
//! test = "ECG200/ECG200_TEST.tsv"
//! minority = ["-1"]
//! ```
//!
//! Relative dataset paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use ohit::datasets::DEFAULT_DELIMITER;
use ohit::drsnn::{DrsnnParams, DEFAULT_DRT, MIN_CLUSTER_SIZE};
use ohit::evaluation::{BenchmarkConfig, DataSource, DatasetSpec, DEFAULT_K_CLS};
use ohit::pipeline::{Eta, Method, OhitConfig};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_seeds")]
    seeds: Vec<u64>,
    #[serde(default = "default_k_cls")]
    k_cls: usize,
    delimiter: Option<String>,
    methods: Vec<String>,
    reference: Option<String>,
    #[serde(default)]
    ohit: RawOhit,
    #[serde(rename = "dataset", default)]
    datasets: Vec<RawDataset>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOhit {
    k: Option<usize>,
    kappa: Option<usize>,
    drt: Option<f64>,
    eta: Option<toml::Value>,
    #[serde(default)]
    normalize: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    name: String,
    train: PathBuf,
    test: PathBuf,
    minority: Vec<String>,
    delimiter: Option<String>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_k_cls() -> usize {
    DEFAULT_K_CLS
}

/// Parsed benchmark run.
#[derive(Debug)]
pub struct Benchmark {
    pub datasets: Vec<DatasetSpec>,
    pub methods: Vec<Method>,
    pub config: BenchmarkConfig,
}

/// Accepts a single character or one of `tab`, `comma`, `space`,
/// `whitespace`.
pub fn parse_delimiter(s: &str) -> Result<char, String> {
    match s {
        "tab" | "\\t" => Ok('\t'),
        "comma" => Ok(','),
        "space" | "whitespace" => Ok(' '),
        _ => {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(format!("delimiter must be one character, got {s:?}")),
            }
        }
    }
}

fn parse_eta(v: &toml::Value) -> Result<Eta, String> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(Eta::Count(*i as usize)),
        toml::Value::String(s) => s.parse().map_err(|e: ohit::OhitError| e.to_string()),
        other => Err(format!("eta must be a count or \"balance\", got {other}")),
    }
}

pub fn parse(text: &str, base_dir: &Path) -> Result<Benchmark, String> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| e.to_string())?;
    if raw.methods.is_empty() {
        return Err("`methods` must list at least one method".into());
    }
    if raw.k_cls == 0 {
        return Err("`k_cls` must be at least 1".into());
    }
    let methods = raw
        .methods
        .iter()
        .map(|m| m.parse::<Method>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let reference = raw
        .reference
        .as_deref()
        .map(|r| r.parse::<Method>().map_err(|e| e.to_string()))
        .transpose()?;
    if let Some(r) = reference {
        if !methods.contains(&r) {
            return Err(format!("reference {r} is not among the methods"));
        }
    }
    let delimiter = match &raw.delimiter {
        Some(d) => parse_delimiter(d)?,
        None => DEFAULT_DELIMITER,
    };
    let eta = raw
        .ohit
        .eta
        .as_ref()
        .map(parse_eta)
        .transpose()?
        .unwrap_or_default();
    let drt = raw.ohit.drt.unwrap_or(DEFAULT_DRT);
    if drt.is_nan() || drt < 0.0 {
        return Err(format!("drt must be non-negative, got {drt}"));
    }

    let mut datasets = Vec::with_capacity(raw.datasets.len());
    for d in raw.datasets {
        if d.minority.is_empty() {
            return Err(format!("dataset {}: `minority` is empty", d.name));
        }
        let delimiter = match &d.delimiter {
            Some(s) => parse_delimiter(s)?,
            None => delimiter,
        };
        datasets.push(DatasetSpec {
            name: d.name,
            source: DataSource::Files {
                train: base_dir.join(d.train),
                test: base_dir.join(d.test),
                delimiter,
            },
            minority: d.minority,
        });
    }
    if datasets.is_empty() {
        return Err("config lists no [[dataset]] entries".into());
    }

    let ohit = OhitConfig {
        drsnn: DrsnnParams {
            k: raw.ohit.k,
            kappa: raw.ohit.kappa,
            drt,
            min_cluster_size: MIN_CLUSTER_SIZE,
        },
        eta,
        normalize: raw.ohit.normalize,
        ..Default::default()
    };
    Ok(Benchmark {
        datasets,
        methods,
        config: BenchmarkConfig {
            ohit,
            seeds: raw.seeds,
            k_cls: raw.k_cls,
            reference,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
methods = ["none", "ohit/er"]

[[dataset]]
name = "a"
train = "a_TRAIN.tsv"
test = "a_TEST.tsv"
minority = ["1", "3"]
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let b = parse(MINIMAL, Path::new("/data")).unwrap();
        assert_eq!(b.config.seeds, vec![0]);
        assert_eq!(b.config.k_cls, DEFAULT_K_CLS);
        assert_eq!(b.config.ohit.eta, Eta::Balance);
        assert_eq!(b.methods.len(), 2);
        match &b.datasets[0].source {
            DataSource::Files {
                train, delimiter, ..
            } => {
                assert_eq!(train, Path::new("/data/a_TRAIN.tsv"));
                assert_eq!(*delimiter, ',');
            }
            other => panic!("unexpected source {other:?}"),
        }
    }

    #[test]
    fn ohit_section_is_applied() {
        let text = format!(
            "seeds = [3, 4]\ndelimiter = \"tab\"\n{MINIMAL}\n[ohit]\nk = 7\nkappa = 3\ndrt = 0.8\neta = 50\n"
        );
        let b = parse(&text, Path::new(".")).unwrap();
        let o = &b.config.ohit;
        assert_eq!(
            (o.drsnn.k, o.drsnn.kappa, o.drsnn.drt),
            (Some(7), Some(3), 0.8)
        );
        assert_eq!(o.eta, Eta::Count(50));
        assert!(matches!(
            b.datasets[0].source,
            DataSource::Files {
                delimiter: '\t',
                ..
            }
        ));
    }

    #[test]
    fn unknown_keys_and_methods_are_rejected() {
        assert!(parse(&format!("colour = 1\n{MINIMAL}"), Path::new(".")).is_err());
        let bad = MINIMAL.replace("ohit/er", "ohit/sideways");
        assert!(parse(&bad, Path::new(".")).is_err());
        assert!(parse("methods = [\"none\"]\n", Path::new(".")).is_err());
    }

    #[test]
    fn delimiter_names() {
        assert_eq!(parse_delimiter("tab"), Ok('\t'));
        assert_eq!(parse_delimiter(";"), Ok(';'));
        assert_eq!(parse_delimiter("whitespace"), Ok(' '));
        assert!(parse_delimiter("ab").is_err());
    }
}
