//! End-to-end oversampling: clustering, covariance estimation and Gaussian
//! synthesis, plus ablation modes and the baseline methods behind one entry
//! point.

use std::fmt;
use std::str::FromStr;

use ndarray::{ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::baselines::{random_oversample, smote, DEFAULT_SMOTE_K};
use crate::datasets::{z_normalize_row, BinaryDataset};
use crate::drsnn::{drsnn, ClusterLabeling, DrsnnParams};
use crate::par::map_indices;
use crate::shrinkage::{
    estimate, estimate_er, estimate_singleton, estimate_unshrunk, ShrinkageEstimate,
};
use crate::synthesis::{allocate, synthesize, SynthesisPlan, SyntheticSet};
use crate::{OhitError, Result};

/// Number of synthetic samples to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eta {
    Count(usize),
    /// `n_maj − n_min`, or zero when already balanced.
    #[default]
    Balance,
}

impl Eta {
    pub fn resolve(self, data: &BinaryDataset) -> usize {
        match self {
            Eta::Count(c) => c,
            Eta::Balance => data.n_maj().saturating_sub(data.n_min()),
        }
    }
}

impl FromStr for Eta {
    type Err = OhitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("balance") {
            return Ok(Eta::Balance);
        }
        s.parse().map(Eta::Count).map_err(|_| {
            OhitError::Parameter(format!("eta must be a count or `balance`, got {s:?}"))
        })
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Count(c) => write!(f, "{c}"),
            Eta::Balance => f.write_str("balance"),
        }
    }
}

/// Ablation modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Clustering, shrinkage and synthesis.
    #[default]
    Full,
    /// Whole minority class as one cluster.
    NoDrsnn,
    /// Shrinkage intensity forced to zero.
    NoShrinkage,
    /// Eigenvalue flooring instead of shrinkage.
    Er,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Full, Mode::NoDrsnn, Mode::NoShrinkage, Mode::Er];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::NoDrsnn => "no_drsnn",
            Mode::NoShrinkage => "no_shrinkage",
            Mode::Er => "er",
        }
    }
}

impl FromStr for Mode {
    type Err = OhitError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| OhitError::Parameter(format!("unknown mode {s:?}")))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OhitConfig {
    pub drsnn: DrsnnParams,
    pub eta: Eta,
    pub seed: u64,
    pub mode: Mode,
    /// Z-normalize every series (both classes) before resampling.
    pub normalize: bool,
}

impl Default for OhitConfig {
    fn default() -> Self {
        Self {
            drsnn: DrsnnParams::default(),
            eta: Eta::Balance,
            seed: 0,
            mode: Mode::Full,
            normalize: false,
        }
    }
}

/// Everything one oversampling run produced.
#[derive(Debug, Clone)]
pub struct OhitRun {
    pub synthetic: SyntheticSet,
    pub labeling: ClusterLabeling,
    pub estimates: Vec<ShrinkageEstimate>,
    pub plan: SynthesisPlan,
}

impl OhitRun {
    /// Smallest and largest shrinkage intensity over clusters with at least
    /// two members.
    pub fn lambda_range(&self) -> Option<(f64, f64)> {
        self.estimates
            .iter()
            .filter(|e| e.n >= 2)
            .map(|e| e.lambda)
            .fold(None, |acc, l| match acc {
                None => Some((l, l)),
                Some((lo, hi)) => Some((lo.min(l), hi.max(l))),
            })
    }
}

fn cluster_estimate(id: usize, rows: ArrayView2<'_, f64>, mode: Mode) -> Result<ShrinkageEstimate> {
    if rows.nrows() == 1 {
        return Ok(estimate_singleton(id, rows.row(0)));
    }
    match mode {
        Mode::Full | Mode::NoDrsnn => estimate(id, rows),
        Mode::NoShrinkage => estimate_unshrunk(id, rows),
        Mode::Er => estimate_er(id, rows),
    }
}

/// Generates synthetic minority samples for `data`.
///
/// A lone minority sample is duplicated with ridge-scale jitter.
pub fn ohit(data: &BinaryDataset, cfg: &OhitConfig) -> Result<OhitRun> {
    let points = data.minority();
    let n = points.nrows();
    let eta = cfg.eta.resolve(data);

    let labeling = match cfg.mode {
        Mode::NoDrsnn => ClusterLabeling::single(n),
        _ => drsnn(points, &cfg.drsnn)?,
    };
    let m = labeling.num_clusters();
    let estimates: Vec<Result<ShrinkageEstimate>> = map_indices(m, |c| {
        let id = c + 1;
        let rows = points.select(Axis(0), &labeling.members(id));
        cluster_estimate(id, rows.view(), cfg.mode)
    });
    let estimates = estimates.into_iter().collect::<Result<Vec<_>>>()?;

    let plan = allocate(eta, &labeling.sizes(), n)?.with_seed(cfg.seed);
    let synthetic = synthesize(&plan, &estimates)?;
    Ok(OhitRun {
        synthetic,
        labeling,
        estimates,
        plan,
    })
}

/// Appends OHIT samples to the minority side; the majority is untouched.
pub fn resample_dataset(data: &BinaryDataset, cfg: &OhitConfig) -> Result<BinaryDataset> {
    Ok(resample(data, Method::Ohit(cfg.mode), cfg)?.data)
}

/// Oversampling methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    None,
    Ros,
    Smote,
    Ohit(Mode),
}

impl Method {
    /// Stable short name: `none`, `ros`, `smote`, `ohit` or `ohit/<mode>`.
    pub fn name(&self) -> String {
        match self {
            Method::None => "none".into(),
            Method::Ros => "ros".into(),
            Method::Smote => "smote".into(),
            Method::Ohit(Mode::Full) => "ohit".into(),
            Method::Ohit(m) => format!("ohit/{m}"),
        }
    }
}

impl FromStr for Method {
    type Err = OhitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "none" => Ok(Method::None),
            "ros" => Ok(Method::Ros),
            "smote" => Ok(Method::Smote),
            "ohit" => Ok(Method::Ohit(Mode::Full)),
            other => match other
                .strip_prefix("ohit/")
                .or_else(|| other.strip_prefix("ohit:"))
            {
                Some(mode) => Ok(Method::Ohit(mode.parse()?)),
                None => Err(OhitError::Parameter(format!("unknown method {s:?}"))),
            },
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleSummary {
    pub n_min_before: usize,
    pub n_min_after: usize,
    pub n_maj: usize,
    pub clusters: Option<usize>,
    pub lambda_range: Option<(f64, f64)>,
}

impl fmt::Display for ResampleSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "minority {} -> {} (majority {})",
            self.n_min_before, self.n_min_after, self.n_maj
        )?;
        if let Some(m) = self.clusters {
            write!(f, ", clusters {m}")?;
        }
        if let Some((lo, hi)) = self.lambda_range {
            write!(f, ", lambda [{lo:.4}, {hi:.4}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Resampled {
    pub data: BinaryDataset,
    pub summary: ResampleSummary,
    /// Present for OHIT methods.
    pub run: Option<OhitRun>,
}

/// Applies `method` to `data`, using `cfg` for `eta`, the seed,
/// normalization and DRSNN parameters. The mode inside `Method::Ohit`
/// overrides `cfg.mode`.
pub fn resample(data: &BinaryDataset, method: Method, cfg: &OhitConfig) -> Result<Resampled> {
    let normalized;
    let data = if cfg.normalize {
        normalized = data.map_rows(z_normalize_row);
        &normalized
    } else {
        data
    };
    let eta = cfg.eta.resolve(data);
    let (synthetic, run) = match method {
        Method::None => (None, None),
        Method::Ros => (
            Some(random_oversample(data.minority(), eta, cfg.seed)?),
            None,
        ),
        Method::Smote => (
            Some(smote(data.minority(), eta, DEFAULT_SMOTE_K, cfg.seed)?.synthetic),
            None,
        ),
        Method::Ohit(mode) => {
            let run = ohit(
                data,
                &OhitConfig {
                    mode,
                    ..cfg.clone()
                },
            )?;
            (Some(run.synthetic.clone()), Some(run))
        }
    };
    let out = match &synthetic {
        Some(s) => data.with_synthetic_minority(s.samples.view())?,
        None => data.clone(),
    };
    let summary = ResampleSummary {
        n_min_before: data.n_min(),
        n_min_after: out.n_min(),
        n_maj: out.n_maj(),
        clusters: run.as_ref().map(|r| r.labeling.num_clusters()),
        lambda_range: run.as_ref().and_then(OhitRun::lambda_range),
    };
    Ok(Resampled {
        data: out,
        summary,
        run,
    })
}
