//! Per-cluster covariance estimation with optimal shrinkage toward the
//! diagonal.
//!
//! With `n` samples and `d` features, the unbiased sample covariance `S` is
//! singular whenever `n <= d`, which is the usual situation for minority
//! modes of long time series. The shrunk estimate
//!
//! ```text
//! S* = λ·diag(S) + (1 − λ)·S
//! ```
//!
//! keeps every variance, damps the off-diagonal covariances, and is positive
//! definite for any `λ > 0` with positive variances. The intensity `λ` has a
//! closed form: the summed estimated variance of the off-diagonal sample
//! covariances divided by their summed squares, clamped to `[0, 1]`.

use std::io::Write;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::linalg::{cholesky, is_symmetric, mirror_lower, symmetric_eigen};
use crate::par::map_indices;
use crate::{OhitError, Result};

/// Eigenvalues below `ER_FLOOR_RATIO · λ_max` are raised to that floor in
/// eigen-regularization mode.
pub const ER_FLOOR_RATIO: f64 = 1e-4;
const RIDGE_START: f64 = 1e-8;
const RIDGE_STOP: f64 = 1e-2;
const RIDGE_SCALE_FLOOR: f64 = 1e-12;

/// How the sampling covariance of a cluster was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceKind {
    /// Optimal-intensity shrinkage toward the diagonal.
    Shrinkage,
    /// Plain sample covariance (intensity forced to zero).
    Sample,
    /// Sample covariance with small eigenvalues floored.
    EigenFloor,
    /// Single-sample cluster: zero covariance.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkageEstimate {
    pub cluster_id: usize,
    pub n: usize,
    pub mean: Array1<f64>,
    /// Unbiased sample covariance.
    pub covariance: Array2<f64>,
    /// Shrinkage intensity in `[0, 1]`.
    pub lambda: f64,
    /// Covariance used for sampling.
    pub shrunk: Array2<f64>,
    pub kind: CovarianceKind,
}

fn require_rows(c: ArrayView2<'_, f64>) -> Result<()> {
    if c.nrows() < 2 {
        return Err(OhitError::InsufficientData {
            needed: 2,
            got: c.nrows(),
        });
    }
    Ok(())
}

fn centered(c: ArrayView2<'_, f64>) -> (Array1<f64>, Array2<f64>) {
    let mean = c.mean_axis(Axis(0)).expect("at least one row");
    let centered = &c - &mean.view().insert_axis(Axis(0));
    (mean, centered)
}

/// Column means and unbiased (`n − 1`) covariance.
pub fn sample_moments(c: ArrayView2<'_, f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    require_rows(c)?;
    let n = c.nrows() as f64;
    let (mean, xc) = centered(c);
    let mut s = xc.t().dot(&xc) / (n - 1.0);
    mirror_lower(&mut s);
    Ok((mean, s))
}

/// Optimal shrinkage intensity toward the diagonal target.
///
/// With `w_kij = (x_ki − x̄_i)(x_kj − x̄_j)`, the estimated variance of each
/// sample covariance is `n/(n−1)³ · Σ_k (w_kij − w̄_ij)²`; the intensity is
/// the ratio of its off-diagonal sum to `Σ_{i≠j} s_ij²`, clamped to `[0, 1]`.
/// Returns 1 when `S` is already diagonal.
pub fn shrinkage_intensity(c: ArrayView2<'_, f64>) -> Result<f64> {
    require_rows(c)?;
    let (n, d) = c.dim();
    let nf = n as f64;
    let (_, xc) = centered(c);

    let per_row: Vec<(f64, f64)> = map_indices(d, |i| {
        let ci = xc.column(i);
        let mut var_part = 0.0;
        let mut sq_part = 0.0;
        for j in (i + 1)..d {
            let cj = xc.column(j);
            let w_mean = ci.dot(&cj) / nf;
            let dev: f64 = ci
                .iter()
                .zip(cj.iter())
                .map(|(a, b)| {
                    let e = a * b - w_mean;
                    e * e
                })
                .sum();
            let s_ij = w_mean * nf / (nf - 1.0);
            var_part += dev;
            sq_part += s_ij * s_ij;
        }
        (var_part, sq_part)
    });
    let (var_sum, sq_sum) = per_row
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    if sq_sum == 0.0 {
        return Ok(1.0);
    }
    // Both sums run over i < j; the symmetric halves cancel in the ratio.
    let var_sum = var_sum * nf / (nf - 1.0).powi(3);
    Ok((var_sum / sq_sum).clamp(0.0, 1.0))
}

/// `S* = λ·diag(S) + (1 − λ)·S`: off-diagonals scaled by `1 − λ`, diagonal
/// untouched.
pub fn shrink_covariance(s: ArrayView2<'_, f64>, lambda: f64) -> Result<Array2<f64>> {
    if !is_symmetric(s) {
        return Err(OhitError::Contract(
            "covariance matrix is not exactly symmetric".into(),
        ));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(OhitError::Parameter(format!(
            "shrinkage intensity must lie in [0, 1], got {lambda}"
        )));
    }
    let keep = 1.0 - lambda;
    let d = s.nrows();
    Ok(Array2::from_shape_fn((d, d), |(i, j)| {
        if i == j {
            s[[i, i]]
        } else {
            keep * s[[i, j]]
        }
    }))
}

/// Returns `s` unchanged when it factorizes; otherwise adds an escalating
/// ridge `ε·max(max diag, 1e-12)·I`, `ε = 1e-8, 1e-7, …, 1e-2`.
///
/// The second value is the ridge that was added (zero when none).
pub fn ensure_positive_definite(s: ArrayView2<'_, f64>) -> Result<(Array2<f64>, f64)> {
    let d = s.nrows();
    if s.ncols() != d {
        return Err(OhitError::Contract(format!(
            "covariance must be square, got {}x{}",
            d,
            s.ncols()
        )));
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(OhitError::NumericalDegeneracy(
            "covariance has non-finite entries".into(),
        ));
    }
    let diag_ok = s.diag().iter().all(|&v| v > 0.0);
    if diag_ok && cholesky(s).is_some() {
        return Ok((s.to_owned(), 0.0));
    }
    let scale = s
        .diag()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(RIDGE_SCALE_FLOOR);
    let mut eps = RIDGE_START;
    while eps <= RIDGE_STOP * (1.0 + 1e-9) {
        let ridge = eps * scale;
        let mut candidate = s.to_owned();
        candidate.diag_mut().mapv_inplace(|v| v + ridge);
        if cholesky(candidate.view()).is_some() {
            log::debug!("added ridge {ridge:e} to reach positive definiteness");
            return Ok((candidate, ridge));
        }
        eps *= 10.0;
    }
    Err(OhitError::NumericalDegeneracy(
        "covariance not factorizable after ridge escalation".into(),
    ))
}

/// Eigenvalue floor: eigenvalues below `ER_FLOOR_RATIO · λ_max` are raised
/// to that value and the matrix is rebuilt.
pub fn regularize_er(s: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    if !is_symmetric(s) {
        return Err(OhitError::Contract(
            "covariance matrix is not exactly symmetric".into(),
        ));
    }
    let (values, vectors) = symmetric_eigen(s)?;
    let max = values.iter().copied().fold(0.0f64, f64::max);
    let floor = ER_FLOOR_RATIO * max;
    if values.iter().all(|&v| v >= floor) {
        return Ok(s.to_owned());
    }
    let clamped = values.mapv(|v| v.max(floor));
    let scaled = &vectors * &clamped.view().insert_axis(Axis(0));
    let mut out = scaled.dot(&vectors.t());
    mirror_lower(&mut out);
    Ok(out)
}

/// Full shrinkage estimate for one cluster of at least two samples.
pub fn estimate(cluster_id: usize, c: ArrayView2<'_, f64>) -> Result<ShrinkageEstimate> {
    let (mean, covariance) = sample_moments(c)?;
    let lambda = shrinkage_intensity(c)?;
    let shrunk = shrink_covariance(covariance.view(), lambda)?;
    Ok(ShrinkageEstimate {
        cluster_id,
        n: c.nrows(),
        mean,
        covariance,
        lambda,
        shrunk,
        kind: CovarianceKind::Shrinkage,
    })
}

/// Estimate with the intensity forced to zero.
pub fn estimate_unshrunk(cluster_id: usize, c: ArrayView2<'_, f64>) -> Result<ShrinkageEstimate> {
    let (mean, covariance) = sample_moments(c)?;
    Ok(ShrinkageEstimate {
        cluster_id,
        n: c.nrows(),
        mean,
        shrunk: covariance.clone(),
        covariance,
        lambda: 0.0,
        kind: CovarianceKind::Sample,
    })
}

/// Estimate whose sampling covariance is the eigen-floored sample covariance.
pub fn estimate_er(cluster_id: usize, c: ArrayView2<'_, f64>) -> Result<ShrinkageEstimate> {
    let (mean, covariance) = sample_moments(c)?;
    let shrunk = regularize_er(covariance.view())?;
    Ok(ShrinkageEstimate {
        cluster_id,
        n: c.nrows(),
        mean,
        covariance,
        lambda: 0.0,
        shrunk,
        kind: CovarianceKind::EigenFloor,
    })
}

/// Zero-covariance estimate centered on a lone sample.
pub fn estimate_singleton(cluster_id: usize, row: ArrayView1<'_, f64>) -> ShrinkageEstimate {
    let d = row.len();
    ShrinkageEstimate {
        cluster_id,
        n: 1,
        mean: row.to_owned(),
        covariance: Array2::zeros((d, d)),
        lambda: 1.0,
        shrunk: Array2::zeros((d, d)),
        kind: CovarianceKind::Degenerate,
    }
}

/// Ratio of largest to smallest eigenvalue; infinite for singular matrices.
pub fn condition_number(s: ArrayView2<'_, f64>) -> Result<f64> {
    let (values, _) = symmetric_eigen(s)?;
    let lo = values[0];
    let hi = values[values.len() - 1];
    Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
}

/// Writes `cluster_id, n, lambda, condition_number` rows.
pub fn write_dump<W: Write>(
    estimates: &[ShrinkageEstimate],
    mut w: W,
    delimiter: char,
) -> Result<()> {
    writeln!(
        w,
        "cluster_id{delimiter}n{delimiter}lambda{delimiter}condition_number"
    )?;
    for e in estimates {
        let cond = condition_number(e.shrunk.view())?;
        writeln!(
            w,
            "{}{delimiter}{}{delimiter}{}{delimiter}{}",
            e.cluster_id, e.n, e.lambda, cond
        )?;
    }
    Ok(())
}
