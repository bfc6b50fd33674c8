//! Small dense linear-algebra helpers over `ndarray` matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::{OhitError, Result};

/// Euclidean distance between two equal-length vectors.
pub fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    squared_euclidean(a, b).sqrt()
}

pub fn squared_euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// True when `m` is square and every mirrored pair of entries is bit-equal.
pub fn is_symmetric(m: ArrayView2<'_, f64>) -> bool {
    let (r, c) = m.dim();
    if r != c {
        return false;
    }
    for i in 0..r {
        for j in (i + 1)..c {
            if m[[i, j]].to_bits() != m[[j, i]].to_bits() {
                return false;
            }
        }
    }
    true
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = m`.
///
/// Returns `None` when a pivot is not strictly positive (or not finite), i.e.
/// when `m` is not numerically positive definite. Only the lower triangle of
/// `m` is read.
pub fn cholesky(m: ArrayView2<'_, f64>) -> Option<Array2<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return None;
    }
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut pivot = m[[j, j]];
        for p in 0..j {
            pivot -= l[[j, p]] * l[[j, p]];
        }
        if pivot.is_nan() || pivot <= 0.0 || !pivot.is_finite() {
            return None;
        }
        let ljj = pivot.sqrt();
        l[[j, j]] = ljj;
        for i in (j + 1)..n {
            let mut s = m[[i, j]];
            for p in 0..j {
                s -= l[[i, p]] * l[[j, p]];
            }
            l[[i, j]] = s / ljj;
        }
    }
    Some(l)
}

/// Eigen-decomposition of a symmetric matrix: eigenvalues (ascending) and the
/// matching eigenvectors as columns.
pub fn symmetric_eigen(m: ArrayView2<'_, f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(OhitError::Contract(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(OhitError::NumericalDegeneracy(
            "matrix has non-finite entries".into(),
        ));
    }
    let dm = DMatrix::from_fn(n, n, |i, j| m[[i, j]]);
    let eig = SymmetricEigen::try_new(dm, f64::EPSILON, 10_000).ok_or_else(|| {
        OhitError::NumericalDegeneracy("symmetric eigendecomposition did not converge".into())
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Array1::from_iter(order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = Array2::from_shape_fn((n, n), |(r, c)| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: ArrayView2<'_, f64>) -> Result<f64> {
    let (values, _) = symmetric_eigen(m)?;
    Ok(values.get(0).copied().unwrap_or(0.0))
}

/// Copies the lower triangle onto the upper one so mirrored entries are
/// bit-equal.
pub fn mirror_lower(m: &mut Array2<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            m[[i, j]] = m[[j, i]];
        }
    }
}
