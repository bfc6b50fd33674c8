//! Reference oversamplers: random oversampling and SMOTE.

use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drsnn::knn_lists;
use crate::synthesis::SyntheticSet;
use crate::{OhitError, Result};

pub const DEFAULT_SMOTE_K: usize = 5;

/// Draws `eta` rows uniformly with replacement. Provenance holds the source
/// row index.
pub fn random_oversample(
    points: ArrayView2<'_, f64>,
    eta: usize,
    seed: u64,
) -> Result<SyntheticSet> {
    let n = points.nrows();
    if n == 0 {
        return Err(OhitError::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<usize> = (0..eta).map(|_| rng.random_range(0..n)).collect();
    Ok(SyntheticSet {
        samples: points.select(ndarray::Axis(0), &picks),
        provenance: picks,
    })
}

/// One SMOTE interpolation: `base + gap · (neighbor − base)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoteDraw {
    pub base: usize,
    pub neighbor: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoteOutput {
    /// Provenance holds the base row index.
    pub synthetic: SyntheticSet,
    pub draws: Vec<SmoteDraw>,
}

/// SMOTE: base rows are taken cyclically in index order; each is
/// interpolated toward a uniformly chosen member of its `k` nearest minority
/// neighbors with a gap drawn from `[0, 1)`.
///
/// Falls back to random oversampling (with a warning) for a single minority
/// sample. `k` is clamped to `n − 1`.
pub fn smote(points: ArrayView2<'_, f64>, eta: usize, k: usize, seed: u64) -> Result<SmoteOutput> {
    let (n, d) = points.dim();
    if n == 0 {
        return Err(OhitError::EmptyInput);
    }
    if n == 1 {
        log::warn!("SMOTE needs two minority samples; falling back to random oversampling");
        let synthetic = random_oversample(points, eta, seed)?;
        let draws = vec![
            SmoteDraw {
                base: 0,
                neighbor: 0,
                gap: 0.0
            };
            eta
        ];
        return Ok(SmoteOutput { synthetic, draws });
    }
    if eta == 0 {
        return Ok(SmoteOutput {
            synthetic: SyntheticSet::empty(d),
            draws: Vec::new(),
        });
    }
    let nt = knn_lists(points, k.max(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Array2::zeros((eta, d));
    let mut draws = Vec::with_capacity(eta);
    for (r, mut row) in samples.rows_mut().into_iter().enumerate() {
        let base = r % n;
        let nbrs = nt.neighbors(base);
        let neighbor = nbrs[rng.random_range(0..nbrs.len())];
        let gap: f64 = rng.random_range(0.0..1.0);
        let x = points.row(base);
        let y = points.row(neighbor);
        for j in 0..d {
            row[j] = x[j] + gap * (y[j] - x[j]);
        }
        draws.push(SmoteDraw {
            base,
            neighbor,
            gap,
        });
    }
    Ok(SmoteOutput {
        synthetic: SyntheticSet {
            samples,
            provenance: draws.iter().map(|dr| dr.base).collect(),
        },
        draws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn ros_basics() {
        let p = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        assert!(random_oversample(p.view(), 0, 1).unwrap().is_empty());
        let out = random_oversample(p.view(), 40, 1).unwrap();
        for (row, &src) in out.samples.rows().into_iter().zip(&out.provenance) {
            assert_eq!(row, p.row(src));
        }
        assert_eq!(out, random_oversample(p.view(), 40, 1).unwrap());

        let single = array![[7.0, 8.0]];
        let out = random_oversample(single.view(), 5, 9).unwrap();
        assert_eq!(
            out.samples,
            Array2::from_shape_fn((5, 2), |(_, j)| single[[0, j]])
        );
    }

    #[test]
    fn smote_identical_points() {
        let p = array![[2.0, 2.0], [2.0, 2.0]];
        let out = smote(p.view(), 7, 5, 3).unwrap();
        assert!(out.synthetic.samples.iter().all(|&v| v == 2.0));
    }

    #[test]
    fn smote_cycles_bases_and_logs_draws() {
        let p = array![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0]];
        let out = smote(p.view(), 10, 2, 11).unwrap();
        let bases: Vec<usize> = out.draws.iter().map(|d| d.base).collect();
        assert_eq!(bases, vec![0, 1, 2, 3, 0, 1, 2, 3, 0, 1]);
        for (row, dr) in out.synthetic.samples.rows().into_iter().zip(&out.draws) {
            assert!((0.0..1.0).contains(&dr.gap));
            assert_ne!(dr.base, dr.neighbor);
            let x = p.row(dr.base);
            let y = p.row(dr.neighbor);
            for j in 0..2 {
                assert_eq!(row[j], x[j] + dr.gap * (y[j] - x[j]));
            }
        }
    }

    #[test]
    fn smote_single_sample_falls_back() {
        let p = array![[3.0, 1.0]];
        let out = smote(p.view(), 4, 5, 0).unwrap();
        assert_eq!(out.synthetic.len(), 4);
        assert!(out
            .synthetic
            .samples
            .rows()
            .into_iter()
            .all(|r| r == p.row(0)));
    }
}
