//! Allocation of synthetic samples to clusters and Gaussian sampling.

use ndarray::{concatenate, Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::cholesky;
use crate::par::map_slice;
use crate::shrinkage::{ensure_positive_definite, ShrinkageEstimate};
use crate::{OhitError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisPlan {
    /// `(cluster_id, count)` in cluster order.
    pub per_cluster: Vec<(usize, usize)>,
    pub eta_total: usize,
    pub seed: u64,
}

impl SynthesisPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Total rows the plan produces; at least `eta_total`, at most
    /// `eta_total + m`.
    pub fn total(&self) -> usize {
        self.per_cluster.iter().map(|&(_, c)| c).sum()
    }
}

/// Gives cluster `i` (id `i + 1`) `ceil(eta · |C_i| / n_min)` samples.
/// The ceiling overshoot is kept.
pub fn allocate(eta: usize, cluster_sizes: &[usize], n_min: usize) -> Result<SynthesisPlan> {
    let total: usize = cluster_sizes.iter().sum();
    if total != n_min || n_min == 0 {
        return Err(OhitError::Contract(format!(
            "cluster sizes sum to {total}, minority has {n_min} samples"
        )));
    }
    if cluster_sizes.contains(&0) {
        return Err(OhitError::Contract("empty cluster in allocation".into()));
    }
    let per_cluster = cluster_sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let num = eta as u128 * size as u128;
            (i + 1, num.div_ceil(n_min as u128) as usize)
        })
        .collect();
    Ok(SynthesisPlan {
        per_cluster,
        eta_total: eta,
        seed: 0,
    })
}

/// Draws `count` rows `mean + L z` where `L Lᵀ = covariance` and `z` is
/// standard normal from a ChaCha8 stream seeded with `seed`.
pub fn sample_gaussian(
    mean: ArrayView1<'_, f64>,
    covariance: ArrayView2<'_, f64>,
    count: usize,
    seed: u64,
) -> Result<Array2<f64>> {
    let d = mean.len();
    if covariance.dim() != (d, d) {
        return Err(OhitError::Contract(format!(
            "mean has length {d}, covariance is {:?}",
            covariance.dim()
        )));
    }
    let l = cholesky(covariance).ok_or_else(|| {
        OhitError::NumericalDegeneracy("covariance is not positive definite".into())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Array2::zeros((count, d));
    let mut z = Array1::<f64>::zeros(d);
    for mut row in out.rows_mut() {
        z.mapv_inplace(|_| StandardNormal.sample(&mut rng));
        // Lower-triangular product; skips the zero upper half.
        for i in 0..d {
            let li = l.row(i);
            let mut acc = mean[i];
            for j in 0..=i {
                acc += li[j] * z[j];
            }
            row[i] = acc;
        }
    }
    Ok(out)
}

/// Generated samples and the cluster each was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSet {
    pub samples: Array2<f64>,
    pub provenance: Vec<usize>,
}

impl SyntheticSet {
    pub fn empty(d: usize) -> Self {
        Self {
            samples: Array2::zeros((0, d)),
            provenance: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rows drawn from cluster `id`.
    pub fn from_cluster(&self, id: usize) -> Array2<f64> {
        let rows: Vec<usize> = (0..self.len())
            .filter(|&i| self.provenance[i] == id)
            .collect();
        self.samples.select(Axis(0), &rows)
    }
}

/// Seed of one cluster's sub-stream.
pub fn cluster_seed(seed: u64, cluster_id: usize) -> u64 {
    seed ^ cluster_id as u64
}

/// Draws every cluster's share from its Gaussian and concatenates the
/// draws in plan order.
pub fn synthesize(plan: &SynthesisPlan, estimates: &[ShrinkageEstimate]) -> Result<SyntheticSet> {
    let d = estimates
        .first()
        .map(|e| e.mean.len())
        .ok_or_else(|| OhitError::Contract("no cluster estimates".into()))?;
    if estimates.len() != plan.per_cluster.len() {
        return Err(OhitError::Contract(format!(
            "plan covers {} clusters, {} estimates given",
            plan.per_cluster.len(),
            estimates.len()
        )));
    }
    let mut jobs = Vec::with_capacity(plan.per_cluster.len());
    for &(id, count) in &plan.per_cluster {
        let est = estimates
            .iter()
            .find(|e| e.cluster_id == id)
            .ok_or_else(|| OhitError::Contract(format!("no estimate for cluster {id}")))?;
        jobs.push((id, count, est));
    }

    let draws: Vec<Result<(usize, Array2<f64>)>> = map_slice(&jobs, |&(id, count, est)| {
        if count == 0 {
            return Ok((id, Array2::zeros((0, d))));
        }
        let (cov, _) = ensure_positive_definite(est.shrunk.view())?;
        let rows = sample_gaussian(
            est.mean.view(),
            cov.view(),
            count,
            cluster_seed(plan.seed, id),
        )?;
        Ok((id, rows))
    });

    let mut blocks = Vec::with_capacity(draws.len());
    let mut provenance = Vec::with_capacity(plan.total());
    for draw in draws {
        let (id, rows) = draw?;
        provenance.extend(std::iter::repeat_n(id, rows.nrows()));
        blocks.push(rows);
    }
    let views: Vec<_> = blocks.iter().map(|b| b.view()).collect();
    let samples = if views.is_empty() {
        Array2::zeros((0, d))
    } else {
        concatenate(Axis(0), &views).map_err(|e| OhitError::Contract(e.to_string()))?
    };
    Ok(SyntheticSet {
        samples,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shrinkage::estimate;
    use ndarray::array;

    #[test]
    fn allocation_examples() {
        let p = allocate(50, &[30, 70], 100).unwrap();
        assert_eq!(p.per_cluster, vec![(1, 15), (2, 35)]);
        let p = allocate(0, &[3, 4], 7).unwrap();
        assert_eq!(p.total(), 0);
        let p = allocate(10, &[1, 1, 1], 3).unwrap();
        assert_eq!(p.per_cluster, vec![(1, 4), (2, 4), (3, 4)]);
        assert!(allocate(10, &[1, 1], 3).is_err());
        assert!(allocate(10, &[0, 3], 3).is_err());
    }

    #[test]
    fn allocation_exhaustive_bounds() {
        let sizes = [4, 7, 1, 9];
        let n: usize = sizes.iter().sum();
        for eta in 0..=3 * n {
            let p = allocate(eta, &sizes, n).unwrap();
            for (&(_, c), &s) in p.per_cluster.iter().zip(&sizes) {
                // smallest c with c * n >= eta * s
                assert!(c * n >= eta * s);
                assert!(c == 0 || (c - 1) * n < eta * s);
            }
            assert!(p.total() >= eta && p.total() <= eta + sizes.len());
        }
    }

    #[test]
    fn empty_and_degenerate_draws() {
        let s = sample_gaussian(array![0.0].view(), array![[1.0]].view(), 0, 1).unwrap();
        assert_eq!(s.dim(), (0, 1));

        let (cov, _) = ensure_positive_definite(array![[0.0]].view()).unwrap();
        let s = sample_gaussian(array![5.0].view(), cov.view(), 100, 1).unwrap();
        assert!(s.iter().all(|&v| (v - 5.0).abs() < 1e-6));

        assert!(sample_gaussian(array![0.0, 0.0].view(), array![[1.0]].view(), 1, 1).is_err());
        assert!(matches!(
            sample_gaussian(array![0.0].view(), array![[-1.0]].view(), 1, 1),
            Err(OhitError::NumericalDegeneracy(_))
        ));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let cov = array![[2.0, 0.3], [0.3, 1.0]];
        let a = sample_gaussian(array![1.0, 2.0].view(), cov.view(), 50, 9).unwrap();
        let b = sample_gaussian(array![1.0, 2.0].view(), cov.view(), 50, 9).unwrap();
        let c = sample_gaussian(array![1.0, 2.0].view(), cov.view(), 50, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn identity_moments() {
        let s =
            sample_gaussian(array![0.0, 0.0].view(), Array2::eye(2).view(), 100_000, 42).unwrap();
        let mean = s.mean_axis(Axis(0)).unwrap();
        for m in mean.iter() {
            assert!(m.abs() < 0.02, "mean {m}");
        }
        let cov = s.t().dot(&s) / (s.nrows() as f64 - 1.0);
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (cov[[i, j]] - target).abs() < 0.02,
                    "cov[{i},{j}] = {}",
                    cov[[i, j]]
                );
            }
        }
    }

    fn two_estimates() -> Vec<ShrinkageEstimate> {
        let a = array![[0.0, 0.0], [1.0, 0.5], [0.2, 1.0], [0.9, 0.1]];
        let b = &a + 10.0;
        vec![
            estimate(1, a.view()).unwrap(),
            estimate(2, b.view()).unwrap(),
        ]
    }

    #[test]
    fn provenance_bookkeeping() {
        let plan = SynthesisPlan {
            per_cluster: vec![(1, 2), (2, 3)],
            eta_total: 5,
            seed: 3,
        };
        let set = synthesize(&plan, &two_estimates()).unwrap();
        assert_eq!(set.len(), 5);
        assert_eq!(set.provenance, vec![1, 1, 2, 2, 2]);
        assert_eq!(set.from_cluster(2).nrows(), 3);
    }

    #[test]
    fn order_independent_per_cluster_streams() {
        let est = two_estimates();
        let fwd = SynthesisPlan {
            per_cluster: vec![(1, 4), (2, 6)],
            eta_total: 10,
            seed: 77,
        };
        let rev = SynthesisPlan {
            per_cluster: vec![(2, 6), (1, 4)],
            ..fwd.clone()
        };
        let a = synthesize(&fwd, &est).unwrap();
        let mut rev_est = est.clone();
        rev_est.reverse();
        let b = synthesize(&rev, &rev_est).unwrap();
        assert_eq!(a.from_cluster(1), b.from_cluster(1));
        assert_eq!(a.from_cluster(2), b.from_cluster(2));
    }

    #[test]
    fn mismatched_ids() {
        let plan = SynthesisPlan {
            per_cluster: vec![(1, 2), (3, 3)],
            eta_total: 5,
            seed: 0,
        };
        assert!(matches!(
            synthesize(&plan, &two_estimates()),
            Err(OhitError::Contract(_))
        ));
    }
}
