//! Seeded synthetic data: planted Gaussian blobs and an imbalanced,
//! multimodal time-series benchmark. Used by tests, benches and examples.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::datasets::BinaryDataset;
use crate::Result;

/// Isotropic unit-variance blobs with random centers whose pairwise
/// distances are about `separation`. Returns the points and 1-based planted
/// labels, blob by blob.
pub fn gaussian_blobs(
    sizes: &[usize],
    d: usize,
    separation: f64,
    seed: u64,
) -> (Array2<f64>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center_sd = separation / (2.0 * d as f64).sqrt();
    let total: usize = sizes.iter().sum();
    let mut points = Array2::zeros((total, d));
    let mut labels = Vec::with_capacity(total);
    let mut row = 0;
    for (b, &size) in sizes.iter().enumerate() {
        let center: Array1<f64> =
            Array1::from_shape_fn(d, |_| center_sd * rng.sample::<f64, _>(StandardNormal));
        for _ in 0..size {
            for j in 0..d {
                points[[row, j]] = center[j] + rng.sample::<f64, _>(StandardNormal);
            }
            labels.push(b + 1);
            row += 1;
        }
    }
    (points, labels)
}

/// Layout of a synthetic two-class series benchmark.
///
/// Each class is a mixture of waveform modes; every sample is one mode's
/// waveform plus AR(1) noise, so neighboring time steps are strongly
/// correlated as in real sensor series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesBenchmark {
    pub length: usize,
    pub minority_modes: usize,
    pub majority_modes: usize,
    pub train: (usize, usize),
    pub test: (usize, usize),
    /// Marginal standard deviation of the AR(1) noise.
    pub noise: f64,
    /// AR(1) coefficient.
    pub ar: f64,
}

impl Default for SeriesBenchmark {
    fn default() -> Self {
        Self {
            length: 100,
            minority_modes: 3,
            majority_modes: 3,
            train: (30, 300),
            test: (60, 300),
            noise: 0.5,
            ar: 0.9,
        }
    }
}

struct Mode {
    freq: f64,
    phase: f64,
    amp: f64,
}

impl Mode {
    fn value(&self, t: usize, length: usize) -> f64 {
        self.amp * (2.0 * PI * self.freq * t as f64 / length as f64 + self.phase).sin()
    }
}

impl SeriesBenchmark {
    /// Generates `(train, test)`. Minority rows are tagged `"1"`, majority
    /// rows `"0"`.
    pub fn generate(&self, seed: u64) -> Result<(BinaryDataset, BinaryDataset)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let min_modes: Vec<Mode> = (0..self.minority_modes)
            .map(|i| Mode {
                freq: 1.0 + i as f64,
                phase: rng.random_range(0.0..2.0 * PI),
                amp: 1.0,
            })
            .collect();
        // Majority modes share frequencies with the minority but sit at a
        // different phase, so the classes overlap under noise.
        let maj_modes: Vec<Mode> = (0..self.majority_modes)
            .map(|i| {
                let base = &min_modes[i % min_modes.len().max(1)];
                Mode {
                    freq: base.freq,
                    phase: base.phase + rng.random_range(0.6..0.9),
                    amp: 1.0,
                }
            })
            .collect();

        let train = (
            self.draw(&min_modes, self.train.0, &mut rng),
            self.draw(&maj_modes, self.train.1, &mut rng),
        );
        let test = (
            self.draw(&min_modes, self.test.0, &mut rng),
            self.draw(&maj_modes, self.test.1, &mut rng),
        );
        Ok((
            BinaryDataset::from_parts("synthetic_train", train.0, train.1, "1", "0")?,
            BinaryDataset::from_parts("synthetic_test", test.0, test.1, "1", "0")?,
        ))
    }

    fn draw(&self, modes: &[Mode], count: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        let innovation = Normal::new(0.0, self.noise * (1.0 - self.ar * self.ar).sqrt())
            .expect("finite noise scale");
        let start = Normal::new(0.0, self.noise).expect("finite noise scale");
        let mut out = Array2::zeros((count, self.length));
        for r in 0..count {
            let mode = &modes[r % modes.len()];
            let mut e = start.sample(rng);
            for t in 0..self.length {
                if t > 0 {
                    e = self.ar * e + innovation.sample(rng);
                }
                out[[r, t]] = mode.value(t, self.length) + e;
            }
        }
        out
    }
}
