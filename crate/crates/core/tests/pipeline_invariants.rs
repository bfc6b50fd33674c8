use approx::assert_abs_diff_eq;
use ndarray::{Array1, Array2, Axis};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ohit::baselines::{random_oversample, smote};
use ohit::datasets::BinaryDataset;
use ohit::generate::gaussian_blobs;
use ohit::linalg::euclidean;
use ohit::pipeline::{ohit, resample, Eta, Method, Mode, OhitConfig};
use ohit::shrinkage::{shrink_covariance, shrinkage_intensity};
use ohit::synthesis::{allocate, sample_gaussian};

fn two_mode_dataset(seed: u64) -> BinaryDataset {
    let (min, _) = gaussian_blobs(&[15, 20], 24, 20.0, seed);
    let (maj, _) = gaussian_blobs(&[150], 24, 0.0, seed + 1000);
    BinaryDataset::from_parts("two_mode", min, maj, "1", "0").unwrap()
}

proptest! {
    #[test]
    fn shrinkage_is_linear_in_lambda(
        vals in prop::collection::vec(-5.0f64..5.0, 16),
        lambda in 0.0f64..=1.0,
    ) {
        let a = Array2::from_shape_vec((4, 4), vals).unwrap();
        let s = &a + &a.t();
        let shrunk = shrink_covariance(s.view(), lambda).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { s[[i, j]] } else { (1.0 - lambda) * s[[i, j]] };
                prop_assert!((shrunk[[i, j]] - expected).abs() <= 1e-12);
            }
        }
        prop_assert!(shrink_covariance(s.view(), lambda + 1.01).is_err());
    }

    #[test]
    fn allocation_covers_eta(sizes in prop::collection::vec(1usize..30, 1..6), eta in 0usize..500) {
        let n: usize = sizes.iter().sum();
        let plan = allocate(eta, &sizes, n).unwrap();
        prop_assert!(plan.total() >= eta);
        prop_assert!(plan.total() <= eta + sizes.len());
        for (i, &(id, count)) in plan.per_cluster.iter().enumerate() {
            prop_assert_eq!(id, i + 1);
            prop_assert_eq!(count, (eta * sizes[i]).div_ceil(n));
        }
    }
}

#[test]
fn gaussian_draws_converge_to_target_moments() {
    let mean = Array1::from_vec(vec![1.0, -2.0, 0.5]);
    let cov = ndarray::array![[2.0, 0.6, 0.0], [0.6, 1.0, -0.3], [0.0, -0.3, 0.5]];
    let x = sample_gaussian(mean.view(), cov.view(), 200_000, 17).unwrap();
    let m = x.mean_axis(Axis(0)).unwrap();
    let c = &x - &m.clone().insert_axis(Axis(0));
    let s = c.t().dot(&c) / (x.nrows() as f64 - 1.0);
    for i in 0..3 {
        assert_abs_diff_eq!(m[i], mean[i], epsilon = 0.01);
        for j in 0..3 {
            assert_abs_diff_eq!(s[[i, j]], cov[[i, j]], epsilon = 0.02);
        }
    }
}

#[test]
fn intensity_is_one_for_uncorrelated_constant_columns() {
    let x = Array2::from_shape_fn((6, 3), |(i, j)| if j == 0 { i as f64 } else { 1.0 });
    assert_eq!(shrinkage_intensity(x.view()).unwrap(), 1.0);
}

#[test]
fn smote_samples_lie_on_segments() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts = Array2::from_shape_fn((12, 5), |_| rng.random_range(-3.0..3.0));
    let out = smote(pts.view(), 40, 5, 9).unwrap();
    assert_eq!(out.synthetic.len(), 40);
    for (row, draw) in out.synthetic.samples.rows().into_iter().zip(&out.draws) {
        assert!((0.0..1.0).contains(&draw.gap));
        let a = pts.row(draw.base);
        let b = pts.row(draw.neighbor);
        let expected = &a + &((&b - &a) * draw.gap);
        assert!(euclidean(row, expected.view()) <= 1e-12);
    }
}

#[test]
fn random_oversampling_copies_rows() {
    let pts = Array2::from_shape_fn((7, 3), |(i, j)| (i * 3 + j) as f64);
    let out = random_oversample(pts.view(), 20, 2).unwrap();
    for (row, &src) in out.samples.rows().into_iter().zip(&out.provenance) {
        assert_eq!(row, pts.row(src));
    }
}

#[test]
fn every_method_preserves_majority_and_original_minority() {
    let data = two_mode_dataset(3);
    let methods = [
        Method::None,
        Method::Ros,
        Method::Smote,
        Method::Ohit(Mode::Full),
        Method::Ohit(Mode::NoDrsnn),
        Method::Ohit(Mode::NoShrinkage),
        Method::Ohit(Mode::Er),
    ];
    for method in methods {
        let r = resample(&data, method, &OhitConfig::default()).unwrap();
        assert_eq!(r.data.majority(), data.majority(), "{method}");
        assert_eq!(
            r.data.minority().slice(ndarray::s![..35, ..]),
            data.minority(),
            "{method}"
        );
        assert!(r.data.minority().iter().all(|v| v.is_finite()));
        if method != Method::None {
            assert!(r.summary.n_min_after >= data.n_maj(), "{method}");
        }
    }
}

#[test]
fn modes_produce_equal_counts_for_a_single_cluster() {
    let data = two_mode_dataset(5);
    let cfg = OhitConfig {
        eta: Eta::Count(77),
        ..Default::default()
    };
    let lens: Vec<usize> = [Mode::NoDrsnn, Mode::NoShrinkage, Mode::Er]
        .iter()
        .map(|&mode| {
            let run = ohit(
                &data,
                &OhitConfig {
                    mode,
                    ..cfg.clone()
                },
            )
            .unwrap();
            run.synthetic.len()
        })
        .collect();
    let full = ohit(&data, &cfg).unwrap();
    let m = full.labeling.num_clusters();
    assert!(full.synthetic.len() >= 77 && full.synthetic.len() <= 77 + m);
    assert_eq!(lens[0], 77);
}

#[test]
fn no_shrinkage_matches_full_when_intensity_is_zero() {
    // Two samples per cluster give a zero intensity estimate.
    let min = ndarray::array![[0.0, 0.0], [1.0, 2.0]];
    let maj = Array2::from_shape_fn((10, 2), |(i, j)| (i + j) as f64);
    let data = BinaryDataset::from_parts("tiny", min, maj, "1", "0").unwrap();
    let full = ohit(
        &data,
        &OhitConfig {
            mode: Mode::NoDrsnn,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(full.estimates[0].lambda, 0.0);
    let plain = ohit(
        &data,
        &OhitConfig {
            mode: Mode::NoShrinkage,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(full.synthetic.samples, plain.synthetic.samples);
}

#[test]
fn runs_are_deterministic_per_seed() {
    let data = two_mode_dataset(6);
    let cfg = OhitConfig {
        seed: 42,
        ..Default::default()
    };
    let a = ohit(&data, &cfg).unwrap();
    let b = ohit(&data, &cfg).unwrap();
    assert_eq!(a.synthetic, b.synthetic);
    let c = ohit(&data, &OhitConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(a.synthetic.samples, c.synthetic.samples);
}

#[test]
fn synthetic_rows_follow_their_cluster() {
    let data = two_mode_dataset(7);
    let run = ohit(&data, &OhitConfig::default()).unwrap();
    assert_eq!(run.labeling.num_clusters(), 2);
    for id in 1..=2 {
        let members = data.minority().select(Axis(0), &run.labeling.members(id));
        let center = members.mean_axis(Axis(0)).unwrap();
        let drawn = run.synthetic.from_cluster(id);
        let drawn_center = drawn.mean_axis(Axis(0)).unwrap();
        let other = 3 - id;
        let other_center = data
            .minority()
            .select(Axis(0), &run.labeling.members(other))
            .mean_axis(Axis(0))
            .unwrap();
        assert!(
            euclidean(drawn_center.view(), center.view())
                < euclidean(drawn_center.view(), other_center.view())
        );
    }
}

#[test]
fn already_balanced_data_gets_no_samples() {
    let (min, _) = gaussian_blobs(&[30], 5, 0.0, 1);
    let (maj, _) = gaussian_blobs(&[20], 5, 0.0, 2);
    let data = BinaryDataset::from_parts("flipped", min, maj, "1", "0").unwrap();
    let r = resample(&data, Method::Ohit(Mode::Full), &OhitConfig::default()).unwrap();
    assert_eq!(r.summary.n_min_after, 30);
}

#[test]
fn thread_count_does_not_change_results() {
    let data = two_mode_dataset(8);
    let cfg = OhitConfig {
        seed: 5,
        ..Default::default()
    };
    let run_in = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ohit(&data, &cfg).unwrap())
    };
    let one = run_in(1);
    let four = run_in(4);
    assert_eq!(one.labeling.assignment(), four.labeling.assignment());
    assert_eq!(one.synthetic, four.synthetic);
    let lambdas = |r: &ohit::pipeline::OhitRun| {
        r.estimates
            .iter()
            .map(|e| e.lambda.to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(lambdas(&one), lambdas(&four));
}
