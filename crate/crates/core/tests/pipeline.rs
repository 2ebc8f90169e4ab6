use proptest::prelude::*;

use despeckle::bench::{registered_methods, run_bench, BenchConfig};
use despeckle::image::{read_pgm, read_raw, write_pgm, write_raw, PgmMaxval};
use despeckle::phantom::phantom;
use despeckle::pipeline::{despeckle, DespeckleOptions, Despeckler};
use despeckle::report::{to_csv, Precision};
use despeckle::shrink::{analytic_iterations, KalmanShrinkConfig, ShrinkMethod};
use despeckle::speckle::{apply_speckle, SpeckleSpec};
use despeckle::GrayImage;

fn speckled_phantom(side: usize, seed: u64) -> GrayImage {
    let p = phantom(side).unwrap();
    apply_speckle(&p.clean, &SpeckleSpec::gamma(4, seed))
        .unwrap()
        .0
}

#[test]
fn raw_round_trip_is_exact() {
    let img = speckled_phantom(64, 3);
    assert_eq!(read_raw(&write_raw(&img)).unwrap(), img);
}

#[test]
fn sixteen_bit_pgm_round_trip_within_half_step() {
    let img = speckled_phantom(64, 4).map(|p| p.min(65535.0)).unwrap();
    let back = read_pgm(&write_pgm(&img, PgmMaxval::Sixteen)).unwrap();
    for (a, b) in img.pixels().iter().zip(back.pixels()) {
        assert!((a - b).abs() <= 0.5, "{a} vs {b}");
    }
}

#[test]
fn wavelet_methods_keep_the_mean() {
    // the approximation band is never touched, so the mean survives on even sizes
    let noisy = speckled_phantom(128, 5);
    let cfg = BenchConfig::default();
    for d in registered_methods(&cfg) {
        if !matches!(d, Despeckler::Wavelet { .. }) {
            continue;
        }
        for levels in 1..=3 {
            let out = despeckle(
                &noisy,
                &d,
                &DespeckleOptions {
                    levels,
                    sigma_n: None,
                },
            )
            .unwrap();
            let (a, b) = (noisy.stats().mean, out.image.stats().mean);
            assert!(
                (a - b).abs() <= 1e-9 * a,
                "{} levels {levels}: {a} vs {b}",
                d.name()
            );
        }
    }
}

#[test]
fn kalman_subbands_report_analytic_iterations() {
    let noisy = speckled_phantom(128, 6);
    let cfg = KalmanShrinkConfig::default();
    let d = Despeckler::Wavelet {
        method: ShrinkMethod::Kalman(cfg),
    };
    let out = despeckle(
        &noisy,
        &d,
        &DespeckleOptions {
            levels: 2,
            sigma_n: None,
        },
    )
    .unwrap();
    let noise_var = out.noise.unwrap().variance();
    assert_eq!(out.subbands.len(), 6);
    for sb in &out.subbands {
        let (p0, iters) = (sb.kalman_p0.unwrap(), sb.kalman_iterations.unwrap());
        let t = analytic_iterations(
            noise_var,
            p0,
            cfg.final_covariance(noise_var),
            cfg.max_iters,
        )
        .unwrap();
        assert!((iters as f64 - t.ceil()).abs() <= 1.0, "{iters} vs {t}");
    }
}

#[test]
fn bench_is_identical_across_thread_pools() {
    let p = phantom(96).unwrap();
    let cfg = BenchConfig::default();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| run_bench(&p.clean, &p.edges, &cfg).unwrap())
    };
    let (one, many) = (run(1), run(4));
    assert_eq!(one, many);
    assert_eq!(
        to_csv(&one.rows, Precision::Full).unwrap(),
        to_csv(&many.rows, Precision::Full).unwrap()
    );
}

#[test]
fn different_seeds_give_different_scenes() {
    assert_ne!(speckled_phantom(64, 1), speckled_phantom(64, 2));
    assert_eq!(speckled_phantom(64, 1), speckled_phantom(64, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_method_preserves_shape(rows in 2usize..40, cols in 2usize..40, seed in 0u64..1000) {
        let clean = GrayImage::from_fn(rows, cols, |r, c| 50.0 + ((r * 31 + c * 17) % 97) as f64)
            .unwrap();
        let (noisy, _) = apply_speckle(&clean, &SpeckleSpec::gamma(2, seed)).unwrap();
        for d in registered_methods(&BenchConfig::default()) {
            let out = despeckle(&noisy, &d, &DespeckleOptions::default()).unwrap();
            prop_assert_eq!((out.image.rows(), out.image.cols()), (rows, cols));
            prop_assert!(out.image.pixels().iter().all(|p| p.is_finite()));
        }
    }

    #[test]
    fn spatial_filters_stay_within_input_range(seed in 0u64..1000, window in prop::sample::select(vec![3usize, 5, 7])) {
        let noisy = speckled_phantom(32, seed);
        let (lo, hi) = noisy.min_max();
        let median = despeckle(
            &noisy,
            &Despeckler::Median { window: despeckle::filters::WindowSpec::new(window).unwrap() },
            &DespeckleOptions::default(),
        )
        .unwrap();
        let (mlo, mhi) = median.image.min_max();
        prop_assert!(mlo >= lo && mhi <= hi);
    }
}
