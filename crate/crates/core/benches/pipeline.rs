//! Single-thread vs. multi-thread timings for the data-parallel stages.
//!
//! The single-thread variant runs inside a one-worker rayon pool, which executes the same
//! code path as a build without the `parallel` feature.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use despeckle::bench::{run_bench, BenchConfig};
use despeckle::metrics::{detect_edges, pratt_fom, FOM_ALPHA};
use despeckle::phantom::phantom;
use despeckle::pipeline::{despeckle, DespeckleOptions, Despeckler};
use despeckle::shrink::{KalmanShrinkConfig, ShrinkMethod};
use despeckle::speckle::{apply_speckle, sample_speckle, SpeckleSpec};
use despeckle::wavelet::{decompose, reconstruct};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    vec![
        (
            "sequential",
            rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap(),
        ),
        (
            "parallel",
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap(),
        ),
    ]
}

fn stages(c: &mut Criterion) {
    let scene = phantom(512).unwrap();
    let (noisy, _) = apply_speckle(&scene.clean, &SpeckleSpec::gamma(4, 42)).unwrap();
    let kalman = Despeckler::Wavelet {
        method: ShrinkMethod::Kalman(KalmanShrinkConfig::default()),
    };

    let mut group = c.benchmark_group("stages_512");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("speckle", name), |b| {
            b.iter(|| pool.install(|| sample_speckle(&SpeckleSpec::gamma(4, 7), 512, 512).unwrap()))
        });
        group.bench_function(BenchmarkId::new("haar_round_trip", name), |b| {
            b.iter(|| pool.install(|| reconstruct(&decompose(&noisy, 3).unwrap()).unwrap()))
        });
        group.bench_function(BenchmarkId::new("kalman_despeckle", name), |b| {
            b.iter(|| {
                pool.install(|| despeckle(&noisy, &kalman, &DespeckleOptions::default()).unwrap())
            })
        });
        group.bench_function(BenchmarkId::new("sobel_fom", name), |b| {
            b.iter(|| {
                pool.install(|| {
                    let edges = detect_edges(&noisy, 120.0).unwrap();
                    pratt_fom(&edges, &scene.edges, FOM_ALPHA).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let scene = phantom(256).unwrap();
    let cfg = BenchConfig::default();
    let mut group = c.benchmark_group("bench_sweep_256");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| pool.install(|| run_bench(&scene.clean, &scene.edges, &cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, stages, sweep);
criterion_main!(benches);
