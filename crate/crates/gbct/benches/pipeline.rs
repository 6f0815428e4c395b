//! Phase-level benchmarks over a fixed blob generator.
//!
//! Every benchmark id embeds the execution mode ("par" when the rayon
//! feature is on, "seq" otherwise), so `cargo bench` and
//! `cargo bench --no-default-features` produce directly comparable
//! reports.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbct::generate::{generate, GenSpec};
use gbct::{ball, cluster, graph, par, pipeline};
use gbct::{Dataset, FitConfig, KChoice, SplitConfig};

const SIZES: [usize; 2] = [1000, 4000];

fn blobs(n: usize) -> Dataset {
    let spec = GenSpec::Blobs {
        centers: vec![vec![8.0, 0.0], vec![-4.0, 6.928], vec![-4.0, -6.928]],
        std: 0.5,
    };
    generate(&spec, n, 42).expect("generator")
}

fn bench_split(c: &mut Criterion) {
    let mut group = c.benchmark_group("split");
    for n in SIZES {
        let ds = blobs(n);
        let cfg = SplitConfig { seed: 42, ..SplitConfig::default() };
        group.bench_with_input(BenchmarkId::new(par::mode(), n), &ds, |b, ds| {
            b.iter(|| {
                let coarse = ball::coarse_divide(ds, &cfg).unwrap();
                ball::split_all(ds, coarse, &cfg).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph");
    for n in SIZES {
        let ds = blobs(n);
        let cfg = SplitConfig { seed: 42, ..SplitConfig::default() };
        let coarse = ball::coarse_divide(&ds, &cfg).unwrap();
        let balls = ball::split_all(&ds, coarse, &cfg).unwrap();
        group.bench_with_input(BenchmarkId::new(par::mode(), n), &balls, |b, balls| {
            b.iter(|| graph::build_graph(balls).unwrap())
        });
    }
    group.finish();
}

fn bench_merge(c: &mut Criterion) {
    let mut group = c.benchmark_group("merge");
    for n in SIZES {
        let ds = blobs(n);
        let cfg = SplitConfig { seed: 42, ..SplitConfig::default() };
        let coarse = ball::coarse_divide(&ds, &cfg).unwrap();
        let balls = ball::split_all(&ds, coarse, &cfg).unwrap();
        let g = graph::build_graph(&balls).unwrap();
        let noise = cluster::detect_noise_balls(&balls, 0.2).unwrap();
        group.bench_with_input(BenchmarkId::new(par::mode(), n), &balls, |b, balls| {
            b.iter(|| cluster::merge_to_k(balls, &g, 3, &noise).unwrap())
        });
    }
    group.finish();
}

fn bench_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(20);
    for n in SIZES {
        let ds = blobs(n);
        let cfg = FitConfig {
            split: SplitConfig { seed: 42, ..SplitConfig::default() },
            k: KChoice::Fixed(3),
            ..FitConfig::default()
        };
        group.bench_with_input(BenchmarkId::new(par::mode(), n), &ds, |b, ds| {
            b.iter(|| pipeline::fit(ds, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_split, bench_graph, bench_merge, bench_fit);
criterion_main!(benches);
