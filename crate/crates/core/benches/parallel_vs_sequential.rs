use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rmt_edge::parallel::map_range;
use rmt_edge::sampler::{SampleBatch, SamplingMethod};
use rmt_edge::softedge::SoftEdgeConfig;
use rmt_edge::Parallelism;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("gue_batch_n200_x200");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| SampleBatch::generate(200, 200, 1, SamplingMethod::Tridiagonal, mode).unwrap())
        });
    }
    group.finish();
}

fn gap_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("soft_gap_grid_32");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = SoftEdgeConfig::with_order(32).with_parallelism(mode);
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| map_range(mode, 32, |k| cfg.gap(-4.0 + 0.25 * k as f64).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, gap_grid);
criterion_main!(benches);
