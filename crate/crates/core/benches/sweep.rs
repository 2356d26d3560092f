use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qaut_core::exec::Execution;
use qaut_core::magic::evaluation_matrix;
use qaut_core::sweep::{run_sweep, SweepConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    let ktheory_only = SweepConfig {
        samples: 200,
        max_n: 6,
        max_k: 8,
        seed: 0,
        degree_bound: None,
    };
    let with_resolution = SweepConfig {
        samples: 24,
        max_n: 4,
        max_k: 4,
        seed: 0,
        degree_bound: Some(12),
    };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("ktheory", name), &exec, |b, &e| {
            b.iter(|| run_sweep(black_box(&ktheory_only), e))
        });
        g.bench_with_input(BenchmarkId::new("resolution", name), &exec, |b, &e| {
            b.iter(|| run_sweep(black_box(&with_resolution), e))
        });
    }
    g.finish();
}

fn magic(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluation_matrix");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("n7", name), &exec, |b, &e| {
            b.iter(|| evaluation_matrix(black_box(7), e))
        });
    }
    g.finish();
}

criterion_group!(benches, sweep, magic);
criterion_main!(benches);
