use std::hint::black_box;
use std::time::Duration;

use bincounts::bincounts::Propagation;
use bincounts::kernel::{Branching, SearchLimits};
use bincounts::models::{run_study, RandomStudyConfig};
use bincounts::par::PARALLEL;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn study(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..50).collect();
    let base = RandomStudyConfig::default().with_fraction(0.8);
    let mut group = c.benchmark_group("random_study");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    let mut runs = vec![("sequential", Some(1))];
    if PARALLEL {
        runs.push(("parallel", None));
    }
    for (label, jobs) in runs {
        group.bench_with_input(BenchmarkId::new(label, seeds.len()), &jobs, |b, jobs| {
            b.iter(|| run_study(black_box(&base), &seeds, &Propagation::ALL, Branching::StaticLexMinValue, SearchLimits::none(), *jobs).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, study);
criterion_main!(benches);
