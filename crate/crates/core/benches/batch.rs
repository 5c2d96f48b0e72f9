use std::hint::black_box;
use std::sync::Arc;

use badapprox::analysis::{ba_digit_set_oracle, box_counts};
use badapprox::games::RandomBob;
use badapprox::horoballs::generate_ford;
use badapprox::metric::{certify_diffuse, Ball, CantorSet, LineSet, HALF_PLANE_DELTA};
use badapprox::par::{self, Execution};
use badapprox::rational::{from_int, from_ratio};
use badapprox::strategy::{run_ba_experiment, ExperimentConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn diffuse(c: &mut Criterion) {
    let set = LineSet::Cantor(CantorSet::middle_thirds(8));
    let samples = set.sorted_points().unwrap().to_vec();
    let scales: Vec<_> = (2..=5).map(|k| from_ratio(1, 3i64.pow(k))).collect();
    let beta = from_ratio(1, 10);
    let mut g = c.benchmark_group("certify_diffuse");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(certify_diffuse(&set, &beta, &scales, &samples, exec).passed()))
        });
    }
    g.finish();
}

fn box_counting(c: &mut Criterion) {
    let oracle = ba_digit_set_oracle(5, 40).unwrap();
    let mut g = c.benchmark_group("box_counts_e5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(box_counts(&oracle, 2, 12, exec).unwrap()))
        });
    }
    g.finish();
}

fn plays(c: &mut Criterion) {
    let family = Arc::new(generate_ford(100).unwrap());
    let config = ExperimentConfig {
        beta: from_ratio(1, 10),
        rounds: 30,
        visual_a: std::f64::consts::E,
        delta: HALF_PLANE_DELTA,
        visual_c: 2.0,
        window: (from_int(0), from_int(1)),
    };
    let seeds: Vec<u64> = (0..16).collect();
    let mut g = c.benchmark_group("random_plays");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::map(exec, &seeds, |s| {
                    let bob = RandomBob::bob(Ball::new(from_ratio(1, 2), from_ratio(1, 4)), *s);
                    run_ba_experiment(family.clone(), &config, &bob).map(|o| o.passed()).unwrap_or(false)
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, diffuse, box_counting, plays);
criterion_main!(benches);
