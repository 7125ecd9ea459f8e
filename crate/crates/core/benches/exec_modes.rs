use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rocscale::bon::bon_profile;
use rocscale::rejection::profile;
use rocscale::simulate::{bootstrap, simulate_bon, SimulationConfig};
use rocscale::{Execution, RocCurve, ScorePool};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn pool(size: usize) -> ScorePool {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs: Vec<(f64, bool)> = (0..size)
        .map(|i| (rng.random_range(0.0..1.0), i % 3 == 0))
        .collect();
    ScorePool::from_pairs(pairs).unwrap()
}

fn simulation(c: &mut Criterion) {
    let pool = pool(500);
    let mut group = c.benchmark_group("simulate_bon");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SimulationConfig {
            trials: 10_000,
            exec,
            ..SimulationConfig::default()
        };
        group.bench_function(BenchmarkId::new(name, 16), |b| b.iter(|| simulate_bon(&pool, 16, &cfg).unwrap()));
    }
    group.finish();
}

fn resampling(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws: Vec<f64> = (0..10_000).map(|_| rng.random_range(1..40) as f64).collect();
    let mut group = c.benchmark_group("bootstrap");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| bootstrap(&draws, 1000, 0.95, 42, exec).unwrap()));
    }
    group.finish();
}

fn profiles(c: &mut Criterion) {
    let curve = RocCurve::power(0.5, 4096).unwrap();
    let grid: Vec<f64> = (1..=20_000).map(|i| i as f64 / 20_000.0).collect();
    let ns: Vec<usize> = (0..=14).map(|k| 1usize << k).collect();
    let mut group = c.benchmark_group("profile");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("rejection", name), |b| {
            b.iter(|| profile(&curve, 0.3, &grid, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("best_of_n", name), |b| {
            b.iter(|| bon_profile(&curve, 0.3, &ns, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, simulation, resampling, profiles);
criterion_main!(benches);
