use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qmaxent_core::correlation::ghz_state;
use qmaxent_core::families::example2;
use qmaxent_core::random::{random_hermitian, random_state};
use qmaxent_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(dim: usize, r: usize, seed: u64) -> GibbsFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GibbsFamily::new((0..r).map(|_| random_hermitian(&mut rng, dim)).collect(), "bench").unwrap()
}

fn gibbs(c: &mut Criterion) {
    let fam = family(6, 3, 1);
    let lambda = [0.4, -1.1, 0.7];
    c.bench_function("log_partition d=6 r=3", |b| b.iter(|| log_partition(&fam, &lambda).unwrap()));
}

fn maxent(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fam = family(4, 3, 3);
    let alpha = fam.expectation(&random_state(&mut rng, 4, 4)).unwrap();
    c.bench_function("maxent_interior d=4 r=3", |b| b.iter(|| maxent_interior(&fam, &alpha, &cfg).unwrap()));

    let disk = example2();
    let tip = ExpectedValue::new(vec![1.0, 0.0]).unwrap();
    c.bench_function("maxent_extension disk tip", |b| b.iter(|| maxent_extension(&disk, &tip, &cfg).unwrap()));

    let boundary = fam.expectation(&random_state(&mut rng, 4, 1)).unwrap();
    c.bench_function("maxent_extension d=4 rank-one point", |b| {
        b.iter(|| maxent_extension(&fam, &boundary, &cfg).unwrap())
    });
}

fn correlation(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let sys = TensorSystem::qubits(3).unwrap();
    let mut group = c.benchmark_group("three qubits");
    group.sample_size(10);
    group.bench_function("decomposition GHZ", |b| {
        b.iter(|| correlation_decomposition(&ghz_state(3), &sys, &cfg).unwrap())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    group.bench_function("decomposition random full rank", |b| {
        b.iter_batched(
            || random_state(&mut rng, 8, 8),
            |rho| correlation_decomposition(&rho, &sys, &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, gibbs, maxent, correlation);
criterion_main!(benches);
