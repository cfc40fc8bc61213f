use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permanent::{compute, opt, AlgorithmId, TuningParams, Variant};
use permanent_bench::{random_f64, random_i64, shapes};

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels_f64");
    for (m, n) in shapes([4, 8, 12, 16]) {
        let a = random_f64(m, n, (m * 100 + n) as u64);
        for alg in AlgorithmId::ALL {
            // enumeration is m-permutations of n; skip shapes that take seconds
            if alg == AlgorithmId::Combinatoric && n > 10 && m > 4 {
                continue;
            }
            group.bench_with_input(BenchmarkId::new(alg.name(), format!("{m}x{n}")), &a, |b, a| {
                b.iter(|| compute(a, alg, Variant::Auto).unwrap())
            });
        }
    }
    group.finish();
}

fn integer_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels_i64");
    for n in [8, 12] {
        let a = random_i64(n, n, n as u64);
        for alg in [AlgorithmId::Ryser, AlgorithmId::Glynn] {
            group.bench_with_input(BenchmarkId::new(alg.name(), format!("{n}x{n}")), &a, |b, a| {
                b.iter(|| compute(a, alg, Variant::Auto).unwrap())
            });
        }
    }
    group.finish();
}

fn dispatch(c: &mut Criterion) {
    let params = TuningParams::default();
    let mut group = c.benchmark_group("opt");
    for (m, n) in [(3, 3), (4, 20), (14, 14), (10, 20)] {
        let a = random_f64(m, n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{n}")), &a, |b, a| {
            b.iter(|| opt(a, &params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernels, integer_kernels, dispatch);
criterion_main!(benches);
