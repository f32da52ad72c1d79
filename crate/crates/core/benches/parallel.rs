//! Parallel vs single-threaded timings for the exhaustive checks.
//!
//! The library itself switches between rayon and plain iterators via the
//! `parallel` feature; here both variants run in one binary by pinning the
//! single-threaded case to a one-worker rayon pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use uniformity_core::constructions::{even_weight_oa, strength3_extend};
use uniformity_core::schemes::hadamard;
use uniformity_core::shadow::scan_nonexistence;
use uniformity_core::states::state_from_irmoa;
use uniformity_core::MixedArray;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("single-thread", single), ("all-threads", all)]
}

fn big_strength3_array() -> MixedArray {
    let base = even_weight_oa(4).unwrap();
    let h4 = hadamard(4).unwrap();
    strength3_extend(None, &base, None, &h4).unwrap().array
}

fn bench_verify_strength(c: &mut Criterion) {
    let array = big_strength3_array();
    let mut group = c.benchmark_group("verify_strength_3_on_32x16");
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &array, |b, array| {
            pool.install(|| b.iter(|| array.verify_strength(3).unwrap().passed()))
        });
    }
    group.finish();
}

fn bench_min_distance(c: &mut Criterion) {
    let array = big_strength3_array();
    let mut group = c.benchmark_group("min_hamming_distance_32x16");
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &array, |b, array| {
            pool.install(|| b.iter(|| array.min_hamming_distance().unwrap()))
        });
    }
    group.finish();
}

fn bench_uniformity(c: &mut Criterion) {
    let mut array = big_strength3_array();
    array.confirm_strength(3).unwrap();
    let state = state_from_irmoa(&array, 3).unwrap();
    let mut group = c.benchmark_group("verify_3_uniform_16_qubits");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &state, |b, state| {
            pool.install(|| b.iter(|| state.verify_k_uniform(3).unwrap().pass))
        });
    }
    group.finish();
}

fn bench_shadow_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("shadow_scan_9_parties_max_dim_4");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| scan_nonexistence(9, 4).unwrap().excluded.len()))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_verify_strength,
    bench_min_distance,
    bench_uniformity,
    bench_shadow_scan
);
criterion_main!(benches);
