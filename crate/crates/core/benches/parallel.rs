//! Sequential and parallel execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use seqdb_core::catalog::{ANumber, Catalog, Entry};
use seqdb_core::exec::Mode;
use seqdb_core::generators::{a057641_with, lacing_count_with, seed_catalog, HARMONIC_CAP_BITS};
use seqdb_core::index::build_index_with;
use seqdb_core::seeker::fuzzy_matches_with;
use seqdb_core::transforms::Registry;
use seqdb_core::TermList;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

/// The seed catalog padded with deterministic pseudo-random entries.
fn large_catalog(extra: u32) -> Catalog {
    let mut c = seed_catalog();
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    for i in 0..extra {
        let terms: Vec<BigInt> = (0..30)
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                BigInt::from(x % 100_000)
            })
            .collect();
        let id = ANumber::new(200_000 + i).unwrap();
        c.insert(Entry::new(id, "filler", TermList::new(0, terms))).unwrap();
    }
    c
}

fn harmonic_floors(c: &mut Criterion) {
    let mut g = c.benchmark_group("harmonic_bound_floors_300");
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| a057641_with(300, mode, HARMONIC_CAP_BITS).unwrap()));
    }
    g.finish();
}

fn lacing(c: &mut Criterion) {
    let mut g = c.benchmark_group("lacing");
    g.sample_size(10);
    for n in [5usize, 6] {
        for (name, mode) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| b.iter(|| lacing_count_with(n, mode)));
        }
    }
    g.finish();
}

fn fuzzy_scan(c: &mut Criterion) {
    let cat = large_catalog(5000);
    let ix = build_index_with(&cat, Mode::Parallel);
    let q = TermList::from_i64s(1, &[1, 1, 3, 11, 46, 197]);
    let mut g = c.benchmark_group("fuzzy_scan_5k");
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| fuzzy_matches_with(&ix, &q, 2, mode).unwrap()));
    }
    g.finish();
}

fn index_build(c: &mut Criterion) {
    let cat = large_catalog(5000);
    let mut g = c.benchmark_group("index_build_5k");
    g.sample_size(20);
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| build_index_with(&cat, mode)));
    }
    g.finish();
}

fn registry(c: &mut Criterion) {
    let reg = Registry::standard();
    let terms: Vec<BigInt> = (1..=60).map(|n: i64| BigInt::from(n * n + 3 * n + 1)).collect();
    let mut g = c.benchmark_group("transform_registry_60");
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| reg.apply_all(&terms, mode).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, harmonic_floors, lacing, fuzzy_scan, index_build, registry);
criterion_main!(benches);
