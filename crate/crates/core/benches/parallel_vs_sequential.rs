use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use residue_forge::arith::{FactorSieve, SieveConfig};
use residue_forge::characters::{fourth_moment, CharacterTable, MomentScope};
use residue_forge::congruence::{count_n_all, PrimeWindow};
use residue_forge::kfull::record_search;
use residue_forge::progression::sweep_classes;
use residue_forge::squarefull::linnik_tables;
use residue_forge::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve_4e6");
    g.sample_size(10);
    for (name, exec) in MODES {
        let config = SieveConfig { exec, segment: 1 << 18, ..SieveConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| FactorSieve::with_config(black_box(4_000_000), &config).unwrap())
        });
    }
    g.finish();
}

fn classes(c: &mut Criterion) {
    let s = FactorSieve::new(2_000_000).unwrap();
    let mut g = c.benchmark_group("sweep_classes_2e6_p101");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_classes(black_box(2_000_000), 1000.0, 101, &s, exec).unwrap())
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let t = CharacterTable::new(10007).unwrap();
    let mut g = c.benchmark_group("fourth_moment_p10007_K100");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fourth_moment(&t, black_box(100), MomentScope::All, exec).unwrap())
        });
    }
    g.finish();
}

fn congruences(c: &mut Criterion) {
    let w = PrimeWindow::new(50.0).unwrap();
    let mut g = c.benchmark_group("count_n_all_p10007_L50");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| count_n_all(black_box(10007), &w, 1000.0, exec).unwrap())
        });
    }
    g.finish();
}

fn squarefull_tables(c: &mut Criterion) {
    let primes: Vec<u64> = residue_forge::arith::primes_up_to(400).into_iter().skip(1).collect();
    let mut g = c.benchmark_group("linnik_tables_p400");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| linnik_tables(black_box(&primes), exec).unwrap()));
    }
    g.finish();
}

fn kfull_records(c: &mut Criterion) {
    let mut g = c.benchmark_group("record_search_k2_2e4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| record_search(2, black_box(20_000), 4, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sieve, classes, moments, congruences, squarefull_tables, kfull_records);
criterion_main!(benches);
