use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use oabp::abp::Abp;
use oabp::corpus;
use oabp::families::verify_full_rank;
use oabp::pit::{algorithm1, compose_test, HitsetOptions};
use oabp::{par, Exec, Field, Permutation, DEFAULT_TERM_BUDGET};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn grid_search(c: &mut Criterion) {
    // the zero program forces a full sweep of the 3^5 grid
    let f = Field::rational();
    let a = Abp::zero(&f, 2);
    let pi = Permutation::identity(2);
    let mut g = c.benchmark_group("grid_search");
    for (name, exec) in MODES {
        let opts = HitsetOptions {
            exec,
            ..Default::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| algorithm1(&a, 1, &pi, &opts).unwrap())
        });
    }
    g.finish();
}

fn corpus_sweep(c: &mut Criterion) {
    let f = Field::rational();
    let members = corpus::standard(&f, 20, 1).unwrap();
    let mut g = c.benchmark_group("corpus_compose");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::map(exec, &members, |m| {
                    compose_test(&m.abp, m.r, DEFAULT_TERM_BUDGET)
                        .unwrap()
                        .is_zero()
                })
            })
        });
    }
    g.finish();
}

fn full_rank_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("full_rank_n3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_full_rank(3, 1, 2, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, grid_search, corpus_sweep, full_rank_sweep);
criterion_main!(benches);
