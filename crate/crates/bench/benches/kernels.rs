use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hurwitz_core::elliptic::braid_matrix;
use hurwitz_core::poset::interval_elliptic_gen;
use hurwitz_core::tables::{table_word, TableData};
use hurwitz_core::*;

fn root_systems(c: &mut Criterion) {
    c.bench_function("build_finite E8", |b| {
        b.iter(|| build_finite(black_box(FiniteType::E(8))).unwrap())
    });
    c.bench_function("FiniteWeyl D4", |b| {
        b.iter(|| FiniteWeyl::new(build_finite(FiniteType::D(4)).unwrap()))
    });
}

fn factorizations(c: &mut Criterion) {
    let g = FiniteWeyl::new(build_finite(FiniteType::D(4)).unwrap());
    let cox = g.product(
        &(0..4)
            .map(|i| g.reflection_index(&g.sys.simple_roots[i]).unwrap())
            .collect::<Vec<_>>(),
    );
    c.bench_function("enumerate_fac D4 m=6 generating", |b| {
        b.iter(|| {
            g.enumerate_fac(black_box(cox), 6, true, usize::MAX)
                .unwrap()
                .len()
        })
    });
}

fn braids(c: &mut Criterion) {
    let sys = build_elliptic(EllipticType::D4).unwrap();
    let cox = coxeter_transformation(&sys);
    let base = ReflectionTuple::new(Ambient::elliptic(&sys), sys.canonical_roots()).unwrap();
    let data = TableData::embedded();
    let row = data.rows_for(EllipticType::D4)[2];
    let w = table_word(row.tau.as_ref().unwrap());
    c.bench_function("braid_matrix D4 30 letters", |b| {
        b.iter(|| braid_matrix(&sys, &cox, &base, black_box(&w)).unwrap())
    });
}

fn intervals(c: &mut Criterion) {
    let sys = build_elliptic(EllipticType::D4).unwrap();
    let mut g = c.benchmark_group("interval");
    g.sample_size(10);
    g.bench_function("elliptic D4 window 1", |b| {
        b.iter(|| {
            interval_elliptic_gen(&sys, 1, usize::MAX)
                .unwrap()
                .poset
                .len()
        })
    });
    g.finish();
}

criterion_group!(kernels, root_systems, factorizations, braids, intervals);
criterion_main!(kernels);
