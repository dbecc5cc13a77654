use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use std::sync::Arc;

use strata_bench::{chain_diagram, matrix};
use strata_core::k0::{verify_splitting, SplitOrder};
use strata_core::kan::{ho_lan, Totalization};
use strata_core::{rhom, FinPoset, MonotoneMap};

fn rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for n in [8, 16, 32] {
        let m = matrix(n, n, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| black_box(m.rank())));
    }
    g.finish();
}

fn totalization(c: &mut Criterion) {
    let mut g = c.benchmark_group("hocolim");
    for n in [3, 4, 5] {
        let f = chain_diagram(n, 1);
        let all: Vec<usize> = (0..n).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| black_box(Totalization::hocolim(f, &all).complex().total_dim()))
        });
    }
    g.finish();
    let f = chain_diagram(4, 2);
    let to_point = MonotoneMap::to_point(Arc::new(FinPoset::chain(4)));
    c.bench_function("ho_lan to point", |b| b.iter(|| black_box(ho_lan(&to_point, &f).unwrap())));
}

fn hom(c: &mut Criterion) {
    let mut g = c.benchmark_group("rhom");
    for n in [2, 3] {
        let f = chain_diagram(n, 3);
        let h = chain_diagram(n, 4);
        g.bench_with_input(BenchmarkId::from_parameter(n), &(f, h), |b, (f, h)| {
            b.iter(|| black_box(rhom(f, h).unwrap().betti()))
        });
    }
    g.finish();
}

fn splitting(c: &mut Criterion) {
    let f = chain_diagram(4, 5);
    c.bench_function("verify_splitting chain 4", |b| {
        b.iter(|| black_box(verify_splitting(&f, SplitOrder::Minimal).unwrap().passed))
    });
}

criterion_group!(benches, rank, totalization, hom, splitting);
criterion_main!(benches);
