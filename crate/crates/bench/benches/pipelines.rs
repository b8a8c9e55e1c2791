use criterion::{black_box, criterion_group, criterion_main, Criterion};

use bgw_core::construct::{expand_bgw, expand_weighing, Ingredient};
use bgw_core::oa::oa_build;
use bgw_core::scheme::{eigenmatrices, scheme_from_bgw, verify_scheme};
use bgw_core::seeds::{seed_bgw, seed_conference};
use bgw_core::verify::{verify_bgw, verify_weighing};

fn bench_oa(c: &mut Criterion) {
    c.bench_function("oa_build 5^3 x 31", |b| {
        b.iter(|| oa_build(black_box(5), black_box(2)).unwrap())
    });
    c.bench_function("oa_build 9^2 x 10", |b| {
        b.iter(|| oa_build(black_box(9), black_box(1)).unwrap())
    });
}

fn bench_seeds(c: &mut Criterion) {
    c.bench_function("seed_bgw(13,12)", |b| {
        b.iter(|| seed_bgw(black_box(13), black_box(12)).unwrap())
    });
}

fn bench_expansion(c: &mut Criterion) {
    c.bench_function("expand_bgw(3,2,3) order 40", |b| {
        b.iter(|| expand_bgw(black_box(3), 2, 3).unwrap())
    });
    c.bench_function("expand_bgw(5,4,2) order 31", |b| {
        b.iter(|| expand_bgw(black_box(5), 4, 2).unwrap())
    });
    let conf = seed_conference(5).unwrap();
    c.bench_function("expand_weighing W(6,5) -> W(31,25)", |b| {
        b.iter(|| expand_weighing(black_box(&conf), 1, Ingredient::Auto, None).unwrap())
    });
}

fn bench_verify(c: &mut Criterion) {
    let w31 = expand_bgw(5, 4, 2).unwrap();
    c.bench_function("verify_bgw BGW(31,25,20;Z4)", |b| {
        b.iter(|| verify_bgw(black_box(&w31)))
    });
    let conf = seed_conference(5).unwrap();
    let w156 = expand_weighing(&conf, 2, Ingredient::Auto, None).unwrap();
    c.bench_function("verify_weighing W(156,125)", |b| {
        b.iter(|| verify_weighing(black_box(&w156)))
    });
}

fn bench_scheme(c: &mut Criterion) {
    let w = seed_bgw(5, 4).unwrap();
    let s = scheme_from_bgw(&w).unwrap();
    c.bench_function("scheme_from_bgw seed 48x48", |b| {
        b.iter(|| scheme_from_bgw(black_box(&w)).unwrap())
    });
    c.bench_function("verify_scheme 48x48", |b| {
        b.iter(|| verify_scheme(black_box(&s)))
    });
    c.bench_function("eigenmatrices 48x48", |b| {
        b.iter(|| eigenmatrices(black_box(&s)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_oa,
    bench_seeds,
    bench_expansion,
    bench_verify,
    bench_scheme
);
criterion_main!(benches);
