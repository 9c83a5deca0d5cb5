use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rug::ops::Pow;
use rug::{Float, Integer};

use heegner::heegner::{alpha, alpha_direct};
use heegner::jacobi::{theta, QZSeries};
use heegner::periods::all_periods;
use heegner::relations::find_integer_relation;
use heegner::PrecisionContext;
use heegner_bench::fixture;

fn alpha_evaluation(c: &mut Criterion) {
    let (session, point) = fixture("s10n3", -23);
    let ctx = session.ctx;
    c.bench_function("alpha closed form (s10n3, D=-23)", |b| {
        b.iter(|| alpha(&session.form, black_box(&point), &ctx).unwrap())
    });
    c.bench_function("alpha via power integrals (s10n3, D=-23)", |b| {
        b.iter(|| alpha_direct(&session.form, black_box(&point), &ctx).unwrap())
    });
}

fn relation_search(c: &mut Criterion) {
    let ctx = PrecisionContext::new(60).unwrap();
    let bits = ctx.bits();
    let x = Float::with_val(bits, 2).sqrt();
    let y = Float::with_val(bits, 3).sqrt();
    let z = Float::with_val(bits, &x * 7u32) - Float::with_val(bits, &y * 12u32);
    let bound = Integer::from(10u32).pow(20);
    c.bench_function("integer relation, 3 reals at 60 digits", |b| {
        b.iter(|| find_integer_relation(black_box(&[z.clone(), x.clone(), y.clone()]), &bound, &ctx).unwrap())
    });
}

fn lattice_build(c: &mut Criterion) {
    let (session, _) = fixture("s4n13", -3);
    let ctx = session.ctx;
    c.bench_function("period integrals (s4n13)", |b| {
        b.iter(|| all_periods(&session.form, &session.generators, &ctx).unwrap())
    });
    c.bench_function("period lattice (s4n13)", |b| b.iter(|| session.lattice(&ctx).unwrap()));
}

fn series_product(c: &mut Criterion) {
    let limit = 24 * 60;
    let t1: QZSeries = theta(1, limit);
    let t2: QZSeries = theta(2, limit);
    c.bench_function("theta_1 * theta_2 to q^60", |b| b.iter(|| black_box(&t1).mul(black_box(&t2))));
}

criterion_group!(kernels, alpha_evaluation, relation_search, lattice_build, series_product);
criterion_main!(kernels);
