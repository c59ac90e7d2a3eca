use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::BigRational;
use qint_core::qrational::{DenominatorSet, RootSystem};
use qint_core::twisted::TwistedAlgebra;
use qint_core::{parse_elem, parse_ring, QContext};

fn context(ring: &str, q: &str) -> QContext {
    let ring = parse_ring(ring).unwrap();
    let q = parse_elem(&ring, q).unwrap();
    QContext::new(q)
}

fn gauss_triangle(c: &mut Criterion) {
    let ctx = context("Z[t]", "t");
    c.bench_function("pascal table Z[t] n<=40", |b| {
        b.iter(|| {
            let mut t = ctx.pascal_table();
            black_box(t.get(40, 20))
        })
    });
    let ctx = context("Cyclo(7)", "t");
    c.bench_function("q-binomial Cyclo(7) n=60", |b| b.iter(|| black_box(ctx.q_binomial(60, 30))));
}

fn fraction_states(c: &mut Criterion) {
    let ctx = context("Q(t)", "t");
    c.bench_function("q-states Q(t) m in -30..=30", |b| {
        b.iter(|| (-30..=30).map(|m| ctx.q_state(m).unwrap()).collect::<Vec<_>>())
    });
    let sys = RootSystem::puiseux(&DenominatorSet::close(&[6]).unwrap()).unwrap();
    let r: BigRational = "17/6".parse().unwrap();
    c.bench_function("rational q-state Q(t^(1/6)) 17/6", |b| b.iter(|| black_box(sys.q_state(&r).unwrap())));
}

fn twisted_powers(c: &mut Criterion) {
    let ctx = context("Z[t]", "t");
    let alg = TwistedAlgebra::new(ctx.ring(), &["x", "y"], &["t*x", "y"]).unwrap();
    let f = alg.parse("x+y").unwrap();
    c.bench_function("twisted power (x+y)^(8) over Z[t]", |b| b.iter(|| black_box(alg.twisted_power(&f, 8))));
}

criterion_group!(benches, gauss_triangle, fraction_states, twisted_powers);
criterion_main!(benches);
