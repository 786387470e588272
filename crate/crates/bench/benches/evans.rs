use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use evanslab::essential_spectrum::{border_curves, default_k_max};
use evanslab::evans_closed_form::{piecewise_evans, PencilProblem};
use evanslab::linearization::{SpectralCase, SpectralProblem};
use evanslab::model::{catalog, far_field, CatalogParams, Side};
use evanslab::riccati_evans::{default_chart, evaluate, scan_real, EvansOptions};
use num_complex::Complex64 as C;

fn problem(id: u8, p: CatalogParams) -> SpectralProblem {
    let (g, w) = catalog(id, &p).unwrap();
    let sp = SpectralProblem::build(&g, &w, SpectralCase::for_parameters(w.d, w.c)).unwrap();
    let chart = default_chart(&sp);
    sp.with_chart(chart).unwrap()
}

fn riccati(c: &mut Criterion) {
    let opts = EvansOptions::default();
    let front = problem(8, CatalogParams::default().with_d(1.5));
    c.bench_function("evaluate standing front D=1.5", |b| b.iter(|| evaluate(&front, black_box(C::new(0.5, 0.3)), &opts).unwrap()));
    let pulse = problem(9, CatalogParams::default().with_d(0.5).with_c(2.5));
    c.bench_function("evaluate travelling pulse D=0.5 c=2.5", |b| b.iter(|| evaluate(&pulse, black_box(C::new(2.0, 0.0)), &opts).unwrap()));
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    let d0 = problem(5, CatalogParams::default().with_c(1.0));
    group.bench_function("real scan D=0 pulse, 40 points", |b| b.iter(|| scan_real(&d0, (0.5, 10.0), 40, &opts).unwrap()));
    group.finish();
}

fn closed_forms(c: &mut Criterion) {
    let (g, w) = catalog(3, &CatalogParams::default()).unwrap();
    let pp = PencilProblem::from_wave(&g, &w).unwrap();
    c.bench_function("piecewise Evans function", |b| b.iter(|| piecewise_evans(&pp, black_box(C::new(0.7, 0.2))).unwrap()));
    let (g, w) = catalog(10, &CatalogParams::default()).unwrap();
    let far = far_field(&g, &w);
    let k_max = default_k_max(&far, w.d, Side::Plus);
    c.bench_function("Fredholm borders, 2001 samples", |b| b.iter(|| border_curves(&far, w.d, w.c, Side::Plus, k_max, 2001).unwrap()));
}

criterion_group!(benches, riccati, closed_forms);
criterion_main!(benches);
