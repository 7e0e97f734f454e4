//! Compare the rayon-backed entry points against the sequential bodies on
//! the heavier workloads: exhaustive state filtering and witness search.
//! Build with default features; the `seq` variants below call the
//! always-compiled sequential helpers directly.

use criterion::{criterion_group, criterion_main, Criterion};

use qtm::catalog;
use qtm::teschner::solve_witness;
use qtm::trace::{brute_force_states, trace};

fn bench_brute_force(c: &mut Criterion) {
    let e = catalog::get("one-holed-genus-2").unwrap();
    let gamma = &e.loops["gamma"];
    let mut group = c.benchmark_group("brute_force_states_2^20");
    group.sample_size(10);
    group.bench_function("api", |b| {
        b.iter(|| brute_force_states(&e.surface, gamma).unwrap())
    });
    group.bench_function("seq", |b| {
        b.iter(|| qtm::trace::brute_force_states_seq(&e.surface, gamma).unwrap())
    });
    group.finish();
}

fn bench_solve_witness(c: &mut Criterion) {
    let e = catalog::get("one-holed-genus-3").unwrap();
    let lat = e.surface.exchange_matrix().unwrap();
    let f_eta = trace(&e.surface, &e.loops["eta"]).unwrap();
    let f_zeta = trace(&e.surface, &e.loops["zeta"]).unwrap();
    let f_sigma = trace(&e.surface, &e.loops["sigma"]).unwrap();
    let v_eta = e.loops["eta"].total_intersection(&e.surface);
    let mut group = c.benchmark_group("solve_witness_genus3");
    group.sample_size(10);
    group.bench_function("api", |b| {
        b.iter(|| solve_witness(&lat, &f_eta, &f_zeta, &f_sigma, &v_eta).unwrap())
    });
    group.bench_function("seq", |b| {
        b.iter(|| {
            qtm::teschner::solve_witness_seq(&lat, &f_eta, &f_zeta, &f_sigma, &v_eta).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_brute_force, bench_solve_witness);
criterion_main!(benches);
