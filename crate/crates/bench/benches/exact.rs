use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use orbitdepth::laurent::{depth_certificate, Representation};
use orbitdepth::magnus::{depth, magnus};
use orbitdepth::melnikov::{mv, Deformation};
use orbitdepth::word::{gamma, v_k, var_iter};

fn magnus_expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("magnus");
    for i in [3, 5] {
        let w = var_iter(&gamma(), i);
        group.bench_with_input(BenchmarkId::new("var_gamma_deg8", i), &w, |b, w| {
            b.iter(|| magnus(black_box(w), 8).unwrap())
        });
    }
    group.bench_function("depth_v5_deg8", |b| {
        b.iter(|| depth(black_box(&v_k(5)), 8).unwrap())
    });
    group.finish();
}

fn representation(c: &mut Criterion) {
    let mut group = c.benchmark_group("rho");
    for k in [2, 4] {
        let rep = Representation::new(k).unwrap();
        let w = v_k(k + 2);
        group.bench_with_input(BenchmarkId::new("rho_v_k_plus_2", k), &w, |b, w| {
            b.iter(|| rep.rho(black_box(w)))
        });
    }
    group.sample_size(10);
    group.bench_function("certificate_k3", |b| {
        b.iter(|| depth_certificate(3, 20, 1).unwrap())
    });
    group.finish();
}

fn wronskian_layer(c: &mut Criterion) {
    let d = Deformation::flagship();
    c.bench_function("mv_6_flagship", |b| {
        b.iter(|| mv(6, black_box(&d)).unwrap())
    });
}

criterion_group!(benches, magnus_expansion, representation, wronskian_layer);
criterion_main!(benches);
