use criterion::{black_box, criterion_group, criterion_main, Criterion};
use orbitdepth::curve::{
    c, holonomy_on_cycle, iterated_integral, melnikov_fit_on_cycle, pairing_table, Atlas, OneForm,
};
use orbitdepth::melnikov::Deformation;
use orbitdepth::word::v_k;

fn numeric(crit: &mut Criterion) {
    let atlas = Atlas::new(0.36).unwrap();
    let oval = atlas.real_oval().unwrap();
    let v3 = atlas.word_cycle(&v_k(3)).unwrap();
    let d = Deformation::flagship();
    let mut group = crit.benchmark_group("curve");
    group.sample_size(10);
    group.bench_function("pairing_table", |b| {
        b.iter(|| pairing_table(black_box(0.36), 1e-9).unwrap())
    });
    group.bench_function("iterated_eta2_eta3_on_v3", |b| {
        b.iter(|| iterated_integral(black_box(&v3), &[OneForm::Eta(2), OneForm::Eta(3)]).unwrap())
    });
    group.bench_function("holonomy_oval_eps_1e-2", |b| {
        b.iter(|| holonomy_on_cycle(black_box(&oval), c(1e-2, 0.0), &d).unwrap())
    });
    group.bench_function("fit_v3_coarse_grid", |b| {
        b.iter(|| {
            melnikov_fit_on_cycle(black_box(&v3), &orbitdepth::curve::coarse_eps_grid(), &d)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, numeric);
criterion_main!(benches);
