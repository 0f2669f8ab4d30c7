use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bresse_bench::{fixture_state, unit_params};
use bresse_core::envelope::fit_envelope_modes;
use bresse_core::functionals::{check_lemma_set, fill_energies, FunctionalId, LyapunovConfig};
use bresse_core::grid::FrequencyGrid;
use bresse_core::model::{classify_speeds, SystemKind};
use bresse_core::reconstruct::{InitialProfile, ProfileShape, SpectralSolution, StateSlot};
use bresse_core::spectral::{build_generator, evolve_trajectory, Propagator};

fn bench_propagator(c: &mut Criterion) {
    let p = unit_params();
    let mut group = c.benchmark_group("propagator");
    for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
        group.bench_with_input(BenchmarkId::new("decompose", kind), &kind, |b, &kind| {
            b.iter(|| Propagator::new(black_box(build_generator(&p, kind, 1.3))).unwrap())
        });
        let prop = Propagator::new(build_generator(&p, kind, 1.3)).unwrap();
        let u0 = fixture_state(kind, 1.3);
        group.bench_with_input(BenchmarkId::new("apply", kind), &kind, |b, _| {
            b.iter(|| prop.apply(black_box(&u0), black_box(17.0)).unwrap())
        });
    }
    group.finish();
}

fn bench_functionals(c: &mut Criterion) {
    let p = unit_params();
    let kind = SystemKind::TypeIII;
    let cfg = LyapunovConfig::defaults_for(&p, kind);
    let times: Vec<f64> = std::iter::once(0.0)
        .chain((0..31).map(|i| 1e-2 * (1e5f64.powf(i as f64 / 30.0))))
        .collect();
    let u0 = fixture_state(kind, 1.0);
    let mut tr = evolve_trajectory(&p, kind, 1.0, &u0, &times).unwrap();
    fill_energies(&mut tr, &p);
    let trs = vec![tr];
    let mut group = c.benchmark_group("functionals");
    group.bench_function("mode_energy", |b| {
        let s = fixture_state(kind, 1.0);
        b.iter(|| bresse_core::functionals::mode_energy(black_box(&s), &p))
    });
    group.bench_function("lemma_check_K", |b| {
        b.iter(|| check_lemma_set(FunctionalId::K, black_box(&trs), &p, &cfg).unwrap())
    });
    group.finish();
}

fn bench_envelope(c: &mut Criterion) {
    let p = unit_params();
    let class = classify_speeds(&p);
    let grid = FrequencyGrid::geometric(0.01, 100.0, 64).unwrap();
    c.bench_function("envelope_fit_64_modes", |b| {
        b.iter(|| {
            fit_envelope_modes(
                black_box(&p),
                SystemKind::TypeI,
                class,
                grid.nodes(),
                24,
                42,
            )
            .unwrap()
        })
    });
}

fn bench_sobolev(c: &mut Criterion) {
    let p = unit_params();
    let grid = FrequencyGrid::geometric(1e-3, 100.0, 512).unwrap();
    let profile = InitialProfile::new(ProfileShape::Gaussian { sigma: 1.0 }, StateSlot::Psi0);
    let solution = SpectralSolution::new(&p, SystemKind::TypeI, &profile, &grid).unwrap();
    c.bench_function("sobolev_norm_512_modes", |b| {
        b.iter(|| solution.norm(0, black_box(1e4)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_propagator,
    bench_functionals,
    bench_envelope,
    bench_sobolev
);
criterion_main!(benches);
