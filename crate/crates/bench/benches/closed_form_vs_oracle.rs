use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ecsense_core::fock::{build_density_matrix, observable_moments_numeric, qfi_of};
use ecsense_core::{
    amplitude_for_mean_photon, open_phase_grid, optimal_phase_error, qfi_lossy,
    qfi_lossy_at_mean_photon, sz_statistics, EcsParams, LossChannel,
};

fn closed_forms(c: &mut Criterion) {
    let p = EcsParams::real(1.0, 2.0).unwrap();
    let ch = LossChannel::from_loss(0.3).unwrap();

    c.bench_function("amplitude inversion n=3", |b| {
        b.iter(|| amplitude_for_mean_photon(black_box(3.0), black_box(2.0)))
    });
    c.bench_function("qfi_lossy closed form", |b| {
        b.iter(|| qfi_lossy(black_box(&p), &ch))
    });
    c.bench_function("qfi_lossy at mean photon", |b| {
        b.iter(|| qfi_lossy_at_mean_photon(black_box(3.0), 2.0, 0.3))
    });
    c.bench_function("sz_statistics", |b| {
        b.iter(|| sz_statistics(&p, &ch, black_box(0.7)))
    });

    let grid = open_phase_grid(0.0, std::f64::consts::PI, 721);
    c.bench_function("optimal phase on 721-point grid", |b| {
        b.iter(|| optimal_phase_error(&p, &ch, black_box(&grid)))
    });
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock oracle");
    group.sample_size(20);
    for (label, a, k) in [("alpha=1 k=2", 1.0, 2.0), ("alpha=0.5 k=5", 0.5, 5.0)] {
        let p = EcsParams::real(a, k).unwrap();
        let ch = LossChannel::from_loss(0.3).unwrap();
        group.bench_function(format!("build rho {label}"), |b| {
            b.iter(|| build_density_matrix(&p, &ch, 0.4, None).unwrap())
        });
        let rho = build_density_matrix(&p, &ch, 0.4, None).unwrap();
        group.bench_function(format!("qfi numeric {label}"), |b| {
            b.iter(|| qfi_of(black_box(&rho)))
        });
        group.bench_function(format!("S_z moments {label}"), |b| {
            b.iter(|| observable_moments_numeric(black_box(&rho)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_forms, oracle);
criterion_main!(benches);
