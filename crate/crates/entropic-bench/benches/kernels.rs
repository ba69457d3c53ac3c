use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use entropic::experiments;
use entropic::fluxes::{EulerEcKep, EulerEs, FluxSet, SainteMarieFlux};
use entropic::semidisc::Semidiscretization;
use entropic::systems::{EulerInternal2D, SainteMarie};
use entropic_bench::state_pairs;

fn flux_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("two_point_flux");
    let euler = EulerInternal2D::new(1.4).unwrap();
    let pairs = state_pairs(&euler, 1024, 1);
    g.throughput(Throughput::Elements(pairs.len() as u64));
    g.bench_function("euler_ec_kep", |b| {
        b.iter(|| {
            for (l, r) in &pairs {
                black_box(EulerEcKep.conservative(&euler, l, r, [0.6, 0.8]));
            }
        })
    });
    let es = EulerEs::default();
    g.bench_function("euler_es", |b| {
        b.iter(|| {
            for (l, r) in &pairs {
                black_box(es.conservative(&euler, l, r, [0.6, 0.8]));
            }
        })
    });
    let sm = SainteMarie::new(1.0, 2.0).unwrap();
    let smf = SainteMarieFlux::new(0.5, 1.0, 2.0 / 3.0);
    let pairs = state_pairs(&sm, 1024, 2);
    g.bench_function("sainte_marie", |b| {
        b.iter(|| {
            for (l, r) in &pairs {
                black_box(smf.conservative(&sm, l, r, [1.0, 0.0]));
                for k in 0..3 {
                    black_box(smf.nc_jump_product(&sm, l, r, [1.0, 0.0], k));
                }
            }
        })
    });
    g.finish();
}

fn rhs_1d(c: &mut Criterion) {
    let mut g = c.benchmark_group("rhs_1d");
    for p in [2, 3, 5] {
        let (disc, u) = experiments::sainte_marie_ec(p, 128).unwrap();
        let mut du = vec![[0.0; 5]; u.len()];
        g.throughput(Throughput::Elements(u.len() as u64));
        g.bench_with_input(BenchmarkId::new("sainte_marie", p), &p, |b, _| b.iter(|| disc.rhs(black_box(&u), 0.0, &mut du)));
    }
    g.finish();
}

fn rhs_2d(c: &mut Criterion) {
    let mut g = c.benchmark_group("rhs_2d");
    g.sample_size(20);
    for p in [2, 3, 5] {
        let (disc, u) = experiments::euler_free_stream(p, 8).unwrap();
        let mut du = vec![[0.0; 5]; u.len()];
        g.throughput(Throughput::Elements(u.len() as u64));
        g.bench_with_input(BenchmarkId::new("euler_warped", p), &p, |b, _| b.iter(|| disc.rhs(black_box(&u), 0.0, &mut du)));
    }
    let (disc, u) = experiments::well_balanced(3).unwrap();
    let mut du = vec![[0.0; 6]; u.len()];
    g.bench_function("lake_at_rest_p3", |b| b.iter(|| disc.rhs(black_box(&u), 0.0, &mut du)));
    g.finish();
}

criterion_group!(benches, flux_kernels, rhs_1d, rhs_2d);
criterion_main!(benches);
