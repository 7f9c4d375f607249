use std::hint::black_box;

use bearingcap::fem2d::convergence_study;
use bearingcap::geometry::{BearingContactGeometry, RingSide, SectionPlane};
use bearingcap::quadrature::QuadratureSpec;
use bearingcap::semi_analytic::cap3d_model_e;
use bearingcap::Execution;
use criterion::{criterion_group, criterion_main, Criterion};

fn gaps() -> Vec<f64> {
    (0..8).map(|k| 1e-4 * 50f64.powf(k as f64 / 7.0)).collect()
}

fn model_e_sweep(c: &mut Criterion) {
    let base = BearingContactGeometry::bearing_6205_c3(RingSide::Outer, 1e-3, 2.2).unwrap();
    let spec = QuadratureSpec { rel_tol: 1e-7, ..QuadratureSpec::default() };
    let gaps = gaps();
    let mut group = c.benchmark_group("model_e_sweep");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| {
                exec.map(&gaps, |&s| cap3d_model_e(&base.with_gap(s).unwrap(), true, &spec).unwrap().value)
            })
        });
    }
    group.finish();
}

fn fem_ladder(c: &mut Criterion) {
    let section = BearingContactGeometry::bearing_6205_c3(RingSide::Outer, 1e-3, 2.2)
        .unwrap()
        .to_dimensionless(SectionPlane::SectionI)
        .unwrap();
    let mut group = c.benchmark_group("fem_ladder");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| black_box(convergence_study(&section, 1.0, 4, exec).unwrap().extrapolated))
        });
    }
    group.finish();
}

criterion_group!(benches, model_e_sweep, fem_ladder);
criterion_main!(benches);
