use alrfit_core::backmap::{proportion_ci_bootstrap, proportion_ci_delta};
use alrfit_core::ingest::{bundled, to_regression_dataset, BUNDLED_CSV};
use alrfit_core::regress::fit;
use alrfit_core::simulate::{run_study, SimConfig};
use alrfit_core::{alr, alr_inverse, closure, ingest};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn transform(c: &mut Criterion) {
    let raw = [48.00, 12.00, 2.67, 37.33];
    c.bench_function("alr_round_trip", |b| {
        b.iter(|| {
            let comp = closure(black_box(&raw)).unwrap();
            alr_inverse(&alr(&comp)).unwrap()
        })
    });
}

fn table(c: &mut Criterion) {
    c.bench_function("parse_bundled", |b| {
        b.iter(|| ingest::parse_matches(black_box(BUNDLED_CSV)).unwrap())
    });

    let data = to_regression_dataset(&bundled()).unwrap();
    c.bench_function("fit_bundled", |b| b.iter(|| fit(black_box(&data)).unwrap()));

    let model = fit(&data).unwrap();
    c.bench_function("delta_ci", |b| {
        b.iter(|| proportion_ci_delta(black_box(&model), &[1.0], 0.95).unwrap())
    });

    let mut group = c.benchmark_group("bootstrap");
    group.sample_size(10);
    group.bench_function("b_100000", |b| {
        b.iter(|| proportion_ci_bootstrap(black_box(&model), &[1.0], 0.95, 100_000, 0).unwrap())
    });
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    for n in [70, 150] {
        let config = SimConfig::reference_design(n, 0);
        group.bench_function(format!("study_n{n}_r1000"), |b| {
            b.iter(|| run_study(black_box(&config)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transform, table, simulation);
criterion_main!(benches);
