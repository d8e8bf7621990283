use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use modjet::density::{run_pipeline, DensityBudget};
use modjet::locate::{pole_shift_search_with, SearchOptions};
use modjet::numeric::UHPoint;
use modjet::par::Exec;
use modjet::polyalg::parse_poly;

fn pole_shift(c: &mut Criterion) {
    let f = parse_poly("X^4*Y1^2 + Y0*(Y0-1728)").unwrap();
    let ms: Vec<i64> = (5..=16).collect();
    let mut group = c.benchmark_group("pole_shift_12_shifts");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = SearchOptions { exec, ..SearchOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, opts| {
            b.iter(|| pole_shift_search_with(&f, &UHPoint::rho(opts.prec), &ms, opts).unwrap())
        });
    }
    group.finish();
}

fn density(c: &mut Criterion) {
    let f = parse_poly("Y2").unwrap();
    let mut group = c.benchmark_group("density_y2");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let budget = DensityBudget { exec, ..DensityBudget::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &budget, |b, budget| {
            b.iter(|| run_pipeline(&f, budget).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pole_shift, density);
criterion_main!(benches);
