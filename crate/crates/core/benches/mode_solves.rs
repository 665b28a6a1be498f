use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use degenlab::evolution::{SchemeConfig, Stepper, ZeroData};
use degenlab::grid::StripGrid;
use degenlab::operator::{apply_operator, OperatorParams, OuterBc};
use degenlab::Exec;

fn params(mx: usize, j: usize, exec: Exec) -> OperatorParams {
    let g = StripGrid::new(4.0, mx, 3.0, j, 2.0).unwrap();
    OperatorParams::new(1.0, g, OuterBc::ClampedZero)
        .unwrap()
        .with_exec(exec)
}

fn field(p: &OperatorParams) -> Vec<f64> {
    p.grid.sample(|x1, xn| (x1 * 1.7).sin() * xn * xn * (3.0 - xn).powi(2))
}

fn bench_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_operator");
    for (mx, j) in [(64, 48), (256, 192)] {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let p = params(mx, j, exec);
            let u = field(&p);
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), format!("{mx}x{j}")),
                &u,
                |b, u| b.iter(|| apply_operator(&p, black_box(u), None)),
            );
        }
    }
    group.finish();
}

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_step");
    let scheme = SchemeConfig::backward_euler(1e-3, 1e-2, 1).unwrap();
    for (mx, j) in [(64, 48), (256, 192)] {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let p = params(mx, j, exec);
            let stepper = Stepper::new(&p, &scheme).unwrap();
            let u = field(&p);
            let now = stepper.level_at(&ZeroData, 0.0);
            let next = stepper.level_at(&ZeroData, 1e-3);
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), format!("{mx}x{j}")),
                &u,
                |b, u| b.iter(|| stepper.step(black_box(u), &now, &next)),
            );
        }
    }
    group.finish();
}

fn config() -> Criterion {
    Criterion::default()
        .sample_size(20)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3))
}

criterion_group! {
    name = benches;
    config = config();
    targets = bench_apply, bench_step
}
criterion_main!(benches);
