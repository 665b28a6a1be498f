use degenlab::evolution::{evolve, solve_steady, Boundary, SchemeConfig, SteadyProblem, ZeroData};
use degenlab::grid::StripGrid;
use degenlab::operator::{apply_operator, OperatorParams, OuterBc};
use degenlab::series::{FieldSeries, FieldSnapshot};
use degenlab::Exec;
use proptest::prelude::*;

fn params(beta: f64, mx: usize, j: usize, gamma: f64) -> OperatorParams {
    OperatorParams::new(
        beta,
        StripGrid::new(2.0, mx, 1.0, j, gamma).unwrap(),
        OuterBc::ClampedZero,
    )
    .unwrap()
}

fn bump(grid: &StripGrid, k: f64) -> Vec<f64> {
    let w = 2.0 * std::f64::consts::PI * k / grid.lx();
    grid.sample(|x1, x| (1.0 + 0.5 * (w * x1).cos()) * (x * (1.0 - x)).powi(2))
}

fn bitwise_equal(a: &FieldSeries, b: &FieldSeries) -> bool {
    a.len() == b.len()
        && a.snapshots().iter().zip(b.snapshots()).all(|(x, y)| {
            x.time.to_bits() == y.time.to_bits()
                && x.values.iter().zip(&y.values).all(|(u, v)| u.to_bits() == v.to_bits())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn zero_data_stays_zero(
        beta in 0.0f64..4.0,
        mx in prop::sample::select(vec![8usize, 12, 16]),
        j in 8usize..32,
        gamma in 1.0f64..3.0,
        theta in prop::sample::select(vec![0.5f64, 0.75, 1.0]),
    ) {
        let p = params(beta, mx, j, gamma);
        let s = SchemeConfig::new(theta, 0.01, 0.1, 2).unwrap();
        let out = evolve(&p, &s, &ZeroData, &FieldSnapshot::zeros(&p.grid, 0.0)).unwrap();
        prop_assert_eq!(out.len(), 6);
        prop_assert!(out.snapshots().iter().all(|s| s.values.iter().all(|v| v.to_bits() == 0)));
    }

    #[test]
    fn evolution_is_linear_in_the_initial_data(c in -2.0f64..2.0, beta in 0.0f64..2.0) {
        let p = params(beta, 8, 16, 2.0);
        let s = SchemeConfig::backward_euler(0.01, 0.05, 5).unwrap();
        let u = bump(&p.grid, 1.0);
        let v = bump(&p.grid, 2.0);
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + c * b).collect();
        let run = |x: &[f64]| evolve(&p, &s, &ZeroData, &FieldSnapshot::new(0.0, x.to_vec())).unwrap();
        let (eu, ev, ew) = (run(&u), run(&v), run(&w));
        let (lu, lv, lw) = (eu.last().unwrap(), ev.last().unwrap(), ew.last().unwrap());
        for k in 0..lw.values.len() {
            prop_assert!((lw.values[k] - lu.values[k] - c * lv.values[k]).abs() <= 1e-12 * (1.0 + c.abs()));
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let p = params(1.0, 16, 24, 2.0);
    let s = SchemeConfig::new(0.5, 0.005, 0.1, 4).unwrap();
    let u0 = FieldSnapshot::new(0.0, bump(&p.grid, 1.0));
    let a = evolve(&p, &s, &ZeroData, &u0).unwrap();
    let b = evolve(&p, &s, &ZeroData, &u0).unwrap();
    assert!(bitwise_equal(&a, &b));
}

#[test]
fn policies_evolve_bitwise_identically() {
    let base = params(1.0, 32, 24, 2.0);
    let s = SchemeConfig::backward_euler(0.005, 0.05, 2).unwrap();
    let u0 = FieldSnapshot::new(0.0, bump(&base.grid, 3.0));
    let a = evolve(&base.clone().with_exec(Exec::Sequential), &s, &ZeroData, &u0).unwrap();
    let b = evolve(&base.with_exec(Exec::Parallel), &s, &ZeroData, &u0).unwrap();
    assert!(bitwise_equal(&a, &b));
}

#[test]
fn single_mode_stays_single_mode() {
    let p = params(1.0, 16, 24, 2.0);
    let g = &p.grid;
    let w = 2.0 * std::f64::consts::PI * 2.0 / g.lx();
    let u0 = g.sample(|x1, x| (w * x1).sin() * (x * (1.0 - x)).powi(2));
    let s = SchemeConfig::backward_euler(0.01, 0.1, 10).unwrap();
    let out = evolve(&p, &s, &ZeroData, &FieldSnapshot::new(0.0, u0)).unwrap();
    let last = out.last().unwrap();
    let mx = g.mx();
    let amp_at = |k: usize| last.values[k * mx + mx / 8] / (w * g.x1(mx / 8)).sin();
    for k in 1..g.j() {
        let a = amp_at(k);
        for i in 0..mx {
            assert!((last.values[k * mx + i] - a * (w * g.x1(i)).sin()).abs() <= 1e-12);
        }
    }
}

#[test]
fn steady_state_satisfies_the_discrete_equation() {
    let p = params(1.0, 8, 24, 2.0);
    let g = &p.grid;
    let f = g.sample(|x1, x| x * (1.0 - x) + 0.3 * (std::f64::consts::PI * x1).cos());
    let steady = solve_steady(
        &p,
        &SteadyProblem {
            forcing: f.clone(),
            boundary: Boundary::zero(g.mx()),
        },
    )
    .unwrap();
    let au = apply_operator(&p, &steady.values, None);
    let mx = g.mx();
    for k in 1..g.j() {
        for i in 0..mx {
            let n = k * mx + i;
            assert!((au[n] - f[n]).abs() <= 1e-9, "row {k}: {} vs {}", au[n], f[n]);
        }
    }
}

#[test]
fn decaying_run_stays_bounded() {
    let p = params(1.0, 16, 32, 2.0);
    let s = SchemeConfig::backward_euler(0.005, 1.0, 20).unwrap();
    let u0 = FieldSnapshot::new(0.0, bump(&p.grid, 1.0));
    let out = evolve(&p, &s, &ZeroData, &u0).unwrap();
    let first = out.snapshots()[0].max_abs();
    let last = out.last().unwrap().max_abs();
    assert!(out.snapshots().iter().all(|s| s.max_abs() <= 2.0 * first));
    assert!(last < first);
}
