use degenlab::grid::StripGrid;
use degenlab::operator::{
    apply_operator, apply_operator_direct, assemble_mode_operator, energy_identity_residual, sbp_residual,
    OperatorParams, OuterBc,
};
use degenlab::Exec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(beta: f64, mx: usize, j: usize, gamma: f64, bc: OuterBc) -> OperatorParams {
    OperatorParams::new(beta, StripGrid::new(2.0, mx, 1.0, j, gamma).unwrap(), bc).unwrap()
}

fn compact(grid: &StripGrid, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mx, j) = (grid.mx(), grid.j());
    let mut v = vec![0.0; grid.len()];
    for k in 3..=j - 3 {
        for i in 0..mx {
            v[k * mx + i] = rng.gen_range(-1.0..1.0);
        }
    }
    v
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn interior_error(p: &OperatorParams, got: &[f64], want: impl Fn(f64, f64) -> f64) -> f64 {
    let g = &p.grid;
    let mx = g.mx();
    let mut e = 0.0f64;
    for k in 1..=g.j() - 3 {
        for i in 0..mx {
            e = e.max((got[k * mx + i] - want(g.x1(i), g.xn(k))).abs());
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn summation_by_parts_and_energy(
        seed in any::<u64>(),
        mx in prop::sample::select(vec![8usize, 12, 16]),
        j in 12usize..40,
        gamma in 1.0f64..3.0,
        beta in 0.0f64..3.0,
    ) {
        let p = params(beta, mx, j, gamma, OuterBc::ClampedZero);
        let v = compact(&p.grid, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let f: Vec<f64> = (0..j * mx).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sbp = sbp_residual(&p, &f, &v);
        prop_assert!(!sbp.violation);
        prop_assert!(sbp.relative() <= 1e-10, "sbp {}", sbp.relative());
        let e = energy_identity_residual(&p, &v);
        prop_assert!(e.relative() <= 1e-10, "energy {}", e.relative());
    }

    #[test]
    fn transform_matches_direct(
        seed in any::<u64>(),
        mx in prop::sample::select(vec![8usize, 10, 12]),
        j in 8usize..30,
        gamma in 1.0f64..3.0,
        beta in 0.0f64..3.0,
    ) {
        let p = params(beta, mx, j, gamma, OuterBc::ClampedManufactured);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..p.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s: Vec<f64> = (0..mx).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = apply_operator(&p, &u, Some(&s));
        let b = apply_operator_direct(&p, &u, Some(&s));
        let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(diff <= 1e-11 * max_abs(&b).max(1.0), "diff {diff}");
    }

    #[test]
    fn operator_is_linear(seed in any::<u64>(), c in -3.0f64..3.0) {
        let p = params(1.0, 8, 16, 2.0, OuterBc::ClampedZero);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..p.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..p.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + c * b).collect();
        let (au, av, aw) = (apply_operator(&p, &u, None), apply_operator(&p, &v, None), apply_operator(&p, &w, None));
        let scale = max_abs(&au).max(max_abs(&av)).max(1.0) * (1.0 + c.abs());
        for k in 0..aw.len() {
            prop_assert!((aw[k] - au[k] - c * av[k]).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn mode_operators_are_pentadiagonal(
        mx in prop::sample::select(vec![8usize, 10, 16]),
        j in 8usize..24,
        gamma in 1.0f64..4.0,
        beta in 0.0f64..3.0,
    ) {
        let p = params(beta, mx, j, gamma, OuterBc::ClampedZero);
        for m in 0..=mx / 2 {
            let op = assemble_mode_operator(&p, m);
            prop_assert_eq!(op.band.n(), j - 1);
            prop_assert!(op.band.measured_bandwidth() <= 2);
            // only the two rows next to the wall see the wall value
            prop_assert!(op.wall.iter().skip(2).all(|&c| c == 0.0));
        }
    }
}

#[test]
fn structure_at_64() {
    let p = params(1.0, 64, 64, 2.0, OuterBc::ClampedZero);
    for seed in 0..4 {
        let v = compact(&p.grid, seed);
        let f: Vec<f64> = compact(&p.grid, seed + 100)[p.grid.mx()..].to_vec();
        assert!(sbp_residual(&p, &f, &v).relative() <= 1e-10);
        assert!(energy_identity_residual(&p, &v).relative() <= 1e-10);
    }
}

#[test]
fn energy_check_flags_boundary_support() {
    let p = params(1.0, 8, 16, 2.0, OuterBc::ClampedZero);
    let ones = vec![1.0; p.grid.len()];
    assert!(energy_identity_residual(&p, &ones).violation);
}

// u = v(x_N): A u = l_beta v with l_beta x^a = (a-1)[a(a-1)(a-2) - beta a] x^(a-2)
fn lbeta_power(beta: f64, a: f64, x: f64) -> f64 {
    (a - 1.0) * (a * (a - 1.0) * (a - 2.0) - beta * a) * x.powf(a - 2.0)
}

fn reduction_errors(beta: f64, a: f64, gamma: f64) -> Vec<f64> {
    [32usize, 64, 128]
        .iter()
        .map(|&j| {
            let p = params(beta, 8, j, gamma, OuterBc::ClampedManufactured);
            let u = p.grid.sample(|_, x| x.powf(a));
            let slope = vec![a; 8];
            let au = apply_operator(&p, &u, Some(&slope));
            interior_error(&p, &au, |_, x| lbeta_power(beta, a, x))
        })
        .collect()
}

fn orders(e: &[f64]) -> Vec<f64> {
    e.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn mode_zero_reduces_to_the_ordinary_operator() {
    // x^3 and x^4 are not in the kernel; the interior error is second order
    for (beta, a) in [(1.0, 3.0), (0.5, 4.0), (2.0, 3.0)] {
        let e = reduction_errors(beta, a, 2.0);
        let o = orders(&e);
        assert!(o[1] >= 1.8, "beta {beta} a {a}: errors {e:?} orders {o:?}");
    }
}

#[test]
fn kernel_element_is_preserved() {
    // beta = 3/4: x^(5/2) lies in the kernel, so A u -> 0 on interior rows
    let e = reduction_errors(0.75, 2.5, 4.0);
    let o = orders(&e);
    assert!(o[1] >= 1.8, "errors {e:?} orders {o:?}");
    assert!(e[2] < 1e-2, "errors {e:?}");
}

#[test]
fn tangential_modes_decouple() {
    let p = params(1.0, 16, 24, 2.0, OuterBc::ClampedZero);
    let g = &p.grid;
    let k = 2.0 * std::f64::consts::PI * 3.0 / g.lx();
    let u = g.sample(|x1, x| (k * x1).cos() * x * x * (1.0 - x).powi(2));
    let au = apply_operator(&p, &u, None);
    let mx = g.mx();
    for row in 1..g.j() {
        let r = &au[row * mx..(row + 1) * mx];
        let amp = r[0];
        for (i, v) in r.iter().enumerate() {
            assert!((v - amp * (k * g.x1(i)).cos()).abs() <= 1e-9 * (1.0 + amp.abs()));
        }
    }
}

#[test]
fn policies_agree_bitwise() {
    let base = params(1.5, 16, 24, 2.0, OuterBc::ClampedManufactured);
    let seq = base.clone().with_exec(Exec::Sequential);
    let par = base.with_exec(Exec::Parallel);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u: Vec<f64> = (0..seq.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let a = apply_operator(&seq, &u, None);
    let b = apply_operator(&par, &u, None);
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}
