//! Discrete operator `A u = div(x_N^2 grad Lap u - beta grad u)` on the strip.
//!
//! Normal direction: flux form with weights `x_N^2` on cell faces, face 0 on
//! the wall (so the wall flux vanishes identically), three-point second
//! differences for the Laplacian, clamped value and slope at `x_N = Xmax`.
//! Tangential direction: periodic second differences, diagonalized by the
//! discrete Fourier transform, one pentadiagonal system per mode.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::banded::{BandedLu, BandedMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::StripGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterBc {
    /// `u = 0` and `u_{x_N} = 0` at `Xmax`.
    ClampedZero,
    /// Value and slope at `Xmax` come from the problem data.
    ClampedManufactured,
}

#[derive(Clone, Debug)]
pub struct OperatorParams {
    pub beta: f64,
    pub grid: StripGrid,
    pub outer_bc: OuterBc,
    pub exec: Exec,
    stencils: Arc<NormalStencils>,
}

impl OperatorParams {
    pub fn new(beta: f64, grid: StripGrid, outer_bc: OuterBc) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::NegativeBeta(beta.to_string()));
        }
        let stencils = Arc::new(NormalStencils::new(&grid));
        Ok(OperatorParams {
            beta,
            grid,
            outer_bc,
            exec: Exec::default(),
            stencils,
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn stencils(&self) -> &NormalStencils {
        &self.stencils
    }
}

/// `(4 / hx^2) sin^2(pi m / Mx)`: eigenvalue of minus the periodic second difference.
pub fn tangential_symbol(m: usize, grid: &StripGrid) -> f64 {
    let hx = grid.hx();
    let s = (std::f64::consts::PI * m as f64 / grid.mx() as f64).sin();
    4.0 / (hx * hx) * s * s
}

/// Normal-direction coefficients shared by every mode.
#[derive(Clone, Debug)]
pub struct NormalStencils {
    j: usize,
    x: Vec<f64>,
    /// `[lower, centre, upper]` of the second difference at nodes `1..J-1`
    /// (index 0 unused).
    d2: Vec<[f64; 3]>,
    /// Outer second derivative `c0 u_J + c1 u_{J-1} + c2 u_{J-2} + c3 u'_J`.
    outer: [f64; 4],
    /// `x_f^2 / h_k` on faces `0..J-1`; zero on the wall face.
    face_coeff: Vec<f64>,
    /// Volumes of the flux divergence at nodes `1..J-1` (index 0 unused).
    volume: Vec<f64>,
}

impl NormalStencils {
    pub fn new(grid: &StripGrid) -> Self {
        let j = grid.j();
        let x = grid.normal_nodes().to_vec();
        let mut d2 = vec![[0.0; 3]; j];
        for k in 1..j {
            let hm = x[k] - x[k - 1];
            let hp = x[k + 1] - x[k];
            d2[k] = [2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))];
        }
        let d1 = x[j - 1] - x[j];
        let d2o = x[j - 2] - x[j];
        let den = d1 * d1 * d2o * d2o * (d2o - d1);
        let c1 = 2.0 * d2o.powi(3) / den;
        let c2 = -2.0 * d1.powi(3) / den;
        let outer = [-(c1 + c2), c1, c2, -(c1 * d1 + c2 * d2o)];
        let face_coeff = (0..j)
            .map(|k| {
                let f = grid.face(k);
                f * f / grid.spacing(k)
            })
            .collect();
        let mut volume = vec![0.0; j];
        for k in 1..j {
            volume[k] = if k == 1 {
                // first moment of the wall cell: exact for linear w'
                let f = grid.face(1);
                f * f / (2.0 * x[1])
            } else {
                grid.face(k) - grid.face(k - 1)
            };
        }
        NormalStencils {
            j,
            x,
            d2,
            outer,
            face_coeff,
            volume,
        }
    }

    pub fn face_coeff(&self, k: usize) -> f64 {
        self.face_coeff[k]
    }

    pub fn volume(&self, k: usize) -> f64 {
        self.volume[k]
    }

    pub fn outer_coefficients(&self) -> [f64; 4] {
        self.outer
    }

    /// Flux-form `D_N(x^2 D_N w)` at node `k` in `1..J-1`.
    #[inline]
    fn flux_div(&self, k: usize, wm: f64, w0: f64, wp: f64) -> f64 {
        let lo = if k == 1 {
            0.0
        } else {
            self.face_coeff[k - 1] * (w0 - wm)
        };
        (self.face_coeff[k] * (wp - w0) - lo) / self.volume[k]
    }

    /// Face differences `(v_{k+1} - v_k) / h_k` for `k = 0..J-1`.
    pub fn face_gradient(&self, v: &[f64]) -> Vec<f64> {
        (0..self.j)
            .map(|k| (v[k + 1] - v[k]) / (self.x[k + 1] - self.x[k]))
            .collect()
    }

    /// `(F_k - F_{k-1}) / V_k` at nodes `1..J-1` (index 0 and `J` zero).
    pub fn face_divergence(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.j + 1];
        for k in 1..self.j {
            out[k] = (f[k] - f[k - 1]) / self.volume[k];
        }
        out
    }
}

/// Per-mode operator on interior nodes `1..J-1`, with the columns multiplying
/// the wall value, the outer value and the outer slope kept apart.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    pub m: usize,
    pub lambda: f64,
    pub band: BandedMatrix,
    pub wall: Vec<f64>,
    pub outer_value: Vec<f64>,
    pub outer_slope: Vec<f64>,
}

const SLOPE: usize = usize::MAX;

impl ModeOperator {
    /// `L u_int + wall * g + outer_value * u_J + outer_slope * s`.
    pub fn apply<T>(&self, interior: &[T], g: T, u_outer: T, slope: T) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        let mut y = self.band.matvec(interior);
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = *yk + g * self.wall[k] + u_outer * self.outer_value[k] + slope * self.outer_slope[k];
        }
        y
    }

    /// `(I * a + L * b)` factorized.
    pub fn factor_shifted(&self, a: f64, b: f64) -> Result<BandedLu> {
        self.band.shifted(a, b).factor().map_err(|e| match e {
            Error::SingularMode { pivot, .. } => Error::SingularMode { mode: self.m, pivot },
            other => other,
        })
    }

    /// Dense dump including the boundary columns `[g | interior | u_J | s]`.
    pub fn to_dense_text(&self) -> String {
        let n = self.band.n();
        let mut s = String::new();
        for i in 0..n {
            let mut row = vec![format!("{:e}", self.wall[i])];
            row.extend((0..n).map(|j| format!("{:e}", self.band.get(i, j))));
            row.push(format!("{:e}", self.outer_value[i]));
            row.push(format!("{:e}", self.outer_slope[i]));
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Coefficients of `w_k = (D_N^2 - lambda) u` at `k = 1..J` over node
/// columns `0..=J` and the outer slope.
fn w_row(st: &NormalStencils, lambda: f64, k: usize) -> Vec<(usize, f64)> {
    let j = st.j;
    if k < j {
        let [a, b, c] = st.d2[k];
        vec![(k - 1, a), (k, b - lambda), (k + 1, c)]
    } else {
        let [c0, c1, c2, c3] = st.outer;
        vec![(j, c0 - lambda), (j - 1, c1), (j - 2, c2), (SLOPE, c3)]
    }
}

pub fn assemble_mode_operator(params: &OperatorParams, m: usize) -> ModeOperator {
    let st = params.stencils();
    let j = st.j;
    let n = j - 1;
    let lambda = tangential_symbol(m, &params.grid);
    let mut band = BandedMatrix::zeros(n, 2, 2);
    let mut wall = vec![0.0; n];
    let mut outer_value = vec![0.0; n];
    let mut outer_slope = vec![0.0; n];
    for k in 1..j {
        let v = st.volume[k];
        let upper = st.face_coeff[k] / v;
        let lower = st.face_coeff[k - 1] / v;
        let mut w_terms = vec![
            (k, -(upper + lower) - lambda * st.x[k] * st.x[k] - params.beta),
            (k + 1, upper),
        ];
        if k > 1 {
            w_terms.push((k - 1, lower));
        }
        for (wk, cw) in w_terms {
            for (col, cu) in w_row(st, lambda, wk) {
                let c = cw * cu;
                match col {
                    SLOPE => outer_slope[k - 1] += c,
                    0 => wall[k - 1] += c,
                    c_ if c_ == j => outer_value[k - 1] += c,
                    _ => band.add(k - 1, col - 1, c),
                }
            }
        }
    }
    ModeOperator {
        m,
        lambda,
        band,
        wall,
        outer_value,
        outer_slope,
    }
}

/// Row-wise real FFT along `x1` for fields laid out `values[j * mx + i]`.
#[derive(Clone)]
pub struct TangentialFft {
    mx: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for TangentialFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TangentialFft").field("mx", &self.mx).finish()
    }
}

impl TangentialFft {
    pub fn new(mx: usize) -> Self {
        let mut planner = FftPlanner::new();
        TangentialFft {
            mx,
            fwd: planner.plan_fft_forward(mx),
            inv: planner.plan_fft_inverse(mx),
        }
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    /// Transform of one row.
    pub fn forward_row(&self, row: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Real part of the normalized inverse transform of one row.
    pub fn inverse_row(&self, spec: &[Complex64]) -> Vec<f64> {
        let mut buf = spec.to_vec();
        self.inv.process(&mut buf);
        let s = 1.0 / self.mx as f64;
        buf.iter().map(|c| c.re * s).collect()
    }

    /// Mode-major spectrum `out[m][j]` of `rows` consecutive rows.
    pub fn forward(&self, values: &[f64], rows: usize, exec: Exec) -> Vec<Vec<Complex64>> {
        let mx = self.mx;
        let by_row = exec.map(rows, |j| self.forward_row(&values[j * mx..(j + 1) * mx]));
        (0..mx).map(|m| by_row.iter().map(|r| r[m]).collect()).collect()
    }

    /// Inverse of [`forward`](Self::forward), back to row-major real values.
    pub fn inverse(&self, modes: &[Vec<Complex64>], exec: Exec) -> Vec<f64> {
        let mx = self.mx;
        let rows = modes[0].len();
        let by_row = exec.map(rows, |j| {
            let spec: Vec<Complex64> = (0..mx).map(|m| modes[m][j]).collect();
            self.inverse_row(&spec)
        });
        by_row.concat()
    }
}

/// Fills modes above `Mx/2` as conjugates of their mirrors.
pub(crate) fn mirror_modes(modes: &mut [Vec<Complex64>]) {
    let mx = modes.len();
    for m in mx / 2 + 1..mx {
        let src: Vec<Complex64> = modes[mx - m].iter().map(|c| c.conj()).collect();
        modes[m] = src;
    }
}

/// All mode operators `0..=Mx/2` (higher modes share symbols with their mirrors).
pub fn assemble_all(params: &OperatorParams) -> Vec<ModeOperator> {
    params
        .exec
        .map(params.grid.mx() / 2 + 1, |m| assemble_mode_operator(params, m))
}

/// `A u` via tangential transform and per-mode banded products. Rows 0 and
/// `J` of the result are zero; `slope` is the outer normal derivative per
/// tangential node (zero when `None`).
pub fn apply_operator(params: &OperatorParams, u: &[f64], slope: Option<&[f64]>) -> Vec<f64> {
    let ops = assemble_all(params);
    apply_with(params, &ops, &TangentialFft::new(params.grid.mx()), u, slope)
}

pub(crate) fn apply_with(
    params: &OperatorParams,
    ops: &[ModeOperator],
    fft: &TangentialFft,
    u: &[f64],
    slope: Option<&[f64]>,
) -> Vec<f64> {
    let grid = &params.grid;
    let (mx, j) = (grid.mx(), grid.j());
    assert_eq!(u.len(), grid.len());
    let spec = fft.forward(u, j + 1, params.exec);
    let slope_hat = match slope {
        Some(s) => fft.forward_row(s),
        None => vec![Complex64::default(); mx],
    };
    let mut modes: Vec<Vec<Complex64>> = params.exec.map(mx / 2 + 1, |m| {
        let col = &spec[m];
        let mut y = ops[m].apply(&col[1..j], col[0], col[j], slope_hat[m]);
        y.insert(0, Complex64::default());
        y.push(Complex64::default());
        y
    });
    modes.resize(mx, Vec::new());
    mirror_modes(&mut modes);
    let mut out = fft.inverse(&modes, params.exec);
    out[..mx].iter_mut().for_each(|v| *v = 0.0);
    out[j * mx..].iter_mut().for_each(|v| *v = 0.0);
    out
}

/// Periodic second difference along `x1` of one row.
fn delta11(row: &[f64], hx: f64) -> Vec<f64> {
    let mx = row.len();
    let s = 1.0 / (hx * hx);
    (0..mx)
        .map(|i| (row[(i + 1) % mx] - 2.0 * row[i] + row[(i + mx - 1) % mx]) * s)
        .collect()
}

/// Discrete Laplacian on rows `1..=J` (row `J` uses the outer closure);
/// row 0 is left zero.
pub fn discrete_laplacian(params: &OperatorParams, u: &[f64], slope: Option<&[f64]>) -> Vec<f64> {
    let grid = &params.grid;
    let st = params.stencils();
    let (mx, j, hx) = (grid.mx(), grid.j(), grid.hx());
    let row = |k: usize| &u[k * mx..(k + 1) * mx];
    let mut w = vec![0.0; grid.len()];
    for k in 1..=j {
        let t = delta11(row(k), hx);
        for i in 0..mx {
            let normal = if k < j {
                let [a, b, c] = st.d2[k];
                a * row(k - 1)[i] + b * row(k)[i] + c * row(k + 1)[i]
            } else {
                let [c0, c1, c2, c3] = st.outer;
                c0 * row(j)[i] + c1 * row(j - 1)[i] + c2 * row(j - 2)[i] + c3 * slope.map_or(0.0, |s| s[i])
            };
            w[k * mx + i] = normal + t[i];
        }
    }
    w
}

/// `D_N(x^2 D_N v) + x^2 delta_11 v` on rows `1..J-1`; rows 0 and `J` zero.
pub fn weighted_divergence(params: &OperatorParams, v: &[f64]) -> Vec<f64> {
    let grid = &params.grid;
    let st = params.stencils();
    let (mx, j, hx) = (grid.mx(), grid.j(), grid.hx());
    let mut out = vec![0.0; grid.len()];
    for k in 1..j {
        let t = delta11(&v[k * mx..(k + 1) * mx], hx);
        let x2 = st.x[k] * st.x[k];
        for i in 0..mx {
            let wm = v[(k - 1) * mx + i];
            let w0 = v[k * mx + i];
            let wp = v[(k + 1) * mx + i];
            out[k * mx + i] = st.flux_div(k, wm, w0, wp) + x2 * t[i];
        }
    }
    out
}

/// `A u` straight from the real-space stencils (no transform).
pub fn apply_operator_direct(params: &OperatorParams, u: &[f64], slope: Option<&[f64]>) -> Vec<f64> {
    let w = discrete_laplacian(params, u, slope);
    let mut out = weighted_divergence(params, &w);
    let (mx, j) = (params.grid.mx(), params.grid.j());
    for k in 1..j {
        for i in 0..mx {
            out[k * mx + i] -= params.beta * w[k * mx + i];
        }
    }
    out
}

/// Result of a discrete integration-by-parts check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub residual: f64,
    /// Sum of the magnitudes of the terms entering the identity.
    pub scale: f64,
    /// The field does not vanish near the boundary, so boundary terms enter.
    pub violation: bool,
}

impl IdentityCheck {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

/// Nonzero within `cells` rows of either normal boundary.
fn touches_boundary(grid: &StripGrid, v: &[f64], cells: usize) -> bool {
    let (mx, j) = (grid.mx(), grid.j());
    (0..=j)
        .filter(|&k| k <= cells || k + cells >= j)
        .any(|k| v[k * mx..(k + 1) * mx].iter().any(|&x| x != 0.0))
}

/// `|<D_N F, v> + <F, D_N v>|` with node weights `V_k hx` and face weights
/// `h_k hx`. `f` holds face values `F[k * mx + i]` for faces `k = 0..J-1`.
pub fn sbp_residual(params: &OperatorParams, f: &[f64], v: &[f64]) -> IdentityCheck {
    let grid = &params.grid;
    let st = params.stencils();
    let (mx, j, hx) = (grid.mx(), grid.j(), grid.hx());
    assert_eq!(f.len(), j * mx);
    assert_eq!(v.len(), grid.len());
    let (mut lhs, mut rhs, mut scale) = (0.0, 0.0, 0.0);
    for i in 0..mx {
        let fl: Vec<f64> = (0..j).map(|k| f[k * mx + i]).collect();
        let vl: Vec<f64> = (0..=j).map(|k| v[k * mx + i]).collect();
        let div = st.face_divergence(&fl);
        let grad = st.face_gradient(&vl);
        for k in 1..j {
            let t = st.volume[k] * div[k] * vl[k] * hx;
            lhs += t;
            scale += t.abs();
        }
        for k in 0..j {
            let t = grid.spacing(k) * fl[k] * grad[k] * hx;
            rhs += t;
            scale += t.abs();
        }
    }
    IdentityCheck {
        residual: (lhs + rhs).abs(),
        scale,
        violation: touches_boundary(grid, v, 2),
    }
}

/// Weighted inner product over interior rows with weights `V_k hx`.
pub fn interior_inner(params: &OperatorParams, a: &[f64], b: &[f64]) -> f64 {
    let st = params.stencils();
    let (mx, j, hx) = (params.grid.mx(), params.grid.j(), params.grid.hx());
    let mut s = 0.0;
    for k in 1..j {
        let row: f64 = (0..mx).map(|i| a[k * mx + i] * b[k * mx + i]).sum();
        s += st.volume[k] * hx * row;
    }
    s
}

/// Residual of `<div(x^2 grad Lap u), u> - <x^2 Lap u, Lap u> - <E u, Lap u>`
/// where `E u = D_N(x^2 D_N u) - x^2 D_N^2 u` is the discrete `2 x_N u_{x_N}`.
pub fn energy_identity_residual(params: &OperatorParams, u: &[f64]) -> IdentityCheck {
    let grid = &params.grid;
    let (mx, j) = (grid.mx(), grid.j());
    let st = params.stencils();
    let w = discrete_laplacian(params, u, None);
    let t1 = interior_inner(params, &weighted_divergence(params, &w), u);
    let x2w: Vec<f64> = (0..grid.len()).map(|n| st.x[n / mx].powi(2) * w[n]).collect();
    let t2 = interior_inner(params, &x2w, &w);
    let mut eu = vec![0.0; grid.len()];
    for k in 1..j {
        let [a, b, c] = st.d2[k];
        let x2 = st.x[k] * st.x[k];
        for i in 0..mx {
            let (um, u0, up) = (u[(k - 1) * mx + i], u[k * mx + i], u[(k + 1) * mx + i]);
            eu[k * mx + i] = st.flux_div(k, um, u0, up) - x2 * (a * um + b * u0 + c * up);
        }
    }
    let t3 = interior_inner(params, &eu, &w);
    IdentityCheck {
        residual: (t1 - t2 - t3).abs(),
        scale: t1.abs() + t2.abs() + t3.abs(),
        violation: touches_boundary(grid, u, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(beta: f64, mx: usize, j: usize, gamma: f64) -> OperatorParams {
        let g = StripGrid::new(2.0, mx, 1.0, j, gamma).unwrap();
        OperatorParams::new(beta, g, OuterBc::ClampedManufactured).unwrap()
    }

    #[test]
    fn symbols() {
        let g = StripGrid::new(2.0 * PI, 16, 1.0, 8, 1.0).unwrap();
        assert_eq!(tangential_symbol(0, &g), 0.0);
        let hx = PI / 8.0;
        assert!((tangential_symbol(8, &g) - 4.0 / (hx * hx)).abs() < 1e-12);
        let e = 4.0 / (hx * hx) * (PI / 16.0).sin().powi(2);
        assert!((tangential_symbol(1, &g) - e).abs() < 1e-14);
    }

    #[test]
    fn bandwidth_two_and_zero_wall_flux() {
        for (beta, gamma) in [(0.0, 1.0), (0.75, 2.0), (2.0, 3.0)] {
            let p = params(beta, 16, 20, gamma);
            assert_eq!(p.stencils().face_coeff(0), 0.0);
            for m in [0, 1, 8] {
                let op = assemble_mode_operator(&p, m);
                assert_eq!(op.band.measured_bandwidth(), 2);
                // only the first two rows see the wall value
                assert!(op.wall[2..].iter().all(|&c| c == 0.0));
            }
        }
    }

    #[test]
    fn linear_profile_in_kernel_beta0() {
        let p = params(0.0, 8, 16, 1.0);
        let u = p.grid.sample(|_, x| x);
        let slope = vec![1.0; 8];
        let au = apply_operator(&p, &u, Some(&slope));
        assert!(au.iter().all(|v| v.abs() <= 1e-12), "{au:?}");
    }

    #[test]
    fn quadratic_particular_solution() {
        // l_1(-x^2/2) = 1
        let p = params(1.0, 8, 16, 2.0);
        let u = p.grid.sample(|_, x| -0.5 * x * x);
        let slope = vec![-1.0; 8];
        let au = apply_operator(&p, &u, Some(&slope));
        let (mx, j) = (8, 16);
        for k in 1..j {
            for i in 0..mx {
                assert!((au[k * mx + i] - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn transform_matches_direct_stencil() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = params(0.6, 16, 24, 2.0);
        let u: Vec<f64> = (0..p.grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = apply_operator(&p, &u, Some(&s));
        let b = apply_operator_direct(&p, &u, Some(&s));
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff <= 1e-12 * scale, "{diff} vs {scale}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let p = params(1.0, 8, 12, 1.0);
        let au = apply_operator(&p, &vec![0.0; p.grid.len()], None);
        assert!(au.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dense_dump_shape() {
        let p = params(1.0, 8, 10, 1.0);
        let text = assemble_mode_operator(&p, 1).to_dense_text();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.split(' ').count() == 12));
    }
}
