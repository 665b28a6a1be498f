use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples on a uniform `(x1, t)` lattice, `values[b * nx + a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice2 {
    pub x0: f64,
    pub hx: f64,
    pub nx: usize,
    pub t0: f64,
    pub ht: f64,
    pub nt: usize,
    pub values: Vec<f64>,
}

impl Lattice2 {
    pub fn sample<F: Fn(f64, f64) -> f64>(x0: f64, hx: f64, nx: usize, t0: f64, ht: f64, nt: usize, f: F) -> Self {
        let mut values = Vec::with_capacity(nx * nt);
        for b in 0..nt {
            for a in 0..nx {
                values.push(f(x0 + a as f64 * hx, t0 + b as f64 * ht));
            }
        }
        Lattice2 {
            x0,
            hx,
            nx,
            t0,
            ht,
            nt,
            values,
        }
    }

    pub fn x(&self, a: usize) -> f64 {
        self.x0 + a as f64 * self.hx
    }

    pub fn t(&self, b: usize) -> f64 {
        self.t0 + b as f64 * self.ht
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[b * self.nx + a]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `exp(-1 / (1 - s^2))` on `|s| < 1`.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

fn bump_d1(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let d = 1.0 - s * s;
    -2.0 * s / (d * d) * bump(s)
}

fn bump_d2(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let d = 1.0 - s * s;
    (6.0 * s.powi(4) - 2.0) / d.powi(4) * bump(s)
}

fn bump_deriv(order: u8, s: f64) -> f64 {
    match order {
        0 => bump(s),
        1 => bump_d1(s),
        2 => bump_d2(s),
        _ => panic!("kernel derivatives up to order 2"),
    }
}

/// `omega_eps(y, tau) = c psi(2y/eps) psi(2tau/eps)`, support inside
/// `|y| + |tau| < eps`, discretely normalized to unit mass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MollifierKernel {
    pub eps: f64,
    pub hx: f64,
    pub ht: f64,
    pub kx: usize,
    pub kt: usize,
    /// `sum psi psi hx ht / eps^2` before normalization (the unit-scale mass).
    pub normalization: f64,
    #[serde(skip)]
    raw_sum: f64,
    #[serde(skip)]
    pub weights: Vec<f64>,
}

impl MollifierKernel {
    pub fn new(eps: f64, hx: f64, ht: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1) (got {eps})")));
        }
        if !(hx > 0.0 && ht > 0.0) || hx > eps / 8.0 * (1.0 + 1e-12) || ht > eps / 8.0 * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "lattice spacing must be <= eps/8 (hx = {hx}, ht = {ht})"
            )));
        }
        let kx = (0.5 * eps / hx).ceil() as usize;
        let kt = (0.5 * eps / ht).ceil() as usize;
        let px: Vec<f64> = (-(kx as i64)..=kx as i64)
            .map(|a| bump(2.0 * a as f64 * hx / eps))
            .collect();
        let pt: Vec<f64> = (-(kt as i64)..=kt as i64)
            .map(|b| bump(2.0 * b as f64 * ht / eps))
            .collect();
        let raw_sum = px.iter().sum::<f64>() * pt.iter().sum::<f64>();
        let weights = pt
            .iter()
            .flat_map(|t| px.iter().map(move |x| x * t / raw_sum))
            .collect();
        Ok(MollifierKernel {
            eps,
            hx,
            ht,
            kx,
            kt,
            normalization: raw_sum * hx * ht / (eps * eps),
            raw_sum,
            weights,
        })
    }

    fn offsets(&self, k: usize, h: f64) -> Vec<f64> {
        (-(k as i64)..=k as i64).map(|a| a as f64 * h).collect()
    }

    /// Weights of `D_x^alpha D_t^beta omega_eps` (times the cell size).
    /// Even orders are corrected so the weights sum to zero.
    pub fn derivative_weights(&self, alpha: u8, beta: u8) -> Vec<f64> {
        let factor = |order: u8, k: usize, h: f64| -> Vec<f64> {
            let base: Vec<f64> = self.offsets(k, h).iter().map(|y| bump(2.0 * y / self.eps)).collect();
            let sc = (2.0 / self.eps).powi(order as i32);
            let mut f: Vec<f64> = self
                .offsets(k, h)
                .iter()
                .map(|y| sc * bump_deriv(order, 2.0 * y / self.eps))
                .collect();
            if order > 0 && order % 2 == 0 {
                let total: f64 = f.iter().sum();
                let mass: f64 = base.iter().sum();
                f.iter_mut().zip(&base).for_each(|(v, b)| *v -= total * b / mass);
            }
            f
        };
        let fx = factor(alpha, self.kx, self.hx);
        let ft = factor(beta, self.kt, self.ht);
        ft.iter()
            .flat_map(|t| fx.iter().map(move |x| x * t / self.raw_sum))
            .collect()
    }

    /// `sum |d| eps^(alpha + beta)` for the derivative weights.
    pub fn derivative_constant(&self, alpha: u8, beta: u8) -> f64 {
        let s: f64 = self.derivative_weights(alpha, beta).iter().map(|d| d.abs()).sum();
        s * self.eps.powi((alpha + beta) as i32)
    }

    /// Discrete second moment `sum w y^2` in `x1`.
    pub fn second_moment_x(&self) -> f64 {
        let w = 2 * self.kx + 1;
        self.weights
            .iter()
            .enumerate()
            .map(|(n, wv)| {
                let y = ((n % w) as f64 - self.kx as f64) * self.hx;
                wv * y * y
            })
            .sum()
    }
}

fn convolve(h: &Lattice2, w: &[f64], kx: usize, kt: usize) -> Result<Lattice2> {
    if h.nx <= 2 * kx || h.nt <= 2 * kt {
        return Err(Error::invalid("lattice smaller than the kernel support"));
    }
    let (nx, nt) = (h.nx - 2 * kx, h.nt - 2 * kt);
    let wx = 2 * kx + 1;
    let mut values = Vec::with_capacity(nx * nt);
    for b in 0..nt {
        for a in 0..nx {
            let mut acc = 0.0;
            for (n, wv) in w.iter().enumerate() {
                let (p, r) = (n % wx, n / wx);
                // (u * w)(x) = sum w(y) u(x - y)
                acc += wv * h.get(a + 2 * kx - p, b + 2 * kt - r);
            }
            values.push(acc);
        }
    }
    Ok(Lattice2 {
        x0: h.x(kx),
        hx: h.hx,
        nx,
        t0: h.t(kt),
        ht: h.ht,
        nt,
        values,
    })
}

fn check_spacing(h: &Lattice2, k: &MollifierKernel) -> Result<()> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if !close(h.hx, k.hx) || !close(h.ht, k.ht) {
        return Err(Error::invalid("lattice spacing differs from the kernel spacing"));
    }
    Ok(())
}

/// Discrete convolution with `omega_eps` on the valid part of the lattice.
pub fn mollify(h: &Lattice2, kernel: &MollifierKernel) -> Result<Lattice2> {
    check_spacing(h, kernel)?;
    convolve(h, &kernel.weights, kernel.kx, kernel.kt)
}

/// `D_x^alpha D_t^beta (h * omega_eps)` via differentiated kernel weights.
pub fn mollify_derivative(h: &Lattice2, kernel: &MollifierKernel, alpha: u8, beta: u8) -> Result<Lattice2> {
    check_spacing(h, kernel)?;
    convolve(h, &kernel.derivative_weights(alpha, beta), kernel.kx, kernel.kt)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeFit {
    /// Smallest total degree (<= 6) whose least-squares fit meets the tolerance.
    pub degree: Option<usize>,
    /// Max fit residual at that degree (or at degree 6 when none fits).
    pub residual: f64,
    pub scale: f64,
}

/// Least-squares fit of total degree `d` in normalized coordinates; returns
/// the max residual.
pub fn polynomial_fit_residual(l: &Lattice2, d: usize) -> f64 {
    let (xa, xb) = (l.x(0), l.x(l.nx - 1));
    let (ta, tb) = (l.t(0), l.t(l.nt - 1));
    let norm = |v: f64, a: f64, b: f64| if b > a { (2.0 * v - a - b) / (b - a) } else { 0.0 };
    let powers: Vec<(usize, usize)> = (0..=d).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect();
    let n = l.nx * l.nt;
    let mut m = DMatrix::<f64>::zeros(n, powers.len());
    let mut rhs = DVector::<f64>::zeros(n);
    for b in 0..l.nt {
        for a in 0..l.nx {
            let row = b * l.nx + a;
            let (x, t) = (norm(l.x(a), xa, xb), norm(l.t(b), ta, tb));
            for (c, &(i, j)) in powers.iter().enumerate() {
                m[(row, c)] = x.powi(i as i32) * t.powi(j as i32);
            }
            rhs[row] = l.get(a, b);
        }
    }
    let qr = m.clone().qr();
    let qtb = qr.q().transpose() * &rhs;
    let coef = qr
        .r()
        .solve_upper_triangular(&qtb)
        .unwrap_or_else(|| DVector::zeros(powers.len()));
    (m * coef - rhs).amax()
}

/// Fitted total degree of `mollify(p)`.
pub fn mollifier_degree_check(p: &Lattice2, kernel: &MollifierKernel) -> Result<DegreeFit> {
    let out = mollify(p, kernel)?;
    let scale = out.max_abs().max(f64::MIN_POSITIVE);
    let mut last = f64::INFINITY;
    for d in 0..=6 {
        let r = polynomial_fit_residual(&out, d);
        last = r;
        if r <= 1e-8 * scale {
            return Ok(DegreeFit {
                degree: Some(d),
                residual: r,
                scale,
            });
        }
    }
    Ok(DegreeFit {
        degree: None,
        residual: last,
        scale,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeBoundCheck {
    pub alpha: u8,
    pub beta: u8,
    pub measured: f64,
    pub c_kernel: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Max of `D_x^alpha D_t^beta (u * omega_eps)` against
/// `C_kernel eps^-(alpha+beta) c R^M`, given `max |u| <= c R^M`.
pub fn mollifier_derivative_bound(
    u: &Lattice2,
    kernel: &MollifierKernel,
    alpha: u8,
    beta: u8,
    r: f64,
    m: f64,
    c: f64,
) -> Result<DerivativeBoundCheck> {
    let growth = c * r.powf(m);
    if u.max_abs() > growth * (1.0 + 1e-12) {
        return Err(Error::Contract(format!(
            "max |u| = {} exceeds the growth bound {growth}",
            u.max_abs()
        )));
    }
    let measured = mollify_derivative(u, kernel, alpha, beta)?.max_abs();
    let c_kernel = kernel.derivative_constant(alpha, beta);
    let bound = c_kernel * kernel.eps.powi(-((alpha + beta) as i32)) * growth;
    Ok(DerivativeBoundCheck {
        alpha,
        beta,
        measured,
        c_kernel,
        bound,
        ratio: measured / bound,
    })
}
