use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{cylinder_mask, ParabolicCylinder, StripGrid};

/// Quintic smooth step `6s^5 - 15s^4 + 10s^3` on `[0, 1]`.
pub fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
}

fn smoothstep_d1(s: f64) -> f64 {
    if !(0.0..=1.0).contains(&s) {
        return 0.0;
    }
    30.0 * s * s * (1.0 - s) * (1.0 - s)
}

fn smoothstep_d2(s: f64) -> f64 {
    if !(0.0..=1.0).contains(&s) {
        return 0.0;
    }
    60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
}

/// `max |S'| = 15/8`
pub const STEP_D1_MAX: f64 = 1.875;
/// `max |S''| = 10 / sqrt(3)`
pub const STEP_D2_MAX: f64 = 5.773_502_691_896_258;

/// One-dimensional plateau: 1 on `|x - c| <= inner`, 0 beyond `inner + width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Plateau {
    pub center: f64,
    pub inner: f64,
    pub width: f64,
    /// Period for minimum-image distances.
    pub period: Option<f64>,
}

impl Plateau {
    fn offset(&self, x: f64) -> f64 {
        let d = x - self.center;
        match self.period {
            Some(p) => d - p * (d / p).round(),
            None => d,
        }
    }

    fn arg(&self, x: f64) -> (f64, f64) {
        let d = self.offset(x);
        (1.0 - (d.abs() - self.inner) / self.width, d.signum())
    }

    pub fn value(&self, x: f64) -> f64 {
        smoothstep(self.arg(x).0)
    }

    pub fn d1(&self, x: f64) -> f64 {
        let (s, sign) = self.arg(x);
        -sign * smoothstep_d1(s) / self.width
    }

    pub fn d2(&self, x: f64) -> f64 {
        let (s, _) = self.arg(x);
        smoothstep_d2(s) / (self.width * self.width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeBound {
    /// Orders in `(x1, x_N)`.
    pub alpha: [u8; 2],
    pub beta: u8,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Product cutoff `eta(x1) eta(x_N) eta(t)`, parabolically scaled in `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffFunction {
    pub cylinder: ParabolicCylinder,
    pub q: f64,
    pub x1: Plateau,
    pub xn: Plateau,
    pub t: Plateau,
    #[serde(skip)]
    pub x1_samples: Vec<f64>,
    #[serde(skip)]
    pub xn_samples: Vec<f64>,
    #[serde(skip)]
    pub t_samples: Vec<f64>,
    pub bounds: Vec<DerivativeBound>,
}

impl CutoffFunction {
    /// Transition length `(q - 1) R`.
    pub fn width(&self) -> f64 {
        (self.q - 1.0) * self.cylinder.r
    }

    pub fn value(&self, x1: f64, xn: f64, t: f64) -> f64 {
        self.x1.value(x1) * self.xn.value(xn) * self.t.value(t)
    }

    /// Samples of `eta` at the grid nodes for snapshot `n`.
    pub fn snapshot(&self, n: usize) -> Vec<f64> {
        let et = self.t_samples[n];
        let mut out = Vec::with_capacity(self.x1_samples.len() * self.xn_samples.len());
        for en in &self.xn_samples {
            out.extend(self.x1_samples.iter().map(|e1| e1 * en * et));
        }
        out
    }

    /// `measured * ((q-1) R)^(|alpha| + 2 beta)` per derivative.
    pub fn normalized(&self) -> Vec<f64> {
        let w = self.width();
        self.bounds
            .iter()
            .map(|b| b.measured * w.powi((b.alpha[0] + b.alpha[1] + 2 * b.beta) as i32))
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

fn max_abs<F: Fn(f64) -> f64>(xs: &[f64], f: F) -> f64 {
    xs.iter().fold(0.0f64, |m, &x| m.max(f(x).abs()))
}

/// Cutoff for `cyl` (radius `R`) and the enlarged cylinder of radius `q R`,
/// sampled on `grid` and at `times`, with its derivative maxima.
pub fn build_cutoff(grid: &StripGrid, times: &[f64], cyl: &ParabolicCylinder, q: f64) -> Result<CutoffFunction> {
    if !(q > 1.0 && q < 3.0) {
        return Err(Error::invalid(format!("q must lie in (1, 3) (got {q})")));
    }
    if !(cyl.r > 0.0) {
        return Err(Error::invalid("cutoff radius must be positive"));
    }
    if cylinder_mask(grid, &cyl.scaled(q), times).clipped {
        return Err(Error::ClippedCylinder);
    }
    let r = cyl.r;
    let w = (q - 1.0) * r;
    let x1 = Plateau {
        center: cyl.x1c,
        inner: r,
        width: w,
        period: Some(grid.lx()),
    };
    let xn = Plateau {
        center: cyl.xnc,
        inner: r,
        width: w,
        period: None,
    };
    let t = Plateau {
        center: cyl.tc,
        inner: r * r,
        width: w * w,
        period: None,
    };
    let xs1 = grid.x1_nodes();
    let xsn = grid.normal_nodes().to_vec();
    let m1 = [
        max_abs(&xs1, |x| x1.value(x)),
        max_abs(&xs1, |x| x1.d1(x)),
        max_abs(&xs1, |x| x1.d2(x)),
    ];
    let mn = [
        max_abs(&xsn, |x| xn.value(x)),
        max_abs(&xsn, |x| xn.d1(x)),
        max_abs(&xsn, |x| xn.d2(x)),
    ];
    let mt = [max_abs(times, |s| t.value(s)), max_abs(times, |s| t.d1(s))];
    let spec: [([u8; 2], u8, f64); 7] = [
        ([0, 0], 0, 1.0),
        ([1, 0], 0, STEP_D1_MAX),
        ([0, 1], 0, STEP_D1_MAX),
        ([2, 0], 0, STEP_D2_MAX),
        ([0, 2], 0, STEP_D2_MAX),
        ([1, 1], 0, STEP_D1_MAX * STEP_D1_MAX),
        ([0, 0], 1, STEP_D1_MAX),
    ];
    let bounds = spec
        .iter()
        .map(|&(alpha, beta, c)| {
            let measured = m1[alpha[0] as usize] * mn[alpha[1] as usize] * mt[beta as usize];
            let bound = c / w.powi((alpha[0] + alpha[1] + 2 * beta) as i32);
            DerivativeBound {
                alpha,
                beta,
                measured,
                bound,
                pass: measured <= bound * (1.0 + 1e-12),
            }
        })
        .collect();
    Ok(CutoffFunction {
        cylinder: *cyl,
        q,
        x1,
        xn,
        t,
        x1_samples: xs1.iter().map(|&x| x1.value(x)).collect(),
        xn_samples: xsn.iter().map(|&x| xn.value(x)).collect(),
        t_samples: times.iter().map(|&s| t.value(s)).collect(),
        bounds,
    })
}
