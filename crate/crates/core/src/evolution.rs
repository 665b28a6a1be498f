//! Theta-scheme time stepping and steady solves, mode by mode, plus
//! manufactured solutions with exactly computed forcing.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::banded::BandedLu;
use crate::calculus::{admissible, apply_lbeta, differentiate, Rational, TermSum};
use crate::error::{Error, Result};
use crate::grid::StripGrid;
use crate::operator::{assemble_all, mirror_modes, ModeOperator, OperatorParams, OuterBc, TangentialFft};
use crate::series::{FieldSeries, FieldSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchemeConfig {
    pub theta: f64,
    pub dt: f64,
    pub t_end: f64,
    pub save_every: usize,
}

impl SchemeConfig {
    pub fn new(theta: f64, dt: f64, t_end: f64, save_every: usize) -> Result<Self> {
        let s = SchemeConfig {
            theta,
            dt,
            t_end,
            save_every,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn backward_euler(dt: f64, t_end: f64, save_every: usize) -> Result<Self> {
        Self::new(1.0, dt, t_end, save_every)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(Error::invalid(format!(
                "theta must lie in [1/2, 1] (got {})",
                self.theta
            )));
        }
        if !(self.dt > 0.0 && self.t_end > 0.0) || !self.dt.is_finite() || !self.t_end.is_finite() {
            return Err(Error::invalid("dt and T must be positive"));
        }
        if self.dt > self.t_end * (1.0 + 1e-12) {
            return Err(Error::invalid(format!("dt = {} exceeds T = {}", self.dt, self.t_end)));
        }
        let n = self.steps_unchecked();
        if ((n as f64) * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            return Err(Error::invalid(format!(
                "T = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.save_every == 0 || n % self.save_every != 0 {
            return Err(Error::invalid(format!(
                "save_every = {} must be positive and divide the {n} steps",
                self.save_every
            )));
        }
        Ok(())
    }

    fn steps_unchecked(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn steps(&self) -> usize {
        self.steps_unchecked()
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }
}

/// Boundary data at one time: wall value `g`, outer value and outer slope,
/// one entry per tangential node.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub g: Vec<f64>,
    pub outer: Vec<f64>,
    pub slope: Vec<f64>,
}

impl Boundary {
    pub fn zero(mx: usize) -> Self {
        Boundary {
            g: vec![0.0; mx],
            outer: vec![0.0; mx],
            slope: vec![0.0; mx],
        }
    }
}

/// Forcing and boundary data of an evolution problem.
pub trait ProblemData: Sync {
    /// Forcing at every node (only interior rows are used).
    fn forcing(&self, grid: &StripGrid, t: f64) -> Vec<f64>;
    fn dirichlet(&self, grid: &StripGrid, t: f64) -> Vec<f64>;
    fn outer_value(&self, grid: &StripGrid, t: f64) -> Vec<f64>;
    fn outer_slope(&self, grid: &StripGrid, t: f64) -> Vec<f64>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroData;

impl ProblemData for ZeroData {
    fn forcing(&self, grid: &StripGrid, _t: f64) -> Vec<f64> {
        vec![0.0; grid.len()]
    }
    fn dirichlet(&self, grid: &StripGrid, _t: f64) -> Vec<f64> {
        vec![0.0; grid.mx()]
    }
    fn outer_value(&self, grid: &StripGrid, _t: f64) -> Vec<f64> {
        vec![0.0; grid.mx()]
    }
    fn outer_slope(&self, grid: &StripGrid, _t: f64) -> Vec<f64> {
        vec![0.0; grid.mx()]
    }
}

/// Spatially constant forcing `sum_k c_k t^k`, zero boundary data.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialForcing {
    pub coeffs: Vec<f64>,
}

impl PolynomialForcing {
    pub fn value(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

impl ProblemData for PolynomialForcing {
    fn forcing(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        vec![self.value(t); grid.len()]
    }
    fn dirichlet(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        ZeroData.dirichlet(grid, t)
    }
    fn outer_value(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        ZeroData.outer_value(grid, t)
    }
    fn outer_slope(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        ZeroData.outer_slope(grid, t)
    }
}

/// Boundary data at `t`, honouring the outer closure of `params`.
pub fn boundary_at(params: &OperatorParams, data: &dyn ProblemData, t: f64) -> Boundary {
    let grid = &params.grid;
    let mut b = Boundary {
        g: data.dirichlet(grid, t),
        outer: data.outer_value(grid, t),
        slope: data.outer_slope(grid, t),
    };
    if params.outer_bc == OuterBc::ClampedZero {
        b.outer.iter_mut().for_each(|v| *v = 0.0);
        b.slope.iter_mut().for_each(|v| *v = 0.0);
    }
    b
}

/// Forcing and boundary data of one time level in spectral form.
#[derive(Clone, Debug)]
pub struct SpectralLevel {
    /// `f[m]` over interior rows, modes `0..=Mx/2`.
    f: Vec<Vec<Complex64>>,
    g: Vec<Complex64>,
    outer: Vec<Complex64>,
    slope: Vec<Complex64>,
    boundary: Boundary,
}

/// Theta-scheme stepper with per-mode factorizations of `I + theta dt L_m`.
#[derive(Debug)]
pub struct Stepper {
    params: OperatorParams,
    scheme: SchemeConfig,
    ops: Vec<ModeOperator>,
    lus: Vec<BandedLu>,
    fft: TangentialFft,
}

impl Stepper {
    pub fn new(params: &OperatorParams, scheme: &SchemeConfig) -> Result<Self> {
        scheme.validate()?;
        let ops = assemble_all(params);
        let shift = scheme.theta * scheme.dt;
        let lus = params
            .exec
            .map(ops.len(), |m| ops[m].factor_shifted(1.0, shift))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Stepper {
            params: params.clone(),
            scheme: *scheme,
            ops,
            lus,
            fft: TangentialFft::new(params.grid.mx()),
        })
    }

    pub fn params(&self) -> &OperatorParams {
        &self.params
    }

    pub fn scheme(&self) -> &SchemeConfig {
        &self.scheme
    }

    pub fn level(&self, forcing: &[f64], boundary: Boundary) -> SpectralLevel {
        let grid = &self.params.grid;
        let (mx, j) = (grid.mx(), grid.j());
        let interior = &forcing[mx..j * mx];
        let mut f = self.fft.forward(interior, j - 1, self.params.exec);
        f.truncate(mx / 2 + 1);
        let half = |v: &[f64]| {
            let mut s = self.fft.forward_row(v);
            s.truncate(mx / 2 + 1);
            s
        };
        SpectralLevel {
            f,
            g: half(&boundary.g),
            outer: half(&boundary.outer),
            slope: half(&boundary.slope),
            boundary,
        }
    }

    pub fn level_at(&self, data: &dyn ProblemData, t: f64) -> SpectralLevel {
        let forcing = data.forcing(&self.params.grid, t);
        self.level(&forcing, boundary_at(&self.params, data, t))
    }

    /// One step from `u_n` (at level `now`) to the level `next`.
    pub fn step(&self, u_n: &[f64], now: &SpectralLevel, next: &SpectralLevel) -> Vec<f64> {
        let grid = &self.params.grid;
        let (mx, j) = (grid.mx(), grid.j());
        let (theta, dt) = (self.scheme.theta, self.scheme.dt);
        let spec = self.fft.forward(&u_n[mx..j * mx], j - 1, self.params.exec);
        let zero = vec![Complex64::default(); j - 1];
        let mut modes: Vec<Vec<Complex64>> = self.params.exec.map(mx / 2 + 1, |m| {
            let op = &self.ops[m];
            let u = &spec[m];
            let mut rhs: Vec<Complex64> = u.clone();
            if theta < 1.0 {
                let lu = op.apply(u, now.g[m], now.outer[m], now.slope[m]);
                let c = (1.0 - theta) * dt;
                for (r, (l, f)) in rhs.iter_mut().zip(lu.iter().zip(&now.f[m])) {
                    *r = *r - *l * c + *f * c;
                }
            }
            let bnext = op.apply(&zero, next.g[m], next.outer[m], next.slope[m]);
            let c = theta * dt;
            for (r, (b, f)) in rhs.iter_mut().zip(bnext.iter().zip(&next.f[m])) {
                *r = *r - *b * c + *f * c;
            }
            self.lus[m].solve_in_place(&mut rhs);
            rhs
        });
        modes.resize(mx, Vec::new());
        mirror_modes(&mut modes);
        let interior = self.fft.inverse(&modes, self.params.exec);
        let mut out = Vec::with_capacity(grid.len());
        out.extend_from_slice(&next.boundary.g);
        // -0.0 + 0.0 == +0.0; every other value is unchanged
        out.extend(interior.iter().map(|v| v + 0.0));
        out.extend_from_slice(&next.boundary.outer);
        out
    }
}

/// Runs the scheme from `u0` at `t = 0` and returns the saved series
/// (including `t = 0`).
pub fn evolve(
    params: &OperatorParams,
    scheme: &SchemeConfig,
    data: &dyn ProblemData,
    u0: &FieldSnapshot,
) -> Result<FieldSeries> {
    let stepper = Stepper::new(params, scheme)?;
    evolve_with(&stepper, data, u0)
}

pub fn evolve_with(stepper: &Stepper, data: &dyn ProblemData, u0: &FieldSnapshot) -> Result<FieldSeries> {
    let grid = &stepper.params.grid;
    let scheme = stepper.scheme;
    if u0.values.len() != grid.len() {
        return Err(Error::Contract("initial field does not match the grid".into()));
    }
    let g0 = data.dirichlet(grid, 0.0);
    let scale = 1.0 + g0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if u0
        .row(grid, 0)
        .iter()
        .zip(&g0)
        .any(|(a, b)| (a - b).abs() > 1e-12 * scale)
    {
        return Err(Error::Contract(
            "initial field violates the wall condition at t = 0".into(),
        ));
    }
    let mut series = FieldSeries::new();
    series.push(FieldSnapshot::new(0.0, u0.values.clone()))?;
    let mut u = u0.values.clone();
    let mut now = stepper.level_at(data, 0.0);
    for n in 1..=scheme.steps() {
        let t = scheme.time(n);
        let next = stepper.level_at(data, t);
        u = stepper.step(&u, &now, &next);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { time: t });
        }
        if n % scheme.save_every == 0 {
            series.push(FieldSnapshot::new(t, u.clone()))?;
        }
        now = next;
    }
    Ok(series)
}

/// `A u = f` with boundary data.
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyProblem {
    pub forcing: Vec<f64>,
    pub boundary: Boundary,
}

impl SteadyProblem {
    pub fn from_data(params: &OperatorParams, data: &dyn ProblemData, t: f64) -> Self {
        SteadyProblem {
            forcing: data.forcing(&params.grid, t),
            boundary: boundary_at(params, data, t),
        }
    }
}

pub fn solve_steady(params: &OperatorParams, problem: &SteadyProblem) -> Result<FieldSnapshot> {
    let grid = &params.grid;
    let (mx, j) = (grid.mx(), grid.j());
    if problem.forcing.len() != grid.len() || problem.forcing.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("forcing must be finite at every node".into()));
    }
    let ops = assemble_all(params);
    let fft = TangentialFft::new(mx);
    let f = fft.forward(&problem.forcing[mx..j * mx], j - 1, params.exec);
    let b = &problem.boundary;
    let (g, outer, slope) = (
        fft.forward_row(&b.g),
        fft.forward_row(&b.outer),
        fft.forward_row(&b.slope),
    );
    let zero = vec![Complex64::default(); j - 1];
    let solved: Vec<Result<Vec<Complex64>>> = params.exec.map(mx / 2 + 1, |m| {
        let op = &ops[m];
        let lu = op.factor_shifted(0.0, 1.0)?;
        let bc = op.apply(&zero, g[m], outer[m], slope[m]);
        let mut rhs: Vec<Complex64> = f[m].iter().zip(&bc).map(|(f, b)| f - b).collect();
        lu.solve_in_place(&mut rhs);
        Ok(rhs)
    });
    let mut modes = solved.into_iter().collect::<Result<Vec<_>>>()?;
    modes.resize(mx, Vec::new());
    mirror_modes(&mut modes);
    let interior = fft.inverse(&modes, params.exec);
    let mut values = Vec::with_capacity(grid.len());
    values.extend_from_slice(&b.g);
    values.extend_from_slice(&interior);
    values.extend_from_slice(&b.outer);
    Ok(FieldSnapshot::new(0.0, values))
}

/// Tangential factor of a manufactured solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tangential {
    One,
    Cos(u32),
    Sin(u32),
}

impl Tangential {
    pub fn wavenumber(&self, lx: f64) -> f64 {
        match self {
            Tangential::One => 0.0,
            Tangential::Cos(k) | Tangential::Sin(k) => 2.0 * std::f64::consts::PI * *k as f64 / lx,
        }
    }

    pub fn value(&self, x1: f64, lx: f64) -> f64 {
        let kappa = self.wavenumber(lx);
        match self {
            Tangential::One => 1.0,
            Tangential::Cos(_) => (kappa * x1).cos(),
            Tangential::Sin(_) => (kappa * x1).sin(),
        }
    }
}

/// `u = T(t) S(x1) N(x_N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManufacturedSolution {
    /// Coefficients of `T` in increasing powers of `t`.
    #[serde(serialize_with = "serialize_rationals")]
    pub time: Vec<Rational>,
    pub tangential: Tangential,
    pub normal: TermSum,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&crate::calculus::format_rational(r))?;
    }
    seq.end()
}

fn poly_value(c: &[Rational], t: f64) -> f64 {
    c.iter()
        .rev()
        .fold(0.0, |acc, r| acc * t + r.to_f64().unwrap_or(f64::NAN))
}

fn poly_derivative(c: &[Rational]) -> Vec<Rational> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, r)| r * Rational::from_integer((k as i64).into()))
        .collect()
}

impl ManufacturedSolution {
    pub fn new(time: Vec<Rational>, tangential: Tangential, normal: TermSum) -> Result<Self> {
        for term in normal.terms() {
            if term.exponent.signum() <= 0 {
                return Err(Error::invalid(format!(
                    "normal factor term {term} must have a positive exponent"
                )));
            }
            if !admissible(term) {
                return Err(Error::invalid(format!("normal factor term {term} is not admissible")));
            }
        }
        Ok(ManufacturedSolution {
            time,
            tangential,
            normal,
        })
    }

    pub fn time_value(&self, t: f64) -> f64 {
        poly_value(&self.time, t)
    }

    /// `u` at every node; the wall row is the trace `T S N(0+) = 0`.
    pub fn exact(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        let tv = self.time_value(t);
        grid.sample(|x1, xn| {
            if xn > 0.0 {
                tv * self.tangential.value(x1, grid.lx()) * self.normal.evaluate(xn).unwrap_or(f64::NAN)
            } else {
                0.0
            }
        })
    }

    pub fn forcing(&self, beta: &Rational) -> ManufacturedForcing {
        manufactured_forcing(self, beta)
    }
}

/// `f = T' S N + T S (P0 + kappa^2 P1 + kappa^4 P2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManufacturedForcing {
    pub solution: ManufacturedSolution,
    #[serde(serialize_with = "serialize_rationals")]
    pub time_derivative: Vec<Rational>,
    /// `l_beta N`
    pub p0: TermSum,
    /// `-(x^2 N')' - x^2 N'' + beta N`
    pub p1: TermSum,
    /// `x^2 N`
    pub p2: TermSum,
    pub beta: f64,
}

pub fn manufactured_forcing(ms: &ManufacturedSolution, beta: &Rational) -> ManufacturedForcing {
    let b = crate::calculus::Beta::new(beta.clone()).expect("beta validated by caller");
    let n = &ms.normal;
    let n1 = differentiate(n);
    let n2 = differentiate(&n1);
    let two = crate::calculus::SurdValue::int(2);
    let x2n1 = n1.shift(&two);
    let p1 = differentiate(&x2n1)
        .add(&n2.shift(&two))
        .neg()
        .add(&n.scale_rational(beta));
    ManufacturedForcing {
        solution: ms.clone(),
        time_derivative: poly_derivative(&ms.time),
        p0: apply_lbeta(&b, n),
        p1,
        p2: n.shift(&two),
        beta: beta.to_f64().unwrap_or(f64::NAN),
    }
}

impl ManufacturedForcing {
    /// Closed-form `f(x1, x_N, t)` for `x_N > 0`.
    pub fn value(&self, x1: f64, xn: f64, t: f64, lx: f64) -> f64 {
        let ms = &self.solution;
        let k2 = ms.tangential.wavenumber(lx).powi(2);
        let s = ms.tangential.value(x1, lx);
        let ev = |p: &TermSum| p.evaluate(xn).unwrap_or(f64::NAN);
        let a = ev(&self.p0) + k2 * ev(&self.p1) + k2 * k2 * ev(&self.p2);
        poly_value(&self.time_derivative, t) * s * ev(&ms.normal) + ms.time_value(t) * s * a
    }
}

impl ProblemData for ManufacturedForcing {
    fn forcing(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        grid.sample(|x1, xn| {
            if xn > 0.0 {
                self.value(x1, xn, t, grid.lx())
            } else {
                0.0
            }
        })
    }

    fn dirichlet(&self, grid: &StripGrid, _t: f64) -> Vec<f64> {
        vec![0.0; grid.mx()]
    }

    fn outer_value(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        let ms = &self.solution;
        let c = ms.time_value(t) * ms.normal.evaluate(grid.xmax()).unwrap_or(f64::NAN);
        grid.x1_nodes()
            .iter()
            .map(|&x| c * ms.tangential.value(x, grid.lx()))
            .collect()
    }

    fn outer_slope(&self, grid: &StripGrid, t: f64) -> Vec<f64> {
        let ms = &self.solution;
        let d = differentiate(&ms.normal).evaluate(grid.xmax()).unwrap_or(f64::NAN);
        let c = ms.time_value(t) * d;
        grid.x1_nodes()
            .iter()
            .map(|&x| c * ms.tangential.value(x, grid.lx()))
            .collect()
    }
}
