use num_complex::Complex64;
use serde::Serialize;

use super::report::{EstimateReport, Metric, Table};
use super::weighted::fornberg_weights;
use crate::error::{Error, Result};
use crate::grid::{cylinder_mask, ParabolicCylinder, StripGrid};
use crate::operator::{OperatorParams, TangentialFft};
use crate::series::FieldSeries;

/// Denominators below this are reported as undefined.
pub const UNDEFINED_BELOW: f64 = 1e-30;

/// `D_{x1}^order` of a field, spectrally (odd orders drop the Nyquist mode).
pub fn tangential_derivative(grid: &StripGrid, fft: &TangentialFft, values: &[f64], order: u32) -> Vec<f64> {
    if order == 0 {
        return values.to_vec();
    }
    let mx = grid.mx();
    let mut out = Vec::with_capacity(values.len());
    for row in values.chunks(mx) {
        let mut spec = fft.forward_row(row);
        for (m, c) in spec.iter_mut().enumerate() {
            let k = if m <= mx / 2 { m as f64 } else { m as f64 - mx as f64 };
            if m == mx / 2 && order % 2 == 1 {
                *c = Complex64::default();
                continue;
            }
            let ik = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k / grid.lx());
            *c *= ik.powu(order);
        }
        out.extend(fft.inverse_row(&spec));
    }
    out
}

/// `D_{x_N}` by three-point differences (one-sided at the ends).
pub fn normal_derivative(grid: &StripGrid, values: &[f64]) -> Vec<f64> {
    let (mx, j) = (grid.mx(), grid.j());
    let x = grid.normal_nodes();
    let mut out = vec![0.0; values.len()];
    for k in 0..=j {
        let start = k.saturating_sub(1).min(j - 2);
        let w = fornberg_weights(x[k], &x[start..start + 3], 1);
        for i in 0..mx {
            out[k * mx + i] = (0..3).map(|p| w[1][p] * values[(start + p) * mx + i]).sum();
        }
    }
    out
}

/// Repeated centred differences in time (one-sided at the ends).
fn time_derivatives(times: &[f64], fields: Vec<Vec<f64>>, order: u32) -> Result<Vec<Vec<f64>>> {
    let mut cur = fields;
    for _ in 0..order {
        let n = cur.len();
        if n < 2 {
            return Err(Error::Contract("time derivative needs two snapshots".into()));
        }
        let diff = |a: usize, b: usize| -> Vec<f64> {
            let dt = times[b] - times[a];
            cur[b].iter().zip(&cur[a]).map(|(x, y)| (x - y) / dt).collect()
        };
        cur = (0..n)
            .map(|k| match k {
                0 => diff(0, 1),
                k if k == n - 1 => diff(n - 2, n - 1),
                k => diff(k - 1, k + 1),
            })
            .collect();
    }
    Ok(cur)
}

fn squares(fields: &[Vec<f64>]) -> Vec<Vec<f64>> {
    fields.iter().map(|f| f.iter().map(|v| v * v).collect()).collect()
}

fn integrate(grid: &StripGrid, times: &[f64], cyl: &ParabolicCylinder, fields: &[Vec<f64>]) -> Result<f64> {
    let mask = cylinder_mask(grid, cyl, times);
    if mask.is_empty() {
        return Err(Error::DegenerateCylinder);
    }
    Ok(mask.integrate(grid, fields))
}

fn unclipped(grid: &StripGrid, times: &[f64], cyl: &ParabolicCylinder) -> Result<()> {
    if cylinder_mask(grid, cyl, times).clipped {
        Err(Error::ClippedCylinder)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaccioppoliRow {
    pub center: [f64; 3],
    pub r: f64,
    pub q: f64,
    /// `int_{Q_qR} u^2`
    pub denominator: f64,
    /// `R^2 int_{Q_R} |grad u|^2 / int_{Q_qR} u^2`
    pub rho1: Option<f64>,
    pub rho1_tangential: Option<f64>,
    pub rho1_normal: Option<f64>,
    /// `R^4 int_{Q_R} u_t^2 / int_{Q_qR} u^2`
    pub rho2: Option<f64>,
}

impl CaccioppoliRow {
    pub fn undefined(&self) -> bool {
        self.rho1.is_none()
    }
}

/// Fields shared by every cylinder of one series.
struct Derived {
    times: Vec<f64>,
    u2: Vec<Vec<f64>>,
    d1_2: Vec<Vec<f64>>,
    dn_2: Vec<Vec<f64>>,
    ut_2: Vec<Vec<f64>>,
}

fn derive(series: &FieldSeries, params: &OperatorParams) -> Result<Derived> {
    let grid = &params.grid;
    let fft = TangentialFft::new(grid.mx());
    let fields: Vec<Vec<f64>> = series.snapshots().iter().map(|s| s.values.clone()).collect();
    let times = series.times();
    let d1: Vec<Vec<f64>> = params
        .exec
        .map(fields.len(), |n| tangential_derivative(grid, &fft, &fields[n], 1));
    let dn: Vec<Vec<f64>> = params.exec.map(fields.len(), |n| normal_derivative(grid, &fields[n]));
    let ut = time_derivatives(&times, fields.clone(), 1)?;
    Ok(Derived {
        u2: squares(&fields),
        d1_2: squares(&d1),
        dn_2: squares(&dn),
        ut_2: squares(&ut),
        times,
    })
}

/// One row per `(center, R)`; every `Q_qR` must be unclipped.
pub fn caccioppoli_rows(
    series: &FieldSeries,
    params: &OperatorParams,
    centers: &[[f64; 3]],
    radii: &[f64],
    q: f64,
) -> Result<Vec<CaccioppoliRow>> {
    if !(q > 1.0) {
        return Err(Error::invalid(format!("q must exceed 1 (got {q})")));
    }
    let grid = &params.grid;
    let times = series.times();
    let cyls: Vec<ParabolicCylinder> = centers
        .iter()
        .flat_map(|c| radii.iter().map(move |&r| ParabolicCylinder::new(c[0], c[1], c[2], r)))
        .collect();
    for c in &cyls {
        unclipped(grid, &times, &c.scaled(q))?;
    }
    let d = derive(series, params)?;
    let rows = params.exec.map(cyls.len(), |k| -> Result<CaccioppoliRow> {
        let cyl = &cyls[k];
        let den = integrate(grid, &d.times, &cyl.scaled(q), &d.u2)?;
        let ratio = |fields: &[Vec<f64>], power: i32| -> Result<Option<f64>> {
            if den < UNDEFINED_BELOW {
                return Ok(None);
            }
            Ok(Some(cyl.r.powi(power) * integrate(grid, &d.times, cyl, fields)? / den))
        };
        let tan = ratio(&d.d1_2, 2)?;
        let nor = ratio(&d.dn_2, 2)?;
        Ok(CaccioppoliRow {
            center: [cyl.x1c, cyl.xnc, cyl.tc],
            r: cyl.r,
            q,
            denominator: den,
            rho1: tan.zip(nor).map(|(a, b)| a + b),
            rho1_tangential: tan,
            rho1_normal: nor,
            rho2: ratio(&d.ut_2, 4)?,
        })
    });
    rows.into_iter().collect()
}

pub fn caccioppoli_table(rows: &[CaccioppoliRow]) -> Table {
    let mut t = Table::new(
        "caccioppoli",
        &[
            "x1c",
            "xnc",
            "tc",
            "R",
            "q",
            "denominator",
            "rho1",
            "rho1_tangential",
            "rho1_normal",
            "rho2",
        ],
    );
    for r in rows {
        t.push(vec![
            Some(r.center[0]),
            Some(r.center[1]),
            Some(r.center[2]),
            Some(r.r),
            Some(r.q),
            Some(r.denominator),
            r.rho1,
            r.rho1_tangential,
            r.rho1_normal,
            r.rho2,
        ]);
    }
    t
}

/// Table plus one finiteness metric per ratio (undefined rows are noted, not failed).
pub fn caccioppoli_report(
    series: &FieldSeries,
    params: &OperatorParams,
    centers: &[[f64; 3]],
    radii: &[f64],
    q: f64,
) -> Result<EstimateReport> {
    let rows = caccioppoli_rows(series, params, centers, radii, q)?;
    let mut rep = EstimateReport::default();
    for (k, row) in rows.iter().enumerate() {
        for (name, v) in [("rho1", row.rho1), ("rho2", row.rho2)] {
            let key = format!("caccioppoli.{name}.{k}.R{}", row.r);
            let m = match v {
                Some(x) => Metric {
                    value: Some(x),
                    bound: None,
                    pass: x.is_finite(),
                    note: None,
                },
                None => Metric::info(None).with_note("undefined: vanishing denominator"),
            };
            rep.insert(key, m);
        }
    }
    rep.tables.push(caccioppoli_table(&rows));
    Ok(rep)
}

/// Largest relative change of each defined ratio between two runs of the
/// same rows (e.g. coarse and refined grids). `None` if no ratio is defined.
pub fn refinement_change(coarse: &[CaccioppoliRow], fine: &[CaccioppoliRow]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for (a, b) in coarse.iter().zip(fine) {
        for (x, y) in [(a.rho1, b.rho1), (a.rho2, b.rho2)] {
            if let (Some(x), Some(y)) = (x, y) {
                let c = (y - x).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
                worst = Some(worst.map_or(c, |w: f64| w.max(c)));
            }
        }
    }
    worst
}

/// `R^(2 alpha + 4 beta) int_{Q_R} |D_{x1}^alpha D_t^beta u|^2 / int_{Q_{q^k R}} u^2`
/// with `k = max(alpha + beta, 1)`.
pub fn higher_derivative_ratios(
    series: &FieldSeries,
    params: &OperatorParams,
    alpha: u32,
    beta_t: u32,
    cyl: &ParabolicCylinder,
    q: f64,
) -> Result<Option<f64>> {
    let grid = &params.grid;
    let times = series.times();
    let outer = cyl.scaled(q.powi((alpha + beta_t).max(1) as i32));
    unclipped(grid, &times, &outer)?;
    let fields: Vec<Vec<f64>> = series.snapshots().iter().map(|s| s.values.clone()).collect();
    let den = integrate(grid, &times, &outer, &squares(&fields))?;
    if den < UNDEFINED_BELOW {
        return Ok(None);
    }
    let fft = TangentialFft::new(grid.mx());
    let dt = time_derivatives(&times, fields, beta_t)?;
    let d: Vec<Vec<f64>> = dt.iter().map(|f| tangential_derivative(grid, &fft, f, alpha)).collect();
    let num = integrate(grid, &times, cyl, &squares(&d))?;
    Ok(Some(cyl.r.powi((2 * alpha + 4 * beta_t) as i32) * num / den))
}
