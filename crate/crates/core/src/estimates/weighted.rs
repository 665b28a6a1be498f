use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::StripGrid;
use crate::series::FieldSeries;

/// Finite-difference weights for derivatives `0..=m` at `z` on `nodes`
/// (Fornberg's recursion). `w[k][i]` is the weight of node `i` for order `k`.
pub fn fornberg_weights(z: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Nodes used for near-wall derivatives.
pub const WEIGHTED_NODES: usize = 8;
const STENCIL: usize = 7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedClass {
    /// `sup x^2 |D^4 u|` over the first interior nodes.
    pub sup_x2_d4: f64,
    /// `sup x |D^3 u|` over the first interior nodes.
    pub sup_x_d3: f64,
}

/// Weighted sups of normal derivatives on interior nodes `1..=8`, over
/// every snapshot and tangential position.
pub fn weighted_class_report(series: &FieldSeries, grid: &StripGrid) -> Result<WeightedClass> {
    // the last stencil reaches node 8 - 3 + 6
    if grid.j() < WEIGHTED_NODES - STENCIL / 2 + STENCIL - 1 {
        return Err(Error::invalid(format!(
            "weighted class needs at least {WEIGHTED_NODES} interior nodes (J = {})",
            grid.j()
        )));
    }
    let x = grid.normal_nodes();
    let stencils: Vec<(usize, Vec<Vec<f64>>)> = (1..=WEIGHTED_NODES)
        .map(|k| {
            let start = k.saturating_sub(STENCIL / 2);
            (start, fornberg_weights(x[k], &x[start..start + STENCIL], 4))
        })
        .collect();
    let mx = grid.mx();
    let (mut s4, mut s3) = (0.0f64, 0.0f64);
    for snap in series.snapshots() {
        for i in 0..mx {
            for (k, (start, w)) in (1..=WEIGHTED_NODES).zip(&stencils) {
                let d = |order: usize| -> f64 {
                    (0..STENCIL)
                        .map(|p| w[order][p] * snap.values[(start + p) * mx + i])
                        .sum()
                };
                s4 = s4.max(x[k] * x[k] * d(4).abs());
                s3 = s3.max(x[k] * d(3).abs());
            }
        }
    }
    Ok(WeightedClass {
        sup_x2_d4: s4,
        sup_x_d3: s3,
    })
}

/// Successive ratios of a refinement sequence of sups.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub values: Vec<f64>,
    pub growth: Vec<f64>,
    /// No successive ratio exceeds `limit`.
    pub bounded: bool,
}

pub fn trend(values: &[f64], limit: f64) -> Trend {
    let growth: Vec<f64> = values
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 {
                w[1] / w[0]
            } else if w[1] > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        })
        .collect();
    Trend {
        values: values.to_vec(),
        bounded: values.iter().all(|v| v.is_finite()) && growth.iter().all(|&g| g <= limit),
        growth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::FieldSnapshot;

    #[test]
    fn fornberg_reproduces_polynomials() {
        let nodes = [0.0, 0.1, 0.25, 0.45, 0.7, 1.0, 1.4];
        let z = 0.3;
        let w = fornberg_weights(z, &nodes, 4);
        // oracle: exact derivatives of x^5
        let f: Vec<f64> = nodes.iter().map(|x| x.powi(5)).collect();
        let exact = [z.powi(5), 5.0 * z.powi(4), 20.0 * z.powi(3), 60.0 * z * z, 120.0 * z];
        for (k, e) in exact.iter().enumerate() {
            let d: f64 = w[k].iter().zip(&f).map(|(a, b)| a * b).sum();
            assert!((d - e).abs() < 1e-9 * (1.0 + e.abs()), "order {k}: {d} vs {e}");
        }
    }

    fn series_of(grid: &StripGrid, f: impl Fn(f64) -> f64) -> FieldSeries {
        let mut s = FieldSeries::new();
        s.push(FieldSnapshot::new(
            0.0,
            grid.sample(|_, x| if x > 0.0 { f(x) } else { 0.0 }),
        ))
        .unwrap();
        s
    }

    #[test]
    fn quadratic_has_no_fourth_derivative() {
        let g = StripGrid::new(1.0, 8, 1.0, 64, 2.0).unwrap();
        let r = weighted_class_report(&series_of(&g, |x| x * x), &g).unwrap();
        assert!(r.sup_x2_d4 <= 1e-8, "{}", r.sup_x2_d4);
    }

    #[test]
    fn admissible_vs_inadmissible_trends() {
        let mut good = vec![];
        let mut bad = vec![];
        for j in [32, 64, 128] {
            let g = StripGrid::new(1.0, 8, 1.0, j, 2.0).unwrap();
            good.push(
                weighted_class_report(&series_of(&g, |x| x.powf(2.5)), &g)
                    .unwrap()
                    .sup_x2_d4,
            );
            bad.push(
                weighted_class_report(&series_of(&g, |x| x * x.ln()), &g)
                    .unwrap()
                    .sup_x_d3,
            );
        }
        assert!(trend(&good, 1.5).bounded, "{good:?}");
        let t = trend(&bad, 1.5);
        assert!(!t.bounded, "{bad:?}");
        // x |D^3 (x ln x)| = 1/x with x_1 ~ J^-2
        assert!(t.growth.iter().all(|&g| g > 3.0));
    }

    #[test]
    fn too_few_nodes() {
        let g = StripGrid::new(1.0, 8, 1.0, 8, 2.0).unwrap();
        assert!(weighted_class_report(&series_of(&g, |x| x), &g).is_err());
    }
}
