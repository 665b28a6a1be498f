//! Strip geometry: periodic tangential axis `x1 in [0, Lx)`, graded normal axis
//! `x_N in [0, Xmax]`, parabolic cylinders and local space-time quadrature.
//!
//! Field layout everywhere in the crate is row-major by normal index:
//! `values[j * mx + i]` is the value at `(x1_i, x_N,j)`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripGrid {
    lx: f64,
    mx: usize,
    xmax: f64,
    j: usize,
    gamma: f64,
    #[serde(skip)]
    nodes: Vec<f64>,
}

impl StripGrid {
    pub fn new(lx: f64, mx: usize, xmax: f64, j: usize, gamma: f64) -> Result<Self> {
        if !(lx > 0.0 && lx.is_finite()) || !(xmax > 0.0 && xmax.is_finite()) {
            return Err(Error::invalid(format!(
                "extents must be positive (Lx = {lx}, Xmax = {xmax})"
            )));
        }
        if mx % 2 != 0 || mx < 8 {
            return Err(Error::invalid(format!("Mx must be even and >= 8 (got {mx})")));
        }
        if j < 8 {
            return Err(Error::invalid(format!("J must be >= 8 (got {j})")));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be >= 1 (got {gamma})")));
        }
        let nodes = (0..=j)
            .map(|k| {
                if k == 0 {
                    0.0
                } else if k == j {
                    xmax
                } else {
                    xmax * (k as f64 / j as f64).powf(gamma)
                }
            })
            .collect();
        Ok(StripGrid {
            lx,
            mx,
            xmax,
            j,
            gamma,
            nodes,
        })
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    /// Number of normal cells; nodes are `0..=j`.
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.mx as f64
    }

    pub fn x1(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn x1_nodes(&self) -> Vec<f64> {
        (0..self.mx).map(|i| self.x1(i)).collect()
    }

    pub fn normal_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn xn(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Number of nodes in a field.
    pub fn len(&self) -> usize {
        self.mx * (self.j + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.mx + i
    }

    /// `x_{k+1} - x_k` for `k = 0..J-1`.
    pub fn spacing(&self, k: usize) -> f64 {
        self.nodes[k + 1] - self.nodes[k]
    }

    /// Face positions of the normal finite-volume cells. Face `k` sits between
    /// nodes `k` and `k+1`; face 0 lies on the wall `x_N = 0`.
    pub fn face(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            0.5 * (self.nodes[k] + self.nodes[k + 1])
        }
    }

    /// Control-volume length of node `j` (`0` for the wall node, half cell
    /// at the outer node).
    pub fn volume(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else if j == self.j {
            self.nodes[j] - self.face(j - 1)
        } else {
            self.face(j) - self.face(j - 1)
        }
    }

    /// Trapezoid weights on the normal nodes over `[0, Xmax]`.
    pub fn normal_trapezoid(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.j + 1];
        for k in 0..self.j {
            let h = self.spacing(k);
            w[k] += 0.5 * h;
            w[k + 1] += 0.5 * h;
        }
        w
    }

    /// Space weights for the whole strip box.
    pub fn quadrature(&self) -> QuadratureWeights {
        let wn = self.normal_trapezoid();
        let hx = self.hx();
        let mut space = Vec::with_capacity(self.len());
        for w in &wn {
            space.extend(std::iter::repeat(w * hx).take(self.mx));
        }
        QuadratureWeights {
            space,
            time: Vec::new(),
        }
    }

    /// Samples `f(x1, x_N)` at every node.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for j in 0..=self.j {
            let xn = self.nodes[j];
            for i in 0..self.mx {
                out.push(f(self.x1(i), xn));
            }
        }
        out
    }
}

/// Box `|x1 - x1c| < R`, `|x_N - xNc| < R` (intersected with `x_N > 0`)
/// times `(tc - R^2, tc + R^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParabolicCylinder {
    pub x1c: f64,
    pub xnc: f64,
    pub tc: f64,
    pub r: f64,
}

impl ParabolicCylinder {
    pub fn new(x1c: f64, xnc: f64, tc: f64, r: f64) -> Self {
        ParabolicCylinder { x1c, xnc, tc, r }
    }

    /// Same centre, radius `q R`.
    pub fn scaled(&self, q: f64) -> Self {
        ParabolicCylinder { r: self.r * q, ..*self }
    }

    pub fn x1_range(&self) -> (f64, f64) {
        (self.x1c - self.r, self.x1c + self.r)
    }

    pub fn xn_range(&self) -> (f64, f64) {
        ((self.xnc - self.r).max(0.0), self.xnc + self.r)
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.tc - self.r * self.r, self.tc + self.r * self.r)
    }

    pub fn contains(&self, x1: f64, xn: f64, t: f64) -> bool {
        let (a, b) = self.xn_range();
        let (ta, tb) = self.t_range();
        (x1 - self.x1c).abs() < self.r && xn > a && xn < b && t > ta && t < tb
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadratureWeights {
    /// Per-node space weights (layout `j * mx + i`).
    pub space: Vec<f64>,
    /// Per-snapshot time weights.
    pub time: Vec<f64>,
}

/// Tensor-product quadrature restricted to one cylinder. Weights integrate
/// the piecewise-linear interpolant exactly over the cylinder's intervals,
/// so the mask includes the bracketing nodes just outside the box.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMask {
    pub tangential: Vec<(usize, f64)>,
    pub normal: Vec<(usize, f64)>,
    pub time: Vec<(usize, f64)>,
    pub clipped: bool,
}

impl CylinderMask {
    pub fn count(&self) -> usize {
        self.tangential.len() * self.normal.len() * self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// All `(node index, snapshot index, weight)` triples.
    pub fn entries(&self, grid: &StripGrid) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.count());
        for &(n, wt) in &self.time {
            for &(j, wn) in &self.normal {
                for &(i, wi) in &self.tangential {
                    out.push((grid.index(i, j), n, wt * wn * wi));
                }
            }
        }
        out
    }

    /// Quadrature of a space-time field given as one slice per snapshot.
    pub fn integrate<S: AsRef<[f64]>>(&self, grid: &StripGrid, values: &[S]) -> f64 {
        let mut total = 0.0;
        for &(n, wt) in &self.time {
            let v = values[n].as_ref();
            let mut slab = 0.0;
            for &(j, wn) in &self.normal {
                let row = &v[j * grid.mx()..(j + 1) * grid.mx()];
                let line: f64 = self.tangential.iter().map(|&(i, wi)| wi * row[i]).sum();
                slab += wn * line;
            }
            total += wt * slab;
        }
        total
    }
}

/// Weights of the clipped hat functions on sorted nodes for `[a, b]`.
fn hat_weights(nodes: &[f64], a: f64, b: f64) -> Vec<(usize, f64)> {
    let mut acc: Vec<(usize, f64)> = Vec::new();
    let mut push = |k: usize, w: f64| {
        if w <= 0.0 {
            return;
        }
        match acc.last_mut() {
            Some(last) if last.0 == k => last.1 += w,
            _ => acc.push((k, w)),
        }
    };
    for k in 0..nodes.len().saturating_sub(1) {
        let (x0, x1) = (nodes[k], nodes[k + 1]);
        let lo = a.max(x0);
        let hi = b.min(x1);
        if hi <= lo {
            continue;
        }
        let h = x1 - x0;
        // integrals of (x1 - x)/h and (x - x0)/h over [lo, hi]
        let w0 = ((x1 - lo).powi(2) - (x1 - hi).powi(2)) / (2.0 * h);
        let w1 = ((hi - x0).powi(2) - (lo - x0).powi(2)) / (2.0 * h);
        push(k, w0);
        push(k + 1, w1);
    }
    acc
}

/// Periodic tangential hat weights for `[a, b]`.
fn periodic_weights(grid: &StripGrid, a: f64, b: f64) -> Vec<(usize, f64)> {
    let hx = grid.hx();
    let mx = grid.mx() as i64;
    let k0 = (a / hx).floor() as i64;
    let k1 = (b / hx).ceil() as i64;
    let nodes: Vec<f64> = (k0..=k1).map(|k| k as f64 * hx).collect();
    let mut w = vec![0.0; grid.mx()];
    for (off, wk) in hat_weights(&nodes, a, b) {
        let idx = (k0 + off as i64).rem_euclid(mx) as usize;
        w[idx] += wk;
    }
    w.into_iter().enumerate().filter(|&(_, v)| v > 0.0).collect()
}

/// Quadrature mask of `cyl` on `grid` with snapshots at `times`.
pub fn cylinder_mask(grid: &StripGrid, cyl: &ParabolicCylinder, times: &[f64]) -> CylinderMask {
    let tol = 1e-12;
    let (a1, b1) = cyl.x1_range();
    let (an, bn) = cyl.xn_range();
    let (ta, tb) = cyl.t_range();
    let mut clipped = b1 - a1 >= grid.lx() || bn > grid.xmax() * (1.0 + tol);
    match (times.first(), times.last()) {
        (Some(&t0), Some(&t1)) => {
            let span = (t1 - t0).abs().max(1.0);
            clipped |= ta < t0 - tol * span || tb > t1 + tol * span;
        }
        _ => clipped = true,
    }
    CylinderMask {
        tangential: if cyl.r > 0.0 {
            periodic_weights(grid, a1, b1)
        } else {
            Vec::new()
        },
        normal: hat_weights(grid.normal_nodes(), an, bn),
        time: hat_weights(times, ta, tb),
        clipped,
    }
}

/// `int int_{cyl} values dx dt`; `values[n]` is the field at `times[n]`.
pub fn integrate_cylinder<S: AsRef<[f64]>>(
    grid: &StripGrid,
    times: &[f64],
    cyl: &ParabolicCylinder,
    values: &[S],
) -> Result<f64> {
    let mask = cylinder_mask(grid, cyl, times);
    if mask.is_empty() {
        return Err(Error::DegenerateCylinder);
    }
    Ok(mask.integrate(grid, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn uniform_nodes() {
        let g = StripGrid::new(2.0 * PI, 16, 1.0, 8, 1.0).unwrap();
        for (k, x) in g.normal_nodes().iter().enumerate() {
            assert_relative_eq!(*x, k as f64 / 8.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn graded_first_node() {
        let g = StripGrid::new(2.0 * PI, 16, 1.0, 8, 2.0).unwrap();
        assert_eq!(g.xn(0), 0.0);
        assert_relative_eq!(g.xn(1), 1.0 / 64.0, epsilon = 1e-16);
        assert_eq!(g.xn(8), 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(StripGrid::new(1.0, 7, 1.0, 8, 1.0).is_err());
        assert!(StripGrid::new(1.0, 6, 1.0, 8, 1.0).is_err());
        assert!(StripGrid::new(-1.0, 8, 1.0, 8, 1.0).is_err());
        assert!(StripGrid::new(1.0, 8, 0.0, 8, 1.0).is_err());
        assert!(StripGrid::new(1.0, 8, 1.0, 4, 1.0).is_err());
        assert!(StripGrid::new(1.0, 8, 1.0, 8, 0.5).is_err());
    }

    #[test]
    fn volumes_partition_the_strip() {
        let g = StripGrid::new(1.0, 8, 3.0, 17, 2.5).unwrap();
        let total: f64 = (0..=g.j()).map(|j| g.volume(j)).sum();
        assert_relative_eq!(total, 3.0, epsilon = 1e-14);
        let q = g.quadrature();
        assert_relative_eq!(q.space.iter().sum::<f64>(), 3.0, epsilon = 1e-13);
    }

    fn times(n: usize, t_end: f64) -> Vec<f64> {
        (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
    }

    #[test]
    fn interior_cylinder_mask() {
        let g = StripGrid::new(4.0, 32, 2.0, 32, 1.0).unwrap();
        let ts = times(40, 2.0);
        let cyl = ParabolicCylinder::new(2.0, 0.5, 1.0, 0.25);
        let m = cylinder_mask(&g, &cyl, &ts);
        assert!(!m.clipped);
        assert_eq!(m.count(), m.tangential.len() * m.normal.len() * m.time.len());
        // interval of width 0.5 aligned to nodes on a 1/8 lattice: 5 nodes
        assert_eq!(m.tangential.len(), 5);
    }

    #[test]
    fn clipping_cases() {
        let g = StripGrid::new(4.0, 32, 1.0, 32, 1.0).unwrap();
        let ts = times(40, 2.0);
        assert!(cylinder_mask(&g, &ParabolicCylinder::new(2.0, 0.0, 1.0, 1.5), &ts).clipped);
        // two-sided window starting at the run start
        assert!(cylinder_mask(&g, &ParabolicCylinder::new(2.0, 0.0, 0.0, 0.25), &ts).clipped);
        assert!(!cylinder_mask(&g, &ParabolicCylinder::new(2.0, 0.0, 1.0, 0.25), &ts).clipped);
    }

    #[test]
    fn box_volume_and_linear_profile() {
        let g = StripGrid::new(4.0, 32, 2.0, 32, 2.0).unwrap();
        let ts = times(64, 2.0);
        let r = 0.5;
        let cyl = ParabolicCylinder::new(1.7, 0.0, 1.0, r);
        let ones = vec![vec![1.0; g.len()]; ts.len()];
        let vol = integrate_cylinder(&g, &ts, &cyl, &ones).unwrap();
        let exact = (2.0 * r) * r * (2.0 * r * r);
        assert!((vol - exact).abs() / exact < 0.02);
        assert_relative_eq!(vol, exact, max_relative = 1e-12);

        let zeros = vec![vec![0.0; g.len()]; ts.len()];
        assert_eq!(integrate_cylinder(&g, &ts, &cyl, &zeros).unwrap(), 0.0);

        let lin = vec![g.sample(|_, xn| xn); ts.len()];
        let v = integrate_cylinder(&g, &ts, &cyl, &lin).unwrap();
        assert_relative_eq!(v, 0.5 * r * r * (2.0 * r) * (2.0 * r * r), max_relative = 1e-12);
    }

    #[test]
    fn degenerate_cylinder_errors() {
        let g = StripGrid::new(4.0, 32, 2.0, 32, 2.0).unwrap();
        let ts = times(8, 1.0);
        let cyl = ParabolicCylinder::new(1.0, 0.5, 0.5, 0.0);
        let ones = vec![vec![1.0; g.len()]; ts.len()];
        assert!(matches!(
            integrate_cylinder(&g, &ts, &cyl, &ones),
            Err(Error::DegenerateCylinder)
        ));
    }

    #[test]
    fn periodic_wrap() {
        let g = StripGrid::new(1.0, 16, 1.0, 16, 1.0).unwrap();
        let ts = times(16, 1.0);
        let cyl = ParabolicCylinder::new(0.05, 0.5, 0.5, 0.2);
        let ones = vec![vec![1.0; g.len()]; ts.len()];
        let v = integrate_cylinder(&g, &ts, &cyl, &ones).unwrap();
        assert_relative_eq!(v, 0.4 * 0.4 * 0.08, max_relative = 1e-12);
    }

    #[test]
    fn trapezoid_refinement() {
        let f = |x1: f64, xn: f64, t: f64| (x1).sin() * xn * xn * (-t).exp() + xn.cos();
        let cyl = ParabolicCylinder::new(1.3, 0.2, 1.0, 0.6);
        // closed form of the integral of f over the cylinder
        let (a1, b1) = cyl.x1_range();
        let (an, bn) = cyl.xn_range();
        let (ta, tb) = cyl.t_range();
        let exact = (a1.cos() - b1.cos()) * (bn.powi(3) - an.powi(3)) / 3.0 * ((-ta).exp() - (-tb).exp())
            + (b1 - a1) * (bn.sin() - an.sin()) * (tb - ta);
        let err = |m: usize, jj: usize, nt: usize| {
            let g = StripGrid::new(2.0 * PI, m, 2.0, jj, 2.0).unwrap();
            let ts = times(nt, 2.0);
            let vals: Vec<Vec<f64>> = ts.iter().map(|&t| g.sample(|x1, xn| f(x1, xn, t))).collect();
            (integrate_cylinder(&g, &ts, &cyl, &vals).unwrap() - exact).abs()
        };
        let e1 = err(32, 32, 32);
        let e2 = err(64, 64, 64);
        assert!(e1 / e2 >= 3.0, "ratio {}", e1 / e2);
    }
}
