use crate::error::{Error, Result};
use crate::operator::{discrete_laplacian, interior_inner, OperatorParams};

/// Discrete Dirichlet energy: face sums in `x_N`, forward differences in `x1`.
pub fn dirichlet_energy(params: &OperatorParams, v: &[f64]) -> f64 {
    let grid = &params.grid;
    let st = params.stencils();
    let (mx, j, hx) = (grid.mx(), grid.j(), grid.hx());
    let mut normal = 0.0;
    for k in 0..j {
        let h = grid.spacing(k);
        for i in 0..mx {
            let d = (v[(k + 1) * mx + i] - v[k * mx + i]) / h;
            normal += h * hx * d * d;
        }
    }
    let mut tangential = 0.0;
    for k in 1..j {
        let row = &v[k * mx..(k + 1) * mx];
        let s: f64 = (0..mx)
            .map(|i| {
                let d = (row[(i + 1) % mx] - row[i]) / hx;
                d * d
            })
            .sum();
        tangential += st.volume(k) * hx * s;
    }
    normal + tangential
}

/// `int |grad v|^2 / sqrt(int (Lap v)^2 int v^2)` with matched discrete
/// operators; at most one up to rounding. `None` for `v = 0`.
pub fn interpolation_check(params: &OperatorParams, v: &[f64]) -> Result<Option<f64>> {
    let grid = &params.grid;
    if v.len() != grid.len() {
        return Err(Error::invalid("field does not match the grid"));
    }
    let (mx, j) = (grid.mx(), grid.j());
    let near = |k: usize| k <= 2 || k + 2 >= j;
    if (0..=j)
        .filter(|&k| near(k))
        .any(|k| v[k * mx..(k + 1) * mx].iter().any(|&x| x != 0.0))
    {
        return Err(Error::Contract(
            "v must vanish within two cells of the normal boundaries".into(),
        ));
    }
    let lap = discrete_laplacian(params, v, None);
    let grad = dirichlet_energy(params, v);
    let den = (interior_inner(params, &lap, &lap) * interior_inner(params, v, v)).sqrt();
    Ok(if den > 0.0 { Some(grad / den) } else { None })
}
