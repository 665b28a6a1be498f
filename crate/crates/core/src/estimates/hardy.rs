use crate::error::{Error, Result};

/// `int_0^R w^2 / int_0^R x^2 (w')^2` for the piecewise-linear interpolant of
/// `w` on `nodes` (`nodes[0] = 0`, last node `R`). Both integrals are exact
/// for the interpolant. `None` when the denominator vanishes.
pub fn hardy_ratio(w: &[f64], nodes: &[f64]) -> Result<Option<f64>> {
    if w.len() != nodes.len() || nodes.len() < 2 {
        return Err(Error::invalid("hardy_ratio: samples and nodes must match (>= 2 nodes)"));
    }
    let wmax = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let last = *w.last().expect("non-empty");
    if last.abs() > 1e-12 * wmax {
        return Err(Error::Contract(format!("w(R) = {last} must vanish")));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..nodes.len() - 1 {
        let (x0, x1) = (nodes[k], nodes[k + 1]);
        let h = x1 - x0;
        let (a, b) = (w[k], w[k + 1]);
        num += h * (a * a + a * b + b * b) / 3.0;
        let slope = (b - a) / h;
        den += slope * slope * (x1.powi(3) - x0.powi(3)) / 3.0;
    }
    Ok(if den > 0.0 { Some(num / den) } else { None })
}
