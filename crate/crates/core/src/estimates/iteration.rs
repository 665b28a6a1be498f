use serde::Serialize;

use crate::error::{Error, Result};

/// Samples of `f >= 0` on `[r0, r1]` and the constants of
/// `f(t) <= theta f(s) + A (s - t)^-a + B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationLemmaInput {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub theta: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    pub a_exp: f64,
}

impl IterationLemmaInput {
    pub fn sample<F: Fn(f64) -> f64>(
        r0: f64,
        r1: f64,
        n: usize,
        f: F,
        theta: f64,
        a_coef: f64,
        b_coef: f64,
        a_exp: f64,
    ) -> Self {
        let nodes: Vec<f64> = (0..=n).map(|k| r0 + (r1 - r0) * k as f64 / n as f64).collect();
        let values = nodes.iter().map(|&t| f(t)).collect();
        IterationLemmaInput {
            nodes,
            values,
            theta,
            a_coef,
            b_coef,
            a_exp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationLemmaResult {
    pub hypothesis_ok: bool,
    /// `max f(t) / [A (s-t)^-a + B]` over sampled pairs; infinite when the
    /// bracket vanishes while `f > 0`.
    pub min_constant: f64,
    /// Set when `A = B = 0` and `f` is positive somewhere.
    pub conclusion_violated: bool,
    /// Pair `(t, s)` with the largest hypothesis excess.
    pub worst_pair: Option<(f64, f64)>,
}

pub fn iteration_lemma_check(input: &IterationLemmaInput) -> Result<IterationLemmaResult> {
    let IterationLemmaInput {
        nodes,
        values,
        theta,
        a_coef,
        b_coef,
        a_exp,
    } = input;
    if !(0.0..1.0).contains(theta) {
        return Err(Error::invalid(format!("theta must lie in [0, 1) (got {theta})")));
    }
    if nodes.len() != values.len() || nodes.len() < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("nodes must increase"));
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || *a_coef < 0.0 || *b_coef < 0.0 || *a_exp < 0.0 {
        return Err(Error::invalid("f, A, B and a must be finite and nonnegative"));
    }
    let fmax = values.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-12 * (1.0 + fmax);
    let mut hypothesis_ok = true;
    let mut worst = (f64::NEG_INFINITY, None);
    let mut c: f64 = 0.0;
    for p in 0..nodes.len() {
        for q in p + 1..nodes.len() {
            let gap = nodes[q] - nodes[p];
            let bracket = a_coef * gap.powf(-a_exp) + b_coef;
            let excess = values[p] - theta * values[q] - bracket;
            if excess > tol {
                hypothesis_ok = false;
            }
            if excess > worst.0 {
                worst = (excess, Some((nodes[p], nodes[q])));
            }
            if values[p] > 0.0 {
                c = c.max(if bracket > 0.0 {
                    values[p] / bracket
                } else {
                    f64::INFINITY
                });
            }
        }
    }
    let conclusion_violated = *a_coef == 0.0 && *b_coef == 0.0 && fmax > 0.0;
    Ok(IterationLemmaResult {
        hypothesis_ok,
        min_constant: c,
        conclusion_violated,
        worst_pair: if hypothesis_ok { None } else { worst.1 },
    })
}
