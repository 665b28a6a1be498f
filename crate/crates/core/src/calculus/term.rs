use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::surd::{Rational, SurdValue};
use crate::error::{Error, Result};

/// `coeff * x^exponent * (ln x)^logpow`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PowerLogTerm {
    pub coeff: SurdValue,
    pub exponent: SurdValue,
    pub logpow: u32,
}

impl PowerLogTerm {
    pub fn new(coeff: SurdValue, exponent: SurdValue, logpow: u32) -> Self {
        PowerLogTerm {
            coeff,
            exponent,
            logpow,
        }
    }

    /// `x^a`
    pub fn power(exponent: SurdValue) -> Self {
        Self::new(SurdValue::one(), exponent, 0)
    }

    fn key(&self) -> (&SurdValue, u32) {
        (&self.exponent, self.logpow)
    }

    /// Derivative, as at most two terms.
    fn derivative(&self) -> Vec<PowerLogTerm> {
        let e = &self.exponent - &SurdValue::one();
        let mut out = Vec::with_capacity(2);
        let c = &self.coeff * &self.exponent;
        if !c.is_zero() {
            out.push(PowerLogTerm::new(c, e.clone(), self.logpow));
        }
        if self.logpow > 0 {
            let c = self.coeff.scale(&Rational::from_integer(self.logpow.into()));
            out.push(PowerLogTerm::new(c, e, self.logpow - 1));
        }
        out
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let mut v = self.coeff.to_f64() * x.powf(self.exponent.to_f64());
        if self.logpow > 0 {
            v *= x.ln().powi(self.logpow as i32);
        }
        v
    }

    /// Bounded on `(0, 1]`: positive exponent, or a plain constant.
    pub fn bounded_near_zero(&self) -> bool {
        let s = self.exponent.signum();
        s > 0 || (s == 0 && self.logpow == 0)
    }
}

impl fmt::Display for PowerLogTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeff.to_string();
        let c = if self.coeff.is_rational() { c } else { format!("({c})") };
        write!(f, "{c}")?;
        if !self.exponent.is_zero() {
            if self.exponent == SurdValue::one() {
                write!(f, "*x")?;
            } else {
                write!(f, "*x^({})", self.exponent)?;
            }
        }
        match self.logpow {
            0 => Ok(()),
            1 => write!(f, "*ln(x)"),
            k => write!(f, "*ln(x)^{k}"),
        }
    }
}

/// Canonical finite sum of power-log terms: sorted by `(exponent, logpow)`,
/// no repeated keys, no zero coefficients. The empty sum is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TermSum {
    terms: Vec<PowerLogTerm>,
}

impl TermSum {
    pub fn zero() -> Self {
        TermSum { terms: Vec::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = PowerLogTerm>>(terms: I) -> Self {
        let mut terms: Vec<PowerLogTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        terms.sort_by(|a, b| a.key().cmp(&b.key()));
        let mut merged: Vec<PowerLogTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.key() == t.key() => {
                    last.coeff = &last.coeff + &t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        TermSum { terms: merged }
    }

    pub fn single(term: PowerLogTerm) -> Self {
        Self::from_terms([term])
    }

    /// `c * x^a * (ln x)^k` with rational coefficient and exponent.
    pub fn monomial(coeff: Rational, exponent: Rational, logpow: u32) -> Self {
        Self::single(PowerLogTerm::new(coeff.into(), exponent.into(), logpow))
    }

    /// `x^a`
    pub fn power(exponent: SurdValue) -> Self {
        Self::single(PowerLogTerm::power(exponent))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero(), 0)
    }

    pub fn terms(&self) -> &[PowerLogTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TermSum) -> TermSum {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn neg(&self) -> TermSum {
        self.scale(&SurdValue::int(-1))
    }

    pub fn sub(&self, other: &TermSum) -> TermSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &SurdValue) -> TermSum {
        Self::from_terms(self.terms.iter().map(|t| PowerLogTerm {
            coeff: &t.coeff * k,
            ..t.clone()
        }))
    }

    pub fn scale_rational(&self, k: &Rational) -> TermSum {
        self.scale(&SurdValue::from(k.clone()))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: &SurdValue) -> TermSum {
        Self::from_terms(self.terms.iter().map(|t| PowerLogTerm {
            exponent: &t.exponent + k,
            ..t.clone()
        }))
    }

    /// Coefficient of `x^exponent (ln x)^logpow` (zero when absent).
    pub fn coefficient(&self, exponent: &SurdValue, logpow: u32) -> SurdValue {
        self.terms
            .iter()
            .find(|t| &t.exponent == exponent && t.logpow == logpow)
            .map(|t| t.coeff.clone())
            .unwrap_or_default()
    }

    /// Floating evaluation at `x > 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        evaluate(self, x)
    }

    /// Bounded on `(0, 1]`. Distinct `(exponent, logpow)` pairs have distinct
    /// asymptotics at `0+`, so no cancellation between terms is possible.
    pub fn bounded_near_zero(&self) -> bool {
        self.terms.iter().all(PowerLogTerm::bounded_near_zero)
    }

    /// Limit at `0+` for bounded sums.
    pub fn value_at_zero(&self) -> Option<f64> {
        if !self.bounded_near_zero() {
            return None;
        }
        Some(
            self.terms
                .iter()
                .filter(|t| t.exponent.is_zero() && t.logpow == 0)
                .map(|t| t.coeff.to_f64())
                .sum(),
        )
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Exact derivative.
pub fn differentiate(v: &TermSum) -> TermSum {
    TermSum::from_terms(v.terms.iter().flat_map(PowerLogTerm::derivative))
}

/// `n`-th derivative.
pub fn differentiate_n(v: &TermSum, n: usize) -> TermSum {
    (0..n).fold(v.clone(), |acc, _| differentiate(&acc))
}

/// Floating evaluation of `v` at `x > 0`.
pub fn evaluate(v: &TermSum, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveAbscissa(x));
    }
    Ok(v.terms.iter().map(|t| t.evaluate(x)).sum())
}
