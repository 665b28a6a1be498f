//! The 1-D degenerate operator `l_beta v = d/dx (x^2 v''' - beta v')` on
//! power-log sums, its indicial polynomial, kernel and particular solutions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::surd::{format_rational, positive_divisors, rational, Rational, SurdValue};
use super::term::{differentiate, differentiate_n, PowerLogTerm, TermSum};
use crate::error::{Error, Result};

/// Non-negative exact rational `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Beta(Rational);

impl Beta {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::NegativeBeta(format_rational(&value)));
        }
        Ok(Beta(value))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Self> {
        Self::new(rational(n, d))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        super::surd::rational_to_f64(&self.0)
    }

    /// `sqrt(1/4 + beta)`
    pub fn discriminant_root(&self) -> SurdValue {
        SurdValue::sqrt(rational(1, 4) + &self.0)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

/// `l_beta v`, exactly.
pub fn apply_lbeta(beta: &Beta, v: &TermSum) -> TermSum {
    let v1 = differentiate(v);
    let v3 = differentiate_n(&v1, 2);
    let flux = v3.shift(&SurdValue::int(2)).sub(&v1.scale_rational(beta.value()));
    differentiate(&flux)
}

/// Coefficient `P(a)` in `l_beta x^a = P(a) x^(a-2)`; zero iff `x^a` is in
/// the kernel.
pub fn indicial_residual(beta: &Beta, a: &SurdValue) -> SurdValue {
    let image = apply_lbeta(beta, &TermSum::power(a.clone()));
    debug_assert!(image.terms().len() <= 1);
    image.coefficient(&(a - &SurdValue::int(2)), 0)
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
struct RatPoly(Vec<Rational>);

impl RatPoly {
    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    fn interpolate(xs: &[Rational], ys: &[Rational]) -> RatPoly {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        // expand Newton form into monomial coefficients
        let mut coeffs = vec![Rational::zero(); n];
        for k in (0..n).rev() {
            // coeffs <- coeffs * (x - xs[k]) + dd[k]
            let mut next = vec![Rational::zero(); n];
            for (i, c) in coeffs.iter().enumerate() {
                if i + 1 < n {
                    next[i + 1] += c;
                }
                next[i] -= c * &xs[k];
            }
            next[0] += &dd[k];
            coeffs = next;
        }
        RatPoly(coeffs).trim()
    }

    /// Synthetic division by `(x - root)`.
    fn deflate(&self, root: &Rational) -> RatPoly {
        let n = self.0.len();
        let mut out = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = &self.0[i] + carry * root;
            out[i - 1] = carry.clone();
        }
        RatPoly(out).trim()
    }

    fn find_rational_root(&self) -> Option<Rational> {
        if self.degree() == 0 {
            return None;
        }
        if self.0[0].is_zero() {
            return Some(Rational::zero());
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let lead = ints.last().expect("non-empty");
        for p in positive_divisors(&ints[0]) {
            for q in positive_divisors(lead) {
                for cand in [
                    Rational::new(p.clone(), q.clone()),
                    -Rational::new(p.clone(), q.clone()),
                ] {
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

/// Roots of the indicial polynomial with multiplicity, ascending.
///
/// The polynomial is recovered from the operator itself (interpolating
/// `indicial_residual` at five rational points), then factored: rational
/// roots by the rational-root test, the remaining quadratic in surds.
pub fn indicial_roots(beta: &Beta) -> Vec<SurdValue> {
    let xs: Vec<Rational> = (0..5).map(|k| rational(k, 1)).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|a| {
            indicial_residual(beta, &SurdValue::from(a.clone()))
                .as_rational()
                .cloned()
                .expect("rational exponent gives rational residual")
        })
        .collect();
    let mut poly = RatPoly::interpolate(&xs, &ys);
    let mut roots = Vec::new();
    while let Some(root) = poly.find_rational_root() {
        poly = poly.deflate(&root);
        roots.push(SurdValue::from(root));
    }
    match poly.degree() {
        0 => {}
        1 => roots.push(SurdValue::from(-&poly.0[0] / &poly.0[1])),
        2 => {
            let (c, b, a) = (&poly.0[0], &poly.0[1], &poly.0[2]);
            let disc = b * b - rational(4, 1) * a * c;
            assert!(!disc.is_negative(), "indicial polynomial has complex roots");
            let two_a = rational(2, 1) * a;
            let centre = SurdValue::from(-b / &two_a);
            let half = SurdValue::new(Rational::zero(), Rational::one() / &two_a, disc);
            roots.push(&centre - &half);
            roots.push(&centre + &half);
        }
        d => panic!("irreducible indicial factor of degree {d}"),
    }
    roots.sort();
    roots
}

/// Four kernel functions of `l_beta`; a root of multiplicity `m` contributes
/// `x^a (ln x)^k` for `k < m`. Sorted by `(exponent, logpow)`.
pub fn kernel_basis(beta: &Beta) -> Vec<TermSum> {
    let roots = indicial_roots(beta);
    let mut basis: Vec<PowerLogTerm> = Vec::with_capacity(4);
    let mut k = 0;
    while k < roots.len() {
        let mut mult = 1;
        while k + mult < roots.len() && roots[k + mult] == roots[k] {
            mult += 1;
        }
        for lp in 0..mult {
            basis.push(PowerLogTerm::new(SurdValue::one(), roots[k].clone(), lp as u32));
        }
        k += mult;
    }
    basis.sort_by(|a, b| (&a.exponent, a.logpow).cmp(&(&b.exponent, b.logpow)));
    basis.into_iter().map(TermSum::single).collect()
}

/// A solution of `l_beta v = b`: `-b/(2 beta) x^2` for `beta > 0`,
/// `(b/2) x^2 ln x` for `beta = 0`.
pub fn particular_solution(beta: &Beta, b: &Rational) -> TermSum {
    if b.is_zero() {
        return TermSum::zero();
    }
    if beta.is_zero() {
        TermSum::monomial(b / rational(2, 1), rational(2, 1), 1)
    } else {
        TermSum::monomial(-(b / (rational(2, 1) * beta.value())), rational(2, 1), 0)
    }
}

/// Membership in the weighted class: `x * v'''` and `x^2 * v''''` bounded
/// as `x -> 0+`.
pub fn admissible(term: &PowerLogTerm) -> bool {
    let v = TermSum::single(term.clone());
    let d3 = differentiate_n(&v, 3);
    let d4 = differentiate(&d3);
    d3.shift(&SurdValue::one()).bounded_near_zero() && d4.shift(&SurdValue::int(2)).bounded_near_zero()
}

/// Admissibility of a whole sum (every term admissible).
pub fn admissible_sum(v: &TermSum) -> bool {
    v.terms().iter().all(admissible)
}
