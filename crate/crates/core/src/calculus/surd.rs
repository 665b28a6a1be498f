//! Exact numbers of the form `p + q*sqrt(s)` with rational `p`, `q` and a
//! squarefree integer radicand `s`.
//!
//! All values that occur in one computation share the radicand of
//! `sqrt(1/4 + beta)`, so sums and products stay closed. Mixing two
//! different irrational radicands is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"`, `"p"` or a signed integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("malformed rational '{text}'"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Splits `m = k^2 * s` with `s` squarefree.
fn squarefree_split(m: &BigUint) -> (BigUint, BigUint) {
    let mut rem = m.clone();
    let mut k = BigUint::one();
    let mut s = BigUint::one();
    let mut p = BigUint::from(2u32);
    loop {
        let p2 = &p * &p;
        if &p2 * &p > rem {
            break;
        }
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            k *= &p;
        }
        if (&rem % &p).is_zero() {
            rem /= &p;
            s *= &p;
        }
        p += 1u32;
    }
    // Every prime factor of `rem` now exceeds cbrt(rem): rem is 1, a prime,
    // a prime square or a product of two distinct primes.
    let root = rem.sqrt();
    if &root * &root == rem {
        k *= root;
    } else {
        s *= rem;
    }
    (k, s)
}

/// `p + q*sqrt(r)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdValue {
    p: Rational,
    q: Rational,
    r: Rational,
}

impl SurdValue {
    /// Builds `p + q*sqrt(r)`; `r` must be non-negative.
    pub fn new(p: Rational, q: Rational, r: Rational) -> Self {
        assert!(!r.is_negative(), "negative radicand {r}");
        if q.is_zero() || r.is_zero() {
            return Self::from_rational(p);
        }
        // sqrt(n/d) = sqrt(n*d)/d = (k/d) sqrt(s)
        let nd = (r.numer() * r.denom()).to_biguint().expect("non-negative");
        let (k, s) = squarefree_split(&nd);
        let factor = BigRational::new(BigInt::from(k), r.denom().clone());
        let q = q * factor;
        if s.is_one() {
            Self::from_rational(p + q)
        } else {
            SurdValue {
                p,
                q,
                r: BigRational::from_integer(BigInt::from_biguint(Sign::Plus, s)),
            }
        }
    }

    pub fn from_rational(p: Rational) -> Self {
        SurdValue {
            p,
            q: Rational::zero(),
            r: Rational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(rational(n, 1))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rational(n, d))
    }

    pub fn sqrt(r: Rational) -> Self {
        Self::new(Rational::zero(), Rational::one(), r)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// Canonical radicand (squarefree integer, or zero for rational values).
    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    fn common_radicand(&self, other: &Self) -> Rational {
        match (self.q.is_zero(), other.q.is_zero()) {
            (true, _) => other.r.clone(),
            (_, true) => self.r.clone(),
            _ => {
                assert_eq!(self.r, other.r, "mixed radicands in surd arithmetic");
                self.r.clone()
            }
        }
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> i32 {
        let sp = sign_of(&self.p);
        let sq = sign_of(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // opposite signs: compare p^2 with q^2 r (never equal, r non-square)
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.r;
        if lhs > rhs {
            sp
        } else {
            sq
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.p) + rational_to_f64(&self.q) * rational_to_f64(&self.r).sqrt()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SurdValue {
            p: &self.p * k,
            q: &self.q * k,
            r: self.r.clone(),
        }
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Default for SurdValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for SurdValue {
    fn from(p: Rational) -> Self {
        Self::from_rational(p)
    }
}

impl<'a> Add<&'a SurdValue> for &'a SurdValue {
    type Output = SurdValue;
    fn add(self, rhs: &SurdValue) -> SurdValue {
        let r = self.common_radicand(rhs);
        let q = &self.q + &rhs.q;
        let p = &self.p + &rhs.p;
        if q.is_zero() {
            SurdValue::from_rational(p)
        } else {
            SurdValue { p, q, r }
        }
    }
}

impl<'a> Sub<&'a SurdValue> for &'a SurdValue {
    type Output = SurdValue;
    fn sub(self, rhs: &SurdValue) -> SurdValue {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a SurdValue> for &'a SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: &SurdValue) -> SurdValue {
        let r = self.common_radicand(rhs);
        let p = &self.p * &rhs.p + &self.q * &rhs.q * &r;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        if q.is_zero() {
            SurdValue::from_rational(p)
        } else {
            SurdValue { p, q, r }
        }
    }
}

impl Neg for &SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        SurdValue {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<SurdValue> for SurdValue {
            type Output = SurdValue;
            fn $m(self, rhs: SurdValue) -> SurdValue {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SurdValue {
    type Output = SurdValue;
    fn neg(self) -> SurdValue {
        -&self
    }
}

impl PartialOrd for SurdValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", format_rational(&self.p));
        }
        let root = format!("sqrt({})", format_rational(&self.r));
        let qpart = if self.q.is_one() {
            root
        } else if (-&self.q).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", format_rational(&self.q))
        };
        if self.p.is_zero() {
            write!(f, "{qpart}")
        } else if self.q.is_negative() {
            write!(f, "{} - {}", format_rational(&self.p), qpart.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}", format_rational(&self.p), qpart)
        }
    }
}

impl Serialize for SurdValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SurdValue", 3)?;
        st.serialize_field("p", &format_rational(&self.p))?;
        st.serialize_field("q", &format_rational(&self.q))?;
        st.serialize_field("r", &format_rational(&self.r))?;
        st.end()
    }
}

/// Integer divisors helper used by the rational root search.
pub(crate) fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
