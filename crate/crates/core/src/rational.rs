//! Exact rationals and closed rational intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^{-n}`.
pub fn pow2_neg(n: usize) -> Rational {
    Rational::new_raw(BigInt::one(), BigInt::one() << n)
}

/// `num / 2^exp` in lowest terms without a gcd.
pub fn dyadic_rat(num: BigInt, exp: usize) -> Rational {
    let tz = num.trailing_zeros().map_or(exp, |t| (t as usize).min(exp));
    if num.is_zero() {
        return Rational::zero();
    }
    Rational::new_raw(num >> tz, BigInt::one() << (exp - tz))
}

/// `3^{-n}`.
pub fn pow3_neg(n: usize) -> Rational {
    Rational::new_raw(BigInt::one(), BigInt::from(3u32).pow(n as u32))
}

pub fn div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn compare(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

/// Least `c` with `2^c >= q`, for `q >= 1`; zero for `q <= 1`.
pub fn ceil_log2(q: &Rational) -> usize {
    if *q <= Rational::one() {
        return 0;
    }
    let mut c = 0usize;
    let mut p = BigInt::one();
    // 2^c >= n/d  <=>  2^c * d >= n
    while &p * q.denom() < *q.numer() {
        p <<= 1;
        c += 1;
    }
    c
}

/// Parses `p/q` or `p`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(p, q))
}

/// True when the denominator is a power of two.
pub fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom().magnitude();
    d.count_ones() == 1
}

/// A closed interval `[lo, hi]` with rational endpoints and `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("interval endpoints out of order: {lo} > {hi}")));
        }
        Ok(RatInterval { lo, hi })
    }

    /// Caller guarantees `lo <= hi`.
    pub(crate) fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    /// `(c - r, c + r)` for `r >= 0`.
    pub fn centered(c: &Rational, r: &Rational) -> Self {
        assert!(!r.is_negative(), "negative radius");
        RatInterval { lo: c - r, hi: c + r }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `self ⊑ other`.
    pub fn within(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self ≈ other`: the intervals share a point.
    pub fn touches(&self, other: &RatInterval) -> bool {
        other.lo <= self.hi && self.lo <= other.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval { lo: -&self.hi, hi: -&self.lo }
    }

    /// `(max{-hi, lo}, max{-lo, hi})`.
    pub fn abs(&self) -> RatInterval {
        RatInterval {
            lo: max(&-&self.hi, &self.lo),
            hi: max(&-&self.lo, &self.hi),
        }
    }

    pub fn scale(&self, a: &Rational) -> RatInterval {
        let (x, y) = (a * &self.lo, a * &self.hi);
        if x <= y { RatInterval { lo: x, hi: y } } else { RatInterval { lo: y, hi: x } }
    }

    pub fn shift(&self, b: &Rational) -> RatInterval {
        RatInterval { lo: &self.lo + b, hi: &self.hi + b }
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
