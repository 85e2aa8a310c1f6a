//! Injective encodings of integers, rationals and rational intervals as naturals.
//!
//! Version 1: integers are zigzag coded (`n ↦ 2n`, `-n ↦ 2n - 1`), pairs use the
//! Cantor pairing `⟨a, b⟩ = (a + b)(a + b + 1)/2 + b`, a rational `p/q` in lowest
//! terms is `⟨zig(p), q - 1⟩` and an interval is `⟨enc(lo), enc(hi)⟩`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{RatInterval, Rational};

pub fn zigzag(n: &BigInt) -> BigUint {
    let m = n.magnitude().clone();
    match n.sign() {
        Sign::Minus => (m << 1) - 1u32,
        _ => m << 1,
    }
}

pub fn unzigzag(z: &BigUint) -> BigInt {
    let half = BigInt::from(z >> 1);
    if z.is_odd() { -half - 1 } else { half }
}

pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    ((&s * (&s + 1u32)) >> 1) + b
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w: BigUint = ((((z << 3u32) + 1u32) as BigUint).sqrt() - 1u32) >> 1u32;
    let t = (&w * (&w + 1u32)) >> 1;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

pub fn encode_rational(q: &Rational) -> BigUint {
    let d = q.denom().magnitude() - 1u32;
    pair(&zigzag(q.numer()), &d)
}

/// Rejects codes whose fraction is not in lowest terms.
pub fn decode_rational(z: &BigUint) -> Result<Rational> {
    let (a, b) = unpair(z);
    let p = unzigzag(&a);
    let q = BigInt::from(b + 1u32);
    if !p.gcd(&q).is_one() && !(p.is_zero() && q.is_one()) {
        return Err(Error::Decode(format!("non-canonical rational code {z}")));
    }
    Ok(Rational::new_raw(p, q))
}

pub fn encode_interval(i: &RatInterval) -> BigUint {
    pair(&encode_rational(i.lo()), &encode_rational(i.hi()))
}

pub fn decode_interval(z: &BigUint) -> Result<RatInterval> {
    let (a, b) = unpair(z);
    let lo = decode_rational(&a)?;
    let hi = decode_rational(&b)?;
    RatInterval::new(lo, hi).map_err(|_| Error::Decode(format!("interval code {z} has lo > hi")))
}

/// Code value of an optional interval: `0` for none, `1 + enc(I)` otherwise.
pub fn code_value(i: Option<&RatInterval>) -> BigUint {
    match i {
        None => BigUint::zero(),
        Some(i) => encode_interval(i) + 1u32,
    }
}

/// Inverse of [`code_value`] with truncated subtraction on the `0` sentinel.
pub fn decode_code_value(v: &BigUint) -> Result<Option<RatInterval>> {
    if v.is_zero() {
        return Ok(None);
    }
    decode_interval(&(v - 1u32)).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn pairing_round_trip() {
        for a in 0u32..40 {
            for b in 0u32..40 {
                let z = pair(&a.into(), &b.into());
                assert_eq!(unpair(&z), (a.into(), b.into()));
            }
        }
        for z in 0u32..2000 {
            let (a, b) = unpair(&z.into());
            assert_eq!(pair(&a, &b), BigUint::from(z));
        }
    }

    #[test]
    fn zigzag_round_trip() {
        for n in -50i64..50 {
            let b = BigInt::from(n);
            assert_eq!(unzigzag(&zigzag(&b)), b);
        }
        assert_eq!(zigzag(&BigInt::from(-1)), BigUint::from(1u32));
        assert_eq!(zigzag(&BigInt::from(1)), BigUint::from(2u32));
    }

    #[test]
    fn rationals_and_intervals_round_trip() {
        for q in [rat(1, 3), rat(-7, 8), int(0), int(5), rat(-1, 2)] {
            assert_eq!(decode_rational(&encode_rational(&q)).unwrap(), q);
        }
        let i = RatInterval::new(rat(-1, 4), rat(3, 5)).unwrap();
        assert_eq!(decode_interval(&encode_interval(&i)).unwrap(), i);
        assert_eq!(decode_code_value(&code_value(Some(&i))).unwrap(), Some(i));
        assert_eq!(decode_code_value(&BigUint::zero()).unwrap(), None);
    }

    #[test]
    fn rejects_non_canonical_and_reversed() {
        // 2/4 is not in lowest terms
        let z = pair(&zigzag(&BigInt::from(2)), &BigUint::from(3u32));
        assert!(decode_rational(&z).is_err());
        let rev = pair(&encode_rational(&int(1)), &encode_rational(&int(0)));
        assert!(decode_interval(&rev).is_err());
    }
}
