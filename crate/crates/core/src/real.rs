//! Regular sequences, fundamental sequences with a modulus and shrinking
//! interval sequences, with conversions between them.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{max, pow2_neg, RatInterval, Rational};
use crate::seq::LazySeq;
use crate::search_cap;

/// A rational sequence with `|r_n - r_{n+1}| <= 2^{-(n+1)}`.
///
/// Term `n` is within `2^{-n}` of the denoted real.
#[derive(Clone)]
pub struct RegularReal {
    terms: LazySeq<Rational>,
}

impl fmt::Debug for RegularReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RegularReal(..)")
    }
}

impl RegularReal {
    /// The caller is responsible for the regularity bound.
    pub fn from_fn(f: impl Fn(usize) -> Result<Rational> + Send + Sync + 'static) -> Self {
        RegularReal { terms: LazySeq::indexed(f) }
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_fn(move |_| Ok(q.clone()))
    }

    pub fn term(&self, n: usize) -> Result<Rational> {
        self.terms.get(n)
    }

    /// A rational within `2^{-k}` of the value.
    pub fn approx(&self, k: usize) -> Result<Rational> {
        self.term(k)
    }

    pub fn add(&self, other: &RegularReal) -> RegularReal {
        let (x, y) = (self.clone(), other.clone());
        Self::from_fn(move |n| Ok(x.term(n + 1)? + y.term(n + 1)?))
    }

    pub fn neg(&self) -> RegularReal {
        let x = self.clone();
        Self::from_fn(move |n| Ok(-x.term(n)?))
    }

    pub fn sub(&self, other: &RegularReal) -> RegularReal {
        self.add(&other.neg())
    }

    pub fn abs(&self) -> RegularReal {
        let x = self.clone();
        Self::from_fn(move |n| Ok(x.term(n)?.abs()))
    }

    /// `x ↦ a x`, reading ahead `⌈log₂ |a|⌉` terms to stay regular.
    pub fn scale(&self, a: &Rational) -> RegularReal {
        let c = crate::rational::ceil_log2(&a.abs());
        let (x, a) = (self.clone(), a.clone());
        Self::from_fn(move |n| Ok(&a * x.term(n + c)?))
    }

    /// `x ↦ a + x` for rational `a`; term-wise, so regularity is kept.
    pub fn offset(&self, a: &Rational) -> RegularReal {
        let (x, a) = (self.clone(), a.clone());
        Self::from_fn(move |n| Ok(x.term(n)? + &a))
    }
}

pub fn regular_check_prefix(x: &RegularReal, depth: usize) -> Result<bool> {
    for n in 0..depth {
        if (x.term(n)? - x.term(n + 1)?).abs() > pow2_neg(n + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn approx(x: &RegularReal, k: usize) -> Result<Rational> {
    x.approx(k)
}

/// `|r_{n+1} - q_{n+1}| <= 2^{-n}` for all `n < depth`.
pub fn eq_at(x: &RegularReal, y: &RegularReal, depth: usize) -> Result<bool> {
    for n in 0..depth {
        if (x.term(n + 1)? - y.term(n + 1)?).abs() > pow2_neg(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trichotomy {
    LessAt(usize),
    GreaterAt(usize),
    IndistinguishableAtCap,
}

/// Scans for the least `n < cap` with `q_{n+1} - r_{n+1} > 2^{-n}` or the reverse.
pub fn less_at(x: &RegularReal, y: &RegularReal, cap: usize) -> Result<Trichotomy> {
    for n in 0..cap {
        let d = y.term(n + 1)? - x.term(n + 1)?;
        let e = pow2_neg(n);
        if d > e {
            return Ok(Trichotomy::LessAt(n));
        }
        if -d > e {
            return Ok(Trichotomy::GreaterAt(n));
        }
    }
    Ok(Trichotomy::IndistinguishableAtCap)
}

type Modulus = Arc<dyn Fn(usize) -> usize + Send + Sync>;

/// A Cauchy sequence with an explicit modulus:
/// `|terms(δ(k)+n) - terms(δ(k)+m)| <= 2^{-k}`.
#[derive(Clone)]
pub struct FundamentalReal {
    terms: LazySeq<Rational>,
    modulus: Modulus,
}

impl fmt::Debug for FundamentalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FundamentalReal(..)")
    }
}

impl FundamentalReal {
    pub fn new(
        terms: impl Fn(usize) -> Result<Rational> + Send + Sync + 'static,
        modulus: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        FundamentalReal { terms: LazySeq::indexed(terms), modulus: Arc::new(modulus) }
    }

    pub fn constant(q: Rational) -> Self {
        Self::new(move |_| Ok(q.clone()), |k| k)
    }

    pub fn term(&self, n: usize) -> Result<Rational> {
        self.terms.get(n)
    }

    pub fn modulus(&self, k: usize) -> usize {
        (self.modulus)(k)
    }

    /// Spot check of the modulus law for `k < depth` and offsets `n, m < depth`.
    pub fn check_prefix(&self, depth: usize) -> Result<bool> {
        for k in 0..depth {
            let base = self.modulus(k);
            let e = pow2_neg(k);
            for n in 0..depth {
                let a = self.term(base + n)?;
                for m in (n + 1)..depth {
                    if (&a - self.term(base + m)?).abs() > e {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Term-wise sum with modulus `max{δ(k+1), ξ(k+1)}`.
    pub fn add(&self, other: &FundamentalReal) -> FundamentalReal {
        let (x, y) = (self.clone(), other.clone());
        let (dx, dy) = (self.modulus.clone(), other.modulus.clone());
        Self::new(move |n| Ok(x.term(n)? + y.term(n)?), move |k| dx(k + 1).max(dy(k + 1)))
    }

    pub fn neg(&self) -> FundamentalReal {
        let x = self.clone();
        FundamentalReal { terms: LazySeq::indexed(move |n| Ok(-x.term(n)?)), modulus: self.modulus.clone() }
    }

    pub fn abs(&self) -> FundamentalReal {
        let x = self.clone();
        FundamentalReal { terms: LazySeq::indexed(move |n| Ok(x.term(n)?.abs())), modulus: self.modulus.clone() }
    }

    pub fn to_regular(&self) -> RegularReal {
        regular_from_fundamental(self)
    }
}

/// Term `n` of the result is `terms(δ(n+1))`.
pub fn regular_from_fundamental(f: &FundamentalReal) -> RegularReal {
    let f = f.clone();
    RegularReal::from_fn(move |n| f.term(f.modulus(n + 1)))
}

/// Same terms, identity modulus.
pub fn fundamental_from_regular(x: &RegularReal) -> FundamentalReal {
    FundamentalReal { terms: x.terms.clone(), modulus: Arc::new(|k| k) }
}

/// Nested rational intervals whose lengths tend to zero.
///
/// The optional convergence witness satisfies `|intervals(c(k))| <= 2^{-k}`.
#[derive(Clone)]
pub struct ShrinkingReal {
    intervals: LazySeq<RatInterval>,
    convergence: Option<Modulus>,
}

impl fmt::Debug for ShrinkingReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ShrinkingReal(..)")
    }
}

impl ShrinkingReal {
    pub fn new(
        intervals: impl Fn(usize) -> Result<RatInterval> + Send + Sync + 'static,
        convergence: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        ShrinkingReal { intervals: LazySeq::indexed(intervals), convergence: Some(Arc::new(convergence)) }
    }

    /// No convergence witness; conversions search under the global cap.
    pub fn without_witness(intervals: impl Fn(usize) -> Result<RatInterval> + Send + Sync + 'static) -> Self {
        ShrinkingReal { intervals: LazySeq::indexed(intervals), convergence: None }
    }

    pub fn constant(q: Rational) -> Self {
        Self::new(move |_| Ok(RatInterval::point(q.clone())), |_| 0)
    }

    pub fn interval(&self, n: usize) -> Result<RatInterval> {
        self.intervals.get(n)
    }

    pub fn convergence(&self, k: usize) -> Option<usize> {
        self.convergence.as_ref().map(|c| c(k))
    }

    /// Checks nesting for `n < depth` and the witness for `k < depth`.
    pub fn check_prefix(&self, depth: usize) -> Result<bool> {
        for n in 0..depth {
            if !self.interval(n + 1)?.within(&self.interval(n)?) {
                return Ok(false);
            }
        }
        if self.convergence.is_some() {
            for k in 0..depth {
                let c = self.convergence(k).unwrap_or(0);
                if self.interval(c)?.length() > pow2_neg(k) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn combine(&self, other: Option<&ShrinkingReal>, f: fn(&RatInterval, Option<&RatInterval>) -> RatInterval, shift: bool) -> ShrinkingReal {
        let (s, t) = (self.clone(), other.cloned());
        let intervals = LazySeq::indexed(move |n| {
            let a = s.interval(n)?;
            let b = match &t {
                Some(t) => Some(t.interval(n)?),
                None => None,
            };
            Ok(f(&a, b.as_ref()))
        });
        let convergence: Option<Modulus> = match (self.convergence.clone(), other.map(|o| o.convergence.clone())) {
            (Some(c), None) => Some(c),
            (Some(c), Some(Some(d))) if shift => Some(Arc::new(move |k| c(k + 1).max(d(k + 1)))),
            _ => None,
        };
        ShrinkingReal { intervals, convergence }
    }

    /// Endpoint-wise sum; convergence `max{c_s(k+1), c_t(k+1)}`.
    pub fn add(&self, other: &ShrinkingReal) -> ShrinkingReal {
        self.combine(Some(other), |a, b| a.add(b.expect("binary op")), true)
    }

    pub fn neg(&self) -> ShrinkingReal {
        self.combine(None, |a, _| a.neg(), false)
    }

    /// `(max{-hi, lo}, max{-lo, hi})`.
    pub fn abs(&self) -> ShrinkingReal {
        self.combine(None, |a, _| a.abs(), false)
    }

    pub fn to_regular(&self) -> RegularReal {
        regular_from_shrinking(self)
    }
}

/// Least `m` with `|intervals(m)| <= 2^{-k}`.
fn shrink_index(s: &ShrinkingReal, k: usize) -> Result<usize> {
    let e = pow2_neg(k);
    let witness = s.convergence(k);
    let cap = search_cap();
    let limit = witness.map_or(cap, |w| w.max(cap));
    for m in 0..=limit {
        if s.interval(m)?.length() <= e {
            return Ok(m);
        }
    }
    Err(Error::cap(format!("shrinking sequence never reaches length 2^-{k}"), limit))
}

/// Term `n` is the left end of the first interval of length `<= 2^{-(n+1)}`.
pub fn regular_from_shrinking(s: &ShrinkingReal) -> RegularReal {
    let s = s.clone();
    RegularReal::from_fn(move |n| {
        let m = shrink_index(&s, n + 1)?;
        Ok(s.interval(m)?.lo().clone())
    })
}

/// `I_n = (r_{n+1} - 2^{-(n+1)}, r_{n+1} + 2^{-(n+1)})` with convergence `k ↦ k`.
pub fn shrinking_from_regular(x: &RegularReal) -> ShrinkingReal {
    let x = x.clone();
    ShrinkingReal::new(move |n| Ok(RatInterval::centered(&x.term(n + 1)?, &pow2_neg(n + 1))), |k| k)
}

/// `max` of two regular reals, term-wise.
pub fn regular_max(x: &RegularReal, y: &RegularReal) -> RegularReal {
    let (x, y) = (x.clone(), y.clone());
    RegularReal::from_fn(move |n| Ok(max(&x.term(n)?, &y.term(n)?)))
}
