//! The ternary spread coding of `[0,1]`.
//!
//! A word `s` over `{0,1,2}` gets the number `N(⟨⟩) = 1`,
//! `N(s*i) = 2N(s) + i - 1` and the dyadic interval
//! `I_s = [2^{-(|s|+1)}(N(s) - 1), 2^{-(|s|+1)}(N(s) + 1)]`.
//! A path `α` denotes the real `Φ(α)` with terms `2^{-(n+1)} N(ᾱn)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::digits::{TernaryStream, TernaryWord};
use crate::error::{Error, Result};
use crate::rational::{dyadic_rat, max, min, pow2_neg, RatInterval, Rational};
use crate::real::RegularReal;
use crate::seq::LazySeq;

/// `N(s)` for a ternary digit slice.
pub fn node_number_digits(s: &[u8]) -> BigUint {
    if s.len() <= 120 {
        let mut n: u128 = 1;
        for &d in s {
            n = 2 * n + d as u128 - 1;
        }
        return BigUint::from(n);
    }
    let mut n = BigUint::one();
    for &d in s {
        n = (n << 1) + d as u32;
        n -= 1u32;
    }
    n
}

pub fn node_number(s: &TernaryWord) -> BigUint {
    node_number_digits(s.digits())
}

pub(crate) fn dyadic(num: BigUint, exp: usize) -> Rational {
    dyadic_rat(BigInt::from(num), exp)
}

/// `I_s` from its level and number.
pub fn numbered_interval(level: usize, n: &BigUint) -> RatInterval {
    let lo = if n.is_zero() { BigInt::from(-1) } else { BigInt::from(n - 1u32) };
    RatInterval::new_unchecked(dyadic_rat(lo, level + 1), dyadic_rat(BigInt::from(n + 1u32), level + 1))
}

pub fn node_interval_digits(s: &[u8]) -> RatInterval {
    numbered_interval(s.len(), &node_number_digits(s))
}

pub fn node_interval(s: &TernaryWord) -> RatInterval {
    node_interval_digits(s.digits())
}

/// `x^n_α = 2^{-(n+1)} N(ᾱn)`.
pub fn phi_term(alpha: &TernaryStream, n: usize) -> Result<Rational> {
    Ok(dyadic(node_number_digits(&alpha.prefix_digits(n)?), n + 1))
}

/// `Φ(α)` as a regular sequence.
pub fn phi(alpha: &TernaryStream) -> RegularReal {
    let alpha = alpha.clone();
    RegularReal::from_fn(move |n| phi_term(&alpha, n))
}

/// The path `α_x` read off the raw terms of `x`.
///
/// Digit `n` is the least `i` with `I^x_n ⊑ I_{ᾱn * i}`, where
/// `I^x_n = [max{r_{n+3} - 2^{-(n+3)}, 0}, min{r_{n+3} + 2^{-(n+3)}, 1}]`.
/// This reads the representation, not the real: equal reals given by different
/// sequences can yield different paths.
pub fn path_of_real(x: &RegularReal) -> TernaryStream {
    let x = x.clone();
    TernaryStream::from_step(move |n, prev| {
        let r = x.term(n + 3)?;
        let e = pow2_neg(n + 3);
        let lo = max(&(&r - &e), &Rational::zero());
        let hi = min(&(&r + &e), &Rational::one());
        if lo > hi {
            return Err(Error::NoCandidateChild { index: n });
        }
        let probe = RatInterval::new_unchecked(lo, hi);
        let parent = node_number_digits(prev);
        for i in 0..3u8 {
            let child: BigUint = (&parent << 1u32) + i as u32;
            if child.is_zero() {
                continue;
            }
            let child = child - 1u32;
            if probe.within(&numbered_interval(n + 1, &child)) {
                return Ok(i);
            }
        }
        Err(Error::NoCandidateChild { index: n })
    })
}

/// The local rewriting on windows of three digits.
pub fn rho_window(w: [u8; 3]) -> [u8; 3] {
    match w {
        [1, 2, 2] => [2, 0, 2],
        [1, 0, 0] => [0, 2, 0],
        [0, 2, 2] => [1, 0, 2],
        [2, 0, 0] => [1, 2, 0],
        other => other,
    }
}

/// The window `σ^n_α` carried by the rewriting at step `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoState {
    pub window: [u8; 3],
}

/// `ρ(α)` together with its window states.
#[derive(Clone)]
pub struct Rho {
    states: LazySeq<[u8; 3]>,
}

impl Rho {
    /// `σ^0 = ρ(α_0, α_1, α_2)`, `σ^{n+1} = ρ(σ^n_1, α_{n+2}, α_{n+3})`.
    pub fn new(alpha: &TernaryStream) -> Self {
        let alpha = alpha.clone();
        let states = LazySeq::sequential(move |n, prev: &[[u8; 3]]| {
            let w = if n == 0 {
                [alpha.digit(0)?, alpha.digit(1)?, alpha.digit(2)?]
            } else {
                [prev[n - 1][1], alpha.digit(n + 1)?, alpha.digit(n + 2)?]
            };
            Ok(rho_window(w))
        });
        Rho { states }
    }

    pub fn state(&self, n: usize) -> Result<RhoState> {
        Ok(RhoState { window: self.states.get(n)? })
    }

    /// Output digit `n` is `σ^n_0`.
    pub fn stream(&self) -> TernaryStream {
        let states = self.states.clone();
        TernaryStream::from_fn(move |n| Ok(states.get(n)?[0]))
    }
}

pub fn rho(alpha: &TernaryStream) -> TernaryStream {
    Rho::new(alpha).stream()
}

/// Lifts `x`, close to `Φ(ρ(α))`, to a path extending `ρ(α)↾n`.
///
/// Requires `|x - Φ(ρ(α))| < 2^{-(n+5)}`, checked at precision `n+7`. With
/// `β = α_x`, the first `s ∈ {0,1,2}^4` in lexicographic order with
/// `N(ρ(α)↾n * s) = N(β̄(n+4))` is taken and the result is `ρ(α)↾n * s * β[n+4..]`.
pub fn quotient_lift(alpha: &TernaryStream, n: usize, x: &RegularReal) -> Result<TernaryStream> {
    let r = rho(alpha);
    let p = n + 7;
    let gap = (x.approx(p)? - phi(&r).approx(p)?).abs();
    if gap >= pow2_neg(n + 5) + pow2_neg(n + 6) {
        return Err(Error::NoLiftFound);
    }
    let beta = path_of_real(x);
    let target = node_number_digits(&beta.prefix_digits(n + 4)?);
    let head = r.prefix_digits(n)?;
    for s in TernaryWord::all_of_length(4) {
        let mut w = head.clone();
        w.extend_from_slice(s.digits());
        if node_number_digits(&w) == target {
            let word = TernaryWord::from_vec_unchecked(w);
            return Ok(TernaryStream::splice(&word, &beta, n + 4));
        }
    }
    Err(Error::NoLiftFound)
}
