//! The Cantor discontinuum: `κ`, middle-third intervals, the scale `L`, the
//! binary path `γ_α` of a spread path, and immediate neighbours of binary words.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::digits::{BinaryStream, BinaryWord, TernaryStream};
use crate::rational::{pow3_neg, RatInterval, Rational};
use crate::real::{regular_from_fundamental, FundamentalReal, RegularReal};
use crate::spread::node_interval_digits;

/// `L(k)`: the least `n` with `2^{-n} <= 3^{-k}`.
pub fn ternary_scale(k: usize) -> usize {
    if k <= 80 {
        let target = 3u128.pow(k as u32);
        let mut n = 0;
        while (1u128 << n) < target {
            n += 1;
        }
        return n;
    }
    let target = BigUint::from(3u32).pow(k as u32);
    let mut n = 0usize;
    let mut p = BigUint::one();
    while p < target {
        p <<= 1;
        n += 1;
    }
    n
}

/// `Σ_{i<|s|} 2 s_i 3^{-(i+1)}`.
fn cantor_sum(bits: &[u8]) -> Rational {
    let mut acc = Rational::zero();
    let mut scale = Rational::one();
    for &b in bits {
        scale /= Rational::from_integer(3.into());
        if b == 1 {
            acc += &scale * Rational::from_integer(2.into());
        }
    }
    acc
}

/// `C_s = [Σ, Σ + 3^{-|s|}]`.
pub fn cantor_interval_bits(bits: &[u8]) -> RatInterval {
    let lo = cantor_sum(bits);
    let hi = &lo + pow3_neg(bits.len());
    RatInterval::new_unchecked(lo, hi)
}

pub fn cantor_interval(s: &BinaryWord) -> RatInterval {
    cantor_interval_bits(s.digits())
}

/// `κ(β)`: partial sums `Σ_{i<n} 2β_i 3^{-(i+1)}` with modulus `L`, regularized.
pub fn kappa(beta: &BinaryStream) -> RegularReal {
    regular_from_fundamental(&kappa_fundamental(beta))
}

pub fn kappa_fundamental(beta: &BinaryStream) -> FundamentalReal {
    let beta = beta.clone();
    FundamentalReal::new(move |n| Ok(cantor_sum(&beta.prefix_digits(n)?)), ternary_scale)
}

/// `γ_α`: digit `n` is `0` iff `snd I_{ᾱL(n+1)} < fst C_{γ̄n * ⟨1⟩}`.
///
/// Digit `n` depends on exactly `ᾱL(n+1)`.
pub fn gamma(alpha: &TernaryStream) -> BinaryStream {
    let alpha = alpha.clone();
    BinaryStream::from_step(move |n, prev| {
        let i = node_interval_digits(&alpha.prefix_digits(ternary_scale(n + 1))?);
        let mut w = prev.to_vec();
        w.push(1);
        let c = cantor_interval_bits(&w);
        Ok(if i.hi() < c.lo() { 0 } else { 1 })
    })
}

/// Immediate predecessor and successor among words of the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborPair {
    pub pred: Option<BinaryWord>,
    pub succ: Option<BinaryWord>,
}

/// `u*1*0^m ↦ u*0*1^m` to the left and `u*0*1^m ↦ u*1*0^m` to the right.
pub fn immediate_neighbors(s: &BinaryWord) -> NeighborPair {
    NeighborPair { pred: step(s.digits(), 1), succ: step(s.digits(), 0) }
}

/// Flips the last `pivot` digit and inverts the tail after it.
fn step(d: &[u8], pivot: u8) -> Option<BinaryWord> {
    let j = d.iter().rposition(|&b| b == pivot)?;
    let mut w = d.to_vec();
    w[j] = 1 - pivot;
    for b in &mut w[j + 1..] {
        *b = pivot;
    }
    Some(BinaryWord::from_vec_unchecked(w))
}

/// The inductive relation: `s*0 < s*1`, and `s < t` gives `s*1 < t*0`.
pub fn immediately_precedes(s: &BinaryWord, t: &BinaryWord) -> bool {
    fn go(s: &[u8], t: &[u8]) -> bool {
        match (s.split_last(), t.split_last()) {
            (Some((&a, s0)), Some((&b, t0))) => (a == 0 && b == 1 && s0 == t0) || (a == 1 && b == 0 && go(s0, t0)),
            _ => false,
        }
    }
    s.len() == t.len() && go(s.digits(), t.digits())
}
