#![allow(dead_code)]

use conreal::bar::DecidableBar;
use conreal::rational::rat;
use conreal::{BinaryStream, BinaryWord, Rational, RegularReal, TernaryStream, TernaryWord};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub const WALK_STEPS: usize = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random walk `x_{n+1} = x_n + e_n` with `|e_n| <= 2^{-(n+1+shift)}`, constant after
/// `WALK_STEPS` terms; regular for every `shift >= 0`.
pub fn walk_terms(r: &mut ChaCha8Rng, start: Rational, shift: usize) -> Vec<Rational> {
    let mut terms = vec![start];
    for n in 0..WALK_STEPS {
        let num: i64 = r.gen_range(-16..=16);
        let den = BigInt::from(16) << (n + 1 + shift);
        let next = terms[n].clone() + Rational::new(BigInt::from(num), den);
        terms.push(next);
    }
    terms
}

pub fn from_terms(terms: Vec<Rational>) -> RegularReal {
    RegularReal::from_fn(move |n| Ok(terms[n.min(terms.len() - 1)].clone()))
}

/// A regular real anywhere in `[-3, 3]`.
pub fn random_regular(r: &mut ChaCha8Rng) -> RegularReal {
    let q: i64 = r.gen_range(1..=100);
    let p: i64 = r.gen_range(-2 * q..=2 * q);
    from_terms(walk_terms(r, rat(p, q), 0))
}

/// A regular real in `[1/8, 7/8]`.
pub fn random_unit_regular(r: &mut ChaCha8Rng) -> RegularReal {
    let q: i64 = r.gen_range(4..=200);
    let p: i64 = r.gen_range((q + 3) / 4..=(3 * q) / 4);
    from_terms(walk_terms(r, rat(p, q), 3))
}

pub fn random_ternary(r: &mut ChaCha8Rng, len: usize) -> TernaryStream {
    let digits: Vec<u8> = (0..len).map(|_| r.gen_range(0..3)).collect();
    let tail = r.gen_range(0..3);
    TernaryStream::from_word(&TernaryWord::new(digits).unwrap(), tail)
}

pub fn random_binary(r: &mut ChaCha8Rng, len: usize) -> BinaryStream {
    let digits: Vec<u8> = (0..len).map(|_| r.gen_range(0..2)).collect();
    let tail = r.gen_range(0..2);
    BinaryStream::from_word(&BinaryWord::new(digits).unwrap(), tail)
}

/// The leaves of a random binary tree of depth at most `depth`: a prefix-free
/// set of words that every path meets.
pub fn random_antichain(r: &mut ChaCha8Rng, depth: usize) -> Vec<BinaryWord> {
    fn grow(r: &mut ChaCha8Rng, w: Vec<u8>, depth: usize, out: &mut Vec<BinaryWord>) {
        let stop = w.len() == depth || (!w.is_empty() && r.gen_bool(0.35));
        if stop {
            out.push(BinaryWord::new(w).unwrap());
            return;
        }
        for b in 0..2 {
            let mut c = w.clone();
            c.push(b);
            grow(r, c, depth, out);
        }
    }
    let mut out = Vec::new();
    grow(r, Vec::new(), depth, &mut out);
    out
}

pub fn antichain_bar(words: &[BinaryWord]) -> DecidableBar {
    DecidableBar::from_prefixes(words.to_vec())
}
