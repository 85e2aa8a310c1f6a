//! Finite words and infinite digit streams over `{0,1}` and `{0,1,2}`.

use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::seq::LazySeq;

pub trait Alphabet: Copy + Send + Sync + 'static {
    const SIZE: u8;
    const NAME: &'static str;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ternary;

impl Alphabet for Binary {
    const SIZE: u8 = 2;
    const NAME: &'static str = "binary";
}

impl Alphabet for Ternary {
    const SIZE: u8 = 3;
    const NAME: &'static str = "ternary";
}

/// A finite word; every digit is below `A::SIZE`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word<A> {
    digits: Vec<u8>,
    _a: PhantomData<A>,
}

pub type BinaryWord = Word<Binary>;
pub type TernaryWord = Word<Ternary>;

impl<A: Alphabet> Word<A> {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d >= A::SIZE) {
            return Err(Error::invalid(format!("digit {d} out of range for {} word", A::NAME)));
        }
        Ok(Word { digits, _a: PhantomData })
    }

    pub(crate) fn from_vec_unchecked(digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < A::SIZE));
        Word { digits, _a: PhantomData }
    }

    pub fn empty() -> Self {
        Word { digits: Vec::new(), _a: PhantomData }
    }

    pub fn repeat(d: u8, n: usize) -> Self {
        assert!(d < A::SIZE);
        Word { digits: vec![d; n], _a: PhantomData }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn push(&mut self, d: u8) {
        assert!(d < A::SIZE);
        self.digits.push(d);
    }

    pub fn child(&self, d: u8) -> Self {
        let mut w = self.clone();
        w.push(d);
        w
    }

    pub fn concat(&self, other: &Word<A>) -> Self {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word { digits, _a: PhantomData }
    }

    pub fn prefix(&self, n: usize) -> Self {
        Word { digits: self.digits[..n.min(self.len())].to_vec(), _a: PhantomData }
    }

    pub fn is_prefix_of(&self, other: &Word<A>) -> bool {
        other.digits.starts_with(&self.digits)
    }

    /// `ŝ`: the word followed by zeros.
    pub fn hat(&self) -> DigitStream<A> {
        DigitStream::periodic(self.digits.clone(), 0)
    }

    /// `s̆`: the word followed by ones.
    pub fn breve(&self) -> DigitStream<A> {
        DigitStream::periodic(self.digits.clone(), 1)
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word<A>> {
        let total = (A::SIZE as usize).pow(n as u32);
        (0..total).map(move |mut i| {
            let mut digits = vec![0u8; n];
            for d in digits.iter_mut().rev() {
                *d = (i % A::SIZE as usize) as u8;
                i /= A::SIZE as usize;
            }
            Word { digits, _a: PhantomData }
        })
    }
}

impl<A: Alphabet> std::str::FromStr for Word<A> {
    type Err = Error;

    /// Bare digits; `ε` or the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Self::empty());
        }
        let digits = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::invalid(format!("bad digit {c:?} in {s:?}"))))
            .collect::<Result<Vec<u8>>>()?;
        Word::new(digits)
    }
}

impl<A> fmt::Display for Word<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl<A> fmt::Debug for Word<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[derive(Clone)]
enum Repr {
    /// `prefix[..len]` followed by the constant `tail`.
    Periodic { prefix: Arc<[u8]>, len: usize, tail: u8 },
    Lazy(LazySeq<u8>),
}

/// An infinite, memoized digit stream.
#[derive(Clone)]
pub struct DigitStream<A> {
    repr: Repr,
    _a: PhantomData<A>,
}

pub type BinaryStream = DigitStream<Binary>;
pub type TernaryStream = DigitStream<Ternary>;

impl<A> fmt::Debug for DigitStream<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Periodic { prefix, len, tail } => {
                for d in &prefix[..*len] {
                    write!(f, "{d}")?;
                }
                write!(f, "~{tail}")
            }
            Repr::Lazy(_) => f.write_str("DigitStream(..)"),
        }
    }
}

impl<A: Alphabet> DigitStream<A> {
    fn periodic(prefix: Vec<u8>, tail: u8) -> Self {
        let len = prefix.len();
        DigitStream { repr: Repr::Periodic { prefix: prefix.into(), len, tail }, _a: PhantomData }
    }

    pub fn constant(d: u8) -> Self {
        assert!(d < A::SIZE);
        Self::periodic(Vec::new(), d)
    }

    /// `word` followed by the constant digit `tail`.
    pub fn from_word(word: &Word<A>, tail: u8) -> Self {
        assert!(tail < A::SIZE);
        Self::periodic(word.digits.clone(), tail)
    }

    /// Digit `n` is `f(n)`; values are range checked on access.
    pub fn from_fn(f: impl Fn(usize) -> Result<u8> + Send + Sync + 'static) -> Self {
        DigitStream {
            repr: Repr::Lazy(LazySeq::indexed(move |n| {
                let d = f(n)?;
                check_digit::<A>(d)?;
                Ok(d)
            })),
            _a: PhantomData,
        }
    }

    /// Digit `n` is computed from all earlier digits.
    pub fn from_step(f: impl Fn(usize, &[u8]) -> Result<u8> + Send + Sync + 'static) -> Self {
        DigitStream {
            repr: Repr::Lazy(LazySeq::sequential(move |n, prev| {
                let d = f(n, prev)?;
                check_digit::<A>(d)?;
                Ok(d)
            })),
            _a: PhantomData,
        }
    }

    /// Draws digits from `next` in order; used for seeded random streams.
    pub fn from_generator(next: impl FnMut() -> u8 + Send + 'static) -> Self {
        let next = std::sync::Mutex::new(next);
        Self::from_step(move |_, _| {
            let mut g = next.lock().unwrap_or_else(|e| e.into_inner());
            Ok(g() % A::SIZE)
        })
    }

    /// Parses `DIGITS` or `DIGITS~d`; without a tail the word is extended by zeros.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (word, tail) = match s.split_once('~') {
            Some((w, t)) => {
                let t: u8 = t.trim().parse().map_err(|_| Error::invalid(format!("bad tail digit in {s:?}")))?;
                (w, t)
            }
            None => (s, 0),
        };
        check_digit::<A>(tail)?;
        let word: Word<A> = if word.is_empty() { Word::empty() } else { word.parse()? };
        Ok(Self::from_word(&word, tail))
    }

    pub fn digit(&self, n: usize) -> Result<u8> {
        match &self.repr {
            Repr::Periodic { prefix, len, tail } => Ok(if n < *len { prefix[n] } else { *tail }),
            Repr::Lazy(s) => s.get(n),
        }
    }

    /// `ᾱn`, the length-`n` prefix.
    pub fn prefix(&self, n: usize) -> Result<Word<A>> {
        Ok(Word::from_vec_unchecked(self.prefix_digits(n)?))
    }

    pub fn prefix_digits(&self, n: usize) -> Result<Vec<u8>> {
        match &self.repr {
            Repr::Periodic { prefix, len, tail } => {
                let mut v = prefix[..n.min(*len)].to_vec();
                v.resize(n, *tail);
                Ok(v)
            }
            Repr::Lazy(s) => s.prefix(n),
        }
    }

    /// `ᾱn` followed by `tail`; cheap when the stream is itself periodic.
    pub fn truncate(&self, n: usize, tail: u8) -> Result<Self> {
        if let Repr::Periodic { prefix, len, tail: t } = &self.repr {
            if n <= *len || *t == tail {
                return Ok(DigitStream {
                    repr: Repr::Periodic { prefix: prefix.clone(), len: n.min(*len), tail },
                    _a: PhantomData,
                });
            }
        }
        Ok(Self::periodic(self.prefix_digits(n)?, tail))
    }

    /// `hat(ᾱn)`.
    pub fn hat_prefix(&self, n: usize) -> Result<Self> {
        self.truncate(n, 0)
    }

    /// `breve(ᾱn)`.
    pub fn breve_prefix(&self, n: usize) -> Result<Self> {
        self.truncate(n, 1)
    }

    /// `w * α`.
    pub fn prepend(&self, w: &Word<A>) -> Self {
        let head = w.digits.clone();
        let rest = self.clone();
        Self::from_fn(move |n| if n < head.len() { Ok(head[n]) } else { rest.digit(n - head.len()) })
    }

    /// `w` followed by the digits of `self` from index `from` on.
    pub fn splice(w: &Word<A>, tail: &DigitStream<A>, from: usize) -> Self {
        let head = w.digits.clone();
        let rest = tail.clone();
        Self::from_fn(move |n| if n < head.len() { Ok(head[n]) } else { rest.digit(n - head.len() + from) })
    }

    pub fn to_string_prefix(&self, n: usize) -> Result<String> {
        Ok(self.prefix_digits(n)?.iter().map(|d| char::from(b'0' + d)).collect())
    }
}

fn check_digit<A: Alphabet>(d: u8) -> Result<()> {
    if d >= A::SIZE {
        return Err(Error::invalid(format!("digit {d} out of range for {} stream", A::NAME)));
    }
    Ok(())
}
