//! Constructive real numbers over the ternary spread.
//!
//! Reals are regular rational sequences, fundamental sequences with a modulus,
//! or shrinking interval sequences. Points of `[0,1]` are coded by infinite
//! paths through the ternary spread, Cantor points by bit streams. On top of
//! that sit continuity moduli, a fan search for decidable bars, the real
//! function built from a bar, and interval codes of continuous functions.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

pub mod bar;
pub mod cantor;
pub mod cli;
pub mod code;
pub mod digits;
pub mod encode;
pub mod error;
pub mod moduli;
pub mod rational;
pub mod real;
pub mod seq;
pub mod spread;

pub use digits::{Binary, BinaryStream, BinaryWord, DigitStream, Ternary, TernaryStream, TernaryWord, Word};
pub use error::{Error, Result};
pub use rational::{RatInterval, Rational};
pub use real::{FundamentalReal, RegularReal, ShrinkingReal, Trichotomy};

/// Default budget for unbounded searches (tree nodes or indices).
pub const DEFAULT_SEARCH_CAP: usize = 1 << 16;

static SEARCH_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SEARCH_CAP);

thread_local! {
    static LOCAL_CAP: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Budget used by searches that take no explicit cap.
pub fn search_cap() -> usize {
    LOCAL_CAP.with(|c| c.get()).unwrap_or_else(|| SEARCH_CAP.load(Ordering::Relaxed))
}

pub fn set_search_cap(cap: usize) {
    SEARCH_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Runs `f` with a thread-local search cap.
pub fn with_search_cap<T>(cap: usize, f: impl FnOnce() -> T) -> T {
    let prev = LOCAL_CAP.with(|c| c.replace(Some(cap.max(1))));
    struct Restore(Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            LOCAL_CAP.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(prev);
    f()
}
