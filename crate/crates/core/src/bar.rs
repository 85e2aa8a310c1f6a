//! Decidable bars on the binary fan and the real function they induce on `[0,1]`.
//!
//! For a spread path `α`, let `N_α` be the hitting time of `γ_α`, `u = γ̄_α N_α`
//! and `s`, `t` the immediate neighbours of `u`. The function is read off a
//! piecewise linear map that is constant `N_α` on `C_u` and climbs linearly to
//! the hitting times of `s̆` and `t̂` at the ends of `C_s` and `C_t`.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::cantor::{cantor_interval, gamma, immediate_neighbors, kappa, ternary_scale, NeighborPair};
use crate::digits::{Binary, BinaryStream, BinaryWord, TernaryStream};
use crate::error::{Error, Result};
use crate::moduli::{fan_uniform_depth, TernaryModulus};
use crate::rational::{ceil_log2, int, pow2_neg, RatInterval, Rational};
use crate::real::{eq_at, RegularReal};
use crate::search_cap;
use crate::spread::{node_interval_digits, path_of_real, phi_term};

type Member = dyn Fn(&[u8]) -> bool + Send + Sync;

/// A decidable set of binary words, optionally generated by a finite prefix list.
#[derive(Clone)]
pub struct DecidableBar {
    member: Arc<Member>,
    source: Option<Vec<BinaryWord>>,
}

impl fmt::Debug for DecidableBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Some(ws) => write!(f, "DecidableBar({})", ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")),
            None => f.write_str("DecidableBar(<predicate>)"),
        }
    }
}

impl DecidableBar {
    pub fn new(member: impl Fn(&[u8]) -> bool + Send + Sync + 'static) -> Self {
        DecidableBar { member: Arc::new(member), source: None }
    }

    /// Words having one of `words` as a prefix.
    pub fn from_prefixes(words: Vec<BinaryWord>) -> Self {
        let gens: Vec<Vec<u8>> = words.iter().map(|w| w.digits().to_vec()).collect();
        DecidableBar { member: Arc::new(move |s| gens.iter().any(|g| s.starts_with(g))), source: Some(words) }
    }

    /// `{s : |s| >= d}`.
    pub fn min_length(d: usize) -> Self {
        Self::from_prefixes(BinaryWord::all_of_length(d).collect())
    }

    /// One binary word per line; `ε` is the empty word, blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w: BinaryWord = line.parse().map_err(|_| Error::invalid(format!("bar line {}: {line:?}", i + 1)))?;
            words.push(w);
        }
        Ok(Self::from_prefixes(words))
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        (self.member)(s)
    }

    pub fn source(&self) -> Option<&[BinaryWord]> {
        self.source.as_deref()
    }
}

/// Least `n < cap` with `ᾱn ∈ B`.
pub fn hitting_time(bar: &DecidableBar, alpha: &BinaryStream, cap: usize) -> Result<usize> {
    let mut prefix = Vec::new();
    for n in 0..cap {
        if bar.contains(&prefix) {
            return Ok(n);
        }
        prefix.push(alpha.digit(n)?);
    }
    Err(Error::cap("hitting time", cap))
}

/// A continuous piecewise linear map given by breakpoints with increasing `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearMap {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinearMap {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("piecewise linear map without breakpoints"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("breakpoints must have strictly increasing x"));
        }
        Ok(PiecewiseLinearMap { points })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn domain(&self) -> RatInterval {
        RatInterval::new_unchecked(self.points[0].0.clone(), self.points[self.points.len() - 1].0.clone())
    }

    /// Linear interpolation; constant beyond the ends.
    pub fn eval(&self, x: &Rational) -> Rational {
        let p = &self.points;
        if *x <= p[0].0 {
            return p[0].1.clone();
        }
        for w in p.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        p[p.len() - 1].1.clone()
    }

    pub fn max_abs_slope(&self) -> Rational {
        self.points
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Everything the construction reads off one spread path.
#[derive(Clone, Debug)]
pub struct Plateau {
    /// `N_α`.
    pub hitting: usize,
    /// `γ̄_α N_α`.
    pub word: BinaryWord,
    pub neighbors: NeighborPair,
    pub map: PiecewiseLinearMap,
    /// `⌈log₂ max(S, 1)⌉` for the maximal slope `S`.
    pub slope_bits: usize,
    pub flat: bool,
}

/// The real function on `[0,1]` induced by a decidable bar.
#[derive(Clone, Debug)]
pub struct BarFunction {
    bar: DecidableBar,
}

impl BarFunction {
    pub fn new(bar: DecidableBar) -> Self {
        BarFunction { bar }
    }

    pub fn bar(&self) -> &DecidableBar {
        &self.bar
    }

    fn trivial(&self) -> bool {
        self.bar.contains(&[])
    }

    /// `None` when the empty word is barred.
    pub fn plateau_map(&self, alpha: &TernaryStream) -> Result<Option<Plateau>> {
        if self.trivial() {
            return Ok(None);
        }
        let cap = search_cap();
        let g = gamma(alpha);
        let n = hitting_time(&self.bar, &g, cap)?;
        let u = g.prefix(n)?;
        let neighbors = immediate_neighbors(&u);
        let cu = cantor_interval(&u);
        let level = int(n as i64);
        let mut points = Vec::new();
        if let Some(s) = &neighbors.pred {
            let xi = hitting_time(&self.bar, &s.breve(), cap)?;
            points.push((cantor_interval(s).hi().clone(), int(xi as i64)));
        }
        points.push((cu.lo().clone(), level.clone()));
        points.push((cu.hi().clone(), level));
        if let Some(t) = &neighbors.succ {
            let psi = hitting_time(&self.bar, &t.hat(), cap)?;
            points.push((cantor_interval(t).lo().clone(), int(psi as i64)));
        }
        let map = PiecewiseLinearMap::new(points)?;
        let slope = map.max_abs_slope();
        Ok(Some(Plateau { hitting: n, word: u, neighbors, slope_bits: ceil_log2(&slope), flat: slope.is_zero(), map }))
    }

    /// `F_α(x^{δ(n+1)}_α)` with `δ(k) = max{L(N_α), k + 1 + c}`.
    pub fn eval_ternary(&self, alpha: &TernaryStream) -> Result<RegularReal> {
        let Some(p) = self.plateau_map(alpha)? else {
            return Ok(RegularReal::constant(Rational::zero()));
        };
        let alpha = alpha.clone();
        let start = ternary_scale(p.hitting);
        let c = p.slope_bits;
        Ok(RegularReal::from_fn(move |n| {
            let d = start.max(n + 2 + c);
            Ok(p.map.eval(&phi_term(&alpha, d)?))
        }))
    }

    pub fn eval(&self, x: &RegularReal) -> Result<RegularReal> {
        self.eval_ternary(&path_of_real(x))
    }

    /// Least `n` separating `I_{ᾱL(N_α)}` from the neighbouring Cantor intervals by `2^{-n}`.
    pub fn separation(&self, alpha: &TernaryStream, p: &Plateau) -> Result<usize> {
        let i = node_interval_digits(&alpha.prefix_digits(ternary_scale(p.hitting))?);
        let left = p.neighbors.pred.as_ref().map(|s| cantor_interval(s).hi().clone());
        let right = p.neighbors.succ.as_ref().map(|t| cantor_interval(t).lo().clone());
        let cap = search_cap();
        for n in 0..cap {
            let e = pow2_neg(n);
            let l = left.as_ref().is_none_or(|s| *s < i.lo() - &e);
            let r = right.as_ref().is_none_or(|t| i.hi() + &e < *t);
            if l && r {
                return Ok(n);
            }
        }
        Err(Error::cap("separation index", cap))
    }

    /// `g_k(α) = max{N, ω(k) + 1}` with `ω(k) = k + c`, or `ω ≡ 0` on a flat plateau.
    pub fn modulus(&self) -> TernaryModulus {
        let f = self.clone();
        TernaryModulus::new(move |k, alpha: &TernaryStream| {
            let Some(p) = f.plateau_map(alpha)? else {
                return Ok(0);
            };
            let sep = f.separation(alpha, &p)?;
            let omega = if p.flat { 0 } else { k + p.slope_bits };
            Ok(sep.max(omega + 1))
        })
        .with_flags(false, true)
    }
}

/// Checks `f(κ(β)) ≃ hitting_time(B, β)` at depth `prec`.
pub fn verify_hitting(bar: &DecidableBar, beta: &BinaryStream, prec: usize) -> Result<bool> {
    let n = hitting_time(bar, beta, search_cap())?;
    let f = BarFunction::new(bar.clone());
    eq_at(&f.eval(&kappa(beta))?, &RegularReal::constant(int(n as i64)), prec)
}

/// Least `N` bounding every hitting time; the fan search on the bar.
pub fn bar_uniform_bound(bar: &DecidableBar, cap: usize) -> Result<usize> {
    fan_uniform_depth::<Binary>(|s| Ok(bar.contains(s)), cap)
}
