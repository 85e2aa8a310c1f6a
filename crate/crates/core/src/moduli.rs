//! Continuity moduli on streams and on raw regular sequences, and the fan
//! search that bounds a decidable bar.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::digits::{Alphabet, BinaryStream, DigitStream, TernaryStream, Word};
use crate::error::{Error, Result};
use crate::rational::{pow2_neg, Rational};
use crate::real::RegularReal;
use crate::search_cap;
use crate::seq::LazySeq;
use crate::spread::{path_of_real, phi};

type EvalFn<P> = dyn Fn(usize, &P) -> Result<usize> + Send + Sync;

/// A family `g_k` assigning each point a lookahead depth.
pub struct ModulusFamily<P> {
    eval: Arc<EvalFn<P>>,
    /// `ᾱ g_k(α) = β̄ g_k(α)` implies `g_k(α) = g_k(β)`.
    pub self_modulus: bool,
    /// `g_k(α) <= g_{k+1}(α)`.
    pub monotone: bool,
}

impl<P> Clone for ModulusFamily<P> {
    fn clone(&self) -> Self {
        ModulusFamily { eval: Arc::clone(&self.eval), self_modulus: self.self_modulus, monotone: self.monotone }
    }
}

impl<P> fmt::Debug for ModulusFamily<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulusFamily")
            .field("self_modulus", &self.self_modulus)
            .field("monotone", &self.monotone)
            .finish_non_exhaustive()
    }
}

pub type TernaryModulus = ModulusFamily<TernaryStream>;
pub type CantorModulus = ModulusFamily<BinaryStream>;
/// A modulus on the underlying set of `[0,1]`: it may read raw terms.
pub type IntensionalModulus = ModulusFamily<RegularReal>;

impl<P: 'static> ModulusFamily<P> {
    pub fn new(f: impl Fn(usize, &P) -> Result<usize> + Send + Sync + 'static) -> Self {
        ModulusFamily { eval: Arc::new(f), self_modulus: false, monotone: false }
    }

    /// `g_k` independent of the point; such a family is its own modulus.
    pub fn constant(f: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        ModulusFamily { eval: Arc::new(move |k, _| Ok(f(k))), self_modulus: true, monotone: false }
    }

    pub fn with_flags(mut self, self_modulus: bool, monotone: bool) -> Self {
        self.self_modulus = self_modulus;
        self.monotone = monotone;
        self
    }

    pub fn eval(&self, k: usize, p: &P) -> Result<usize> {
        (self.eval)(k, p)
    }
}

/// `G_k(α)`: the least `n` with `g_{k+1}(hat(ᾱn)) < n`.
pub fn self_modulus<A: Alphabet>(g: &ModulusFamily<DigitStream<A>>) -> ModulusFamily<DigitStream<A>> {
    let g = g.clone();
    let monotone = g.monotone;
    ModulusFamily::new(move |k, alpha: &DigitStream<A>| {
        let cap = search_cap();
        for n in 0..=cap {
            if g.eval(k + 1, &alpha.hat_prefix(n)?)? < n {
                return Ok(n);
            }
        }
        Err(Error::cap(format!("self-modulus search at k={k}"), cap))
    })
    .with_flags(true, monotone)
}

/// `G_k = max{g_i : i <= k}`.
pub fn monotonize<P: 'static>(g: &ModulusFamily<P>) -> ModulusFamily<P> {
    let flag = g.self_modulus;
    let g = g.clone();
    ModulusFamily::new(move |k, p: &P| {
        let mut m = 0;
        for i in 0..=k {
            m = m.max(g.eval(i, p)?);
        }
        Ok(m)
    })
    .with_flags(flag, true)
}

/// Least `n <= bound` such that `f(hat(a)) = f(hat(a*b))` for all `a` of
/// length `n` and `b` of length `bound - n`.
pub fn least_uc_modulus<A: Alphabet>(f: &dyn Fn(&DigitStream<A>) -> Result<usize>, bound: usize) -> Result<usize> {
    let full: Vec<usize> = Word::<A>::all_of_length(bound).map(|w| f(&w.hat())).collect::<Result<_>>()?;
    let base = A::SIZE as usize;
    for n in 0..bound {
        let block = base.pow((bound - n) as u32);
        let mut ok = true;
        for (j, a) in Word::<A>::all_of_length(n).enumerate() {
            let v = f(&a.hat())?;
            if full[j * block..(j + 1) * block].iter().any(|&x| x != v) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(n);
        }
    }
    Ok(bound)
}

/// Depth cap and node budget for fan searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanLimits {
    pub depth: usize,
    pub nodes: usize,
}

impl FanLimits {
    pub fn new(depth: usize, nodes: usize) -> Self {
        FanLimits { depth, nodes }
    }

    /// Depth cap `depth`, node budget from the global search cap.
    pub fn depth(depth: usize) -> Self {
        FanLimits { depth, nodes: search_cap() }
    }
}

/// Least `N` such that every word of length `N` has a barred prefix.
///
/// Fails when some unbarred word reaches the depth cap or the node budget is spent.
pub fn fan_uniform_depth<A: Alphabet>(bar: impl FnMut(&[u8]) -> Result<bool>, cap: usize) -> Result<usize> {
    fan_uniform_depth_with::<A>(bar, FanLimits::depth(cap))
}

pub fn fan_uniform_depth_with<A: Alphabet>(mut bar: impl FnMut(&[u8]) -> Result<bool>, limits: FanLimits) -> Result<usize> {
    let mut visited = 1usize;
    if bar(&[])? {
        return Ok(0);
    }
    if limits.depth == 0 {
        return Err(Error::cap("fan search: unbarred path at depth cap", 0));
    }
    let mut best = 0;
    let mut path: Vec<u8> = Vec::new();
    let mut next: Vec<u8> = vec![0];
    while let Some(top) = next.last_mut() {
        if *top == A::SIZE {
            next.pop();
            path.pop();
            continue;
        }
        path.push(*top);
        *top += 1;
        visited += 1;
        if visited > limits.nodes {
            return Err(Error::cap("fan search node budget", limits.nodes));
        }
        if bar(&path)? {
            best = best.max(path.len());
            path.pop();
        } else if path.len() >= limits.depth {
            return Err(Error::cap("fan search: unbarred path at depth cap", limits.depth));
        } else {
            next.push(0);
        }
    }
    Ok(best)
}

/// A monotone modulus of uniform continuity `ω`, computed lazily and memoized.
#[derive(Clone)]
pub struct UniformModulus {
    values: LazySeq<usize>,
}

impl fmt::Debug for UniformModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("UniformModulus(..)")
    }
}

impl UniformModulus {
    /// Normalizes `raw` to its running maximum.
    pub fn new(raw: impl Fn(usize) -> Result<usize> + Send + Sync + 'static) -> Self {
        UniformModulus {
            values: LazySeq::sequential(move |k, prev: &[usize]| {
                let v = raw(k)?;
                Ok(prev.last().map_or(v, |&p| p.max(v)))
            }),
        }
    }

    /// Known values for `k < known.len()`, `raw` beyond.
    pub fn with_prefix(known: Vec<usize>, raw: impl Fn(usize) -> Result<usize> + Send + Sync + 'static) -> Self {
        Self::new(move |k| if k < known.len() { Ok(known[k]) } else { raw(k) })
    }

    pub fn get(&self, k: usize) -> Result<usize> {
        self.values.get(k)
    }

    pub fn prefix(&self, n: usize) -> Result<Vec<usize>> {
        self.values.prefix(n)
    }
}

/// `ω(k) = max{g_{k+1}(hat s) : |s| = N_k}`, with `N_k` the least uniform modulus
/// of `g_{k+1}`, bounded first by a fan search on `g_{k+1}(hat s) <= |s|`.
pub fn pointwise_to_uniform_modulus<A: Alphabet>(g: &ModulusFamily<DigitStream<A>>, cap: usize) -> UniformModulus {
    let g = g.clone();
    UniformModulus::new(move |k| {
        let depth = fan_uniform_depth::<A>(|s| Ok(g.eval(k + 1, &DigitStream::from_word(&Word::from_vec_unchecked(s.to_vec()), 0))? <= s.len()), cap)?;
        let nk = least_uc_modulus::<A>(&|a| g.eval(k + 1, a), depth)?;
        let mut m = 0;
        for s in Word::<A>::all_of_length(nk) {
            m = m.max(g.eval(k + 1, &s.hat())?);
        }
        Ok(m)
    })
}

/// `h_k(α) = g_k(Φ(α))`.
pub fn ternary_from_intensional(g: &IntensionalModulus) -> TernaryModulus {
    let g = g.clone();
    ModulusFamily::new(move |k, a: &TernaryStream| g.eval(k, &phi(a)))
}

/// `h_k(x) = g_k(α_x)`.
pub fn intensional_from_ternary(g: &TernaryModulus) -> IntensionalModulus {
    let g = g.clone();
    ModulusFamily::new(move |k, x: &RegularReal| g.eval(k, &path_of_real(x)))
}

type PointFn = dyn Fn(&RegularReal) -> Result<RegularReal> + Send + Sync;

#[derive(Clone, Debug)]
pub enum FnModulus {
    Intensional(IntensionalModulus),
    Ternary(TernaryModulus),
}

/// A function on the underlying set of `[0,1]` with a continuity modulus.
#[derive(Clone)]
pub struct ModulatedRealFn {
    point_fn: Arc<PointFn>,
    pub modulus: FnModulus,
}

impl fmt::Debug for ModulatedRealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulatedRealFn").field("modulus", &self.modulus).finish_non_exhaustive()
    }
}

impl ModulatedRealFn {
    pub fn new(f: impl Fn(&RegularReal) -> Result<RegularReal> + Send + Sync + 'static, modulus: FnModulus) -> Self {
        ModulatedRealFn { point_fn: Arc::new(f), modulus }
    }

    pub fn apply(&self, x: &RegularReal) -> Result<RegularReal> {
        (self.point_fn)(x)
    }

    /// The same function with its modulus read through spread paths.
    pub fn ternary_modulus(&self) -> TernaryModulus {
        match &self.modulus {
            FnModulus::Ternary(g) => g.clone(),
            FnModulus::Intensional(g) => ternary_from_intensional(g),
        }
    }
}

/// A sample point: a raw real or a spread path denoting `Φ(α)`.
#[derive(Clone, Debug)]
pub enum SamplePoint {
    Real(RegularReal),
    Path(TernaryStream),
}

impl SamplePoint {
    pub fn value(&self) -> RegularReal {
        match self {
            SamplePoint::Real(x) => x.clone(),
            SamplePoint::Path(a) => phi(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusViolation {
    pub pair: usize,
    pub k: usize,
    pub distance: Rational,
    pub output_gap: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModulusReport {
    /// Number of `(pair, k)` combinations whose premise held.
    pub checked: usize,
    pub violations: Vec<ModulusViolation>,
}

impl ModulusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each pair and `k <= kmax` with `approx(|x - y|, prec) <= 2^{-g_k(x)}`,
/// checks `approx(|f x - f y|, prec) <= 2^{-k} + 2^{-prec+1}`.
pub fn check_modulus(f: &ModulatedRealFn, pairs: &[(SamplePoint, RegularReal)], kmax: usize, prec: usize) -> Result<ModulusReport> {
    let mut report = ModulusReport::default();
    let slack = pow2_neg(prec.saturating_sub(1));
    for (i, (p, y)) in pairs.iter().enumerate() {
        let x = p.value();
        let distance = x.sub(y).abs().approx(prec)?;
        let mut gap = None;
        for k in 0..=kmax {
            let g = match (&f.modulus, p) {
                (FnModulus::Intensional(g), _) => g.eval(k, &x)?,
                (FnModulus::Ternary(g), SamplePoint::Path(a)) => g.eval(k, a)?,
                (FnModulus::Ternary(g), SamplePoint::Real(x)) => g.eval(k, &path_of_real(x))?,
            };
            if distance > pow2_neg(g) {
                continue;
            }
            report.checked += 1;
            if gap.is_none() {
                gap = Some(f.apply(&x)?.sub(&f.apply(y)?).abs().approx(prec)?);
            }
            let d = gap.clone().unwrap_or_default();
            if d > pow2_neg(k) + &slack {
                report.violations.push(ModulusViolation { pair: i, k, distance: distance.clone(), output_gap: d.abs() });
            }
        }
    }
    Ok(report)
}
