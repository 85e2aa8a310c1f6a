//! Codes of continuous functions: maps from ternary words to naturals that
//! encode nested rational intervals (`0` means no information yet).
//!
//! A code `φ` is valid when
//! - C1: `φ(s) ≠ 0` implies `φ(s) - 1` decodes to an interval;
//! - C2: along every path and for every `k` some prefix has an interval of length `<= 2^{-k}`;
//! - C3: `φ(s) ≠ 0` implies `φ(s*i) ≠ 0` with the child interval inside the parent's;
//! - C4: nonzero entries on touching spread intervals have touching intervals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::digits::{DigitStream, Ternary, TernaryStream, TernaryWord, Word};
use crate::encode::{code_value, decode_code_value};
use crate::error::{Error, Result};
use crate::moduli::{fan_uniform_depth_with, monotonize, self_modulus, FanLimits, ModulatedRealFn, TernaryModulus, UniformModulus};
use crate::rational::{dyadic_rat, pow2_neg, RatInterval, Rational};
use crate::real::{regular_from_shrinking, RegularReal, ShrinkingReal};
use crate::search_cap;
use crate::spread::{node_interval_digits, node_number_digits, path_of_real, phi, rho};

/// A code; implementors override at least one of `value` and `interval`.
pub trait Code: Send + Sync {
    /// `φ(s)`.
    fn value(&self, s: &[u8]) -> Result<BigUint> {
        Ok(code_value(self.interval(s)?.as_ref()))
    }

    /// `φ(s) - 1` decoded, or `None` when `φ(s) = 0`.
    fn interval(&self, s: &[u8]) -> Result<Option<RatInterval>> {
        decode_code_value(&self.value(s)?)
    }

    /// Length of the entry at `s`; searches only need this.
    fn length(&self, s: &[u8]) -> Result<Option<Rational>> {
        Ok(self.interval(s)?.map(|i| i.length()))
    }
}

pub type SharedCode = Arc<dyn Code>;

/// `φ(s) = 1 + enc(I_s)`; induces the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityCode;

impl Code for IdentityCode {
    fn interval(&self, s: &[u8]) -> Result<Option<RatInterval>> {
        Ok(Some(node_interval_digits(s)))
    }
}

/// `φ(s) = 1 + enc((q, q))`.
#[derive(Clone, Debug)]
pub struct ConstCode(pub Rational);

impl Code for ConstCode {
    fn interval(&self, _: &[u8]) -> Result<Option<RatInterval>> {
        Ok(Some(RatInterval::point(self.0.clone())))
    }
}

/// `φ(s) = 1 + enc(a I_s + b)`; induces `x ↦ a x + b`.
#[derive(Clone, Debug)]
pub struct AffineCode {
    pub a: Rational,
    pub b: Rational,
}

impl Code for AffineCode {
    fn interval(&self, s: &[u8]) -> Result<Option<RatInterval>> {
        Ok(Some(node_interval_digits(s).scale(&self.a).shift(&self.b)))
    }
}

/// A code given by a finite table; unlisted words map to `0`.
#[derive(Clone, Debug, Default)]
pub struct TableCode {
    table: HashMap<Vec<u8>, BigUint>,
}

impl TableCode {
    pub fn new(table: HashMap<Vec<u8>, BigUint>) -> Self {
        TableCode { table }
    }

    /// Lines `word value`; `ε` is the empty word, blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::invalid(format!("code line {}: {line:?}", i + 1));
            let mut parts = line.split_whitespace();
            let (Some(w), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            let w: TernaryWord = w.parse().map_err(|_| bad())?;
            let v: BigUint = v.parse().map_err(|_| bad())?;
            if table.insert(w.digits().to_vec(), v).is_some() {
                return Err(Error::invalid(format!("code line {}: duplicate word {w}", i + 1)));
            }
        }
        Ok(TableCode { table })
    }
}

impl Code for TableCode {
    fn value(&self, s: &[u8]) -> Result<BigUint> {
        Ok(self.table.get(s).cloned().unwrap_or_else(BigUint::zero))
    }
}

/// A code of the zero function that refines slowly next to the path `0^ω`.
///
/// On `0^m` the interval is `(-2^{-m}, 2^{-m})`; past a first nonzero digit at
/// position `m` the exponent grows by one every `2^m` further digits. Every path
/// meets every precision, but the depth needed for precision `2^{-k}` is about `2^k`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SlowZeroCode;

impl Code for SlowZeroCode {
    fn interval(&self, s: &[u8]) -> Result<Option<RatInterval>> {
        let e = match s.iter().position(|&d| d != 0) {
            None => s.len(),
            Some(m) => {
                let rest = s.len() - m - 1;
                m + if m >= usize::BITS as usize { 0 } else { rest >> m }
            }
        };
        Ok(Some(RatInterval::centered(&Rational::zero(), &pow2_neg(e))))
    }
}

/// The code built from a function and a ternary modulus.
///
/// The modulus is first made a modulus of itself and then monotone:
/// `G = monotonize(self_modulus(g))`. With `k_s` the largest `k <= |s|` having
/// `G_k(s̆) <= |s|`, the entry is `c ∓ 7·2^{-k_s}` where
/// `c = f(Φ(breve(s̄ G_{k_s}(s̆))))_{k_s}`; it is `0` when no such `k` exists.
pub struct ModulusCode {
    f: ModulatedRealFn,
    base: TernaryModulus,
    modulus: TernaryModulus,
    path: Mutex<PathCache>,
}

/// Levels along the last queried word. The search for `SM_i(s̆)` at `n <= |s|`
/// reads only `s`, so it runs the same way for every extension of `s`: rows for
/// a common prefix are reused, and a child retries its parent's first failing
/// `i` at the single new `n = |s|`.
#[derive(Default)]
struct PathCache {
    digits: Vec<u8>,
    rows: Vec<LevelRow>,
}

#[derive(Clone, Copy, Default)]
struct LevelRow {
    /// `(k_s, G_{k_s}(s̆))`
    best: Option<(usize, usize)>,
    /// First `i` whose search failed for every `n <= |s|`.
    failed: Option<usize>,
}

impl Clone for ModulusCode {
    fn clone(&self) -> Self {
        ModulusCode { f: self.f.clone(), base: self.base.clone(), modulus: self.modulus.clone(), path: Mutex::default() }
    }
}

impl fmt::Debug for ModulusCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ModulusCode(..)")
    }
}

impl ModulusCode {
    pub fn new(f: ModulatedRealFn) -> Self {
        let base = f.ternary_modulus();
        let modulus = monotonize(&self_modulus(&base));
        ModulusCode { f, base, modulus, path: Mutex::default() }
    }

    /// The normalized modulus `G` used by the construction.
    pub fn modulus(&self) -> &TernaryModulus {
        &self.modulus
    }

    /// Least `n <= limit` with `g_{k+1}(hat(ᾱn)) < n`, i.e. the self-modulus
    /// value when it is at most `limit`.
    fn self_modulus_within(&self, k: usize, alpha: &TernaryStream, limit: usize) -> Result<Option<usize>> {
        for n in 0..=limit {
            if self.base.eval(k + 1, &alpha.hat_prefix(n)?)? < n {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `(k_s, G_{k_s}(s̆))`.
    fn level(&self, s: &[u8]) -> Result<Option<(usize, usize)>> {
        let mut cache = self.path.lock().unwrap_or_else(|e| e.into_inner());
        let common = cache.digits.iter().zip(s).take_while(|(a, b)| a == b).count();
        let keep = common.min(cache.rows.len());
        cache.digits.truncate(keep);
        cache.rows.truncate(keep);
        for d in keep..=s.len() {
            let prev = if d == 0 { None } else { Some(cache.rows[d - 1]) };
            let row = self.extend_level(&s[..d], prev)?;
            if d < s.len() {
                cache.digits.push(s[d]);
            }
            cache.rows.push(row);
        }
        Ok(cache.rows[s.len()].best)
    }

    fn extend_level(&self, s: &[u8], parent: Option<LevelRow>) -> Result<LevelRow> {
        let d = s.len();
        let breve = DigitStream::<Ternary>::from_word(&Word::from_vec_unchecked(s.to_vec()), 1);
        let mut best = parent.and_then(|p| p.best);
        let mut running = best.map_or(0, |(_, g)| g);
        let mut k = best.map_or(0, |(k, _)| k + 1);
        if let Some(kf) = parent.and_then(|p| p.failed) {
            if self.base.eval(kf + 1, &breve.hat_prefix(d)?)? >= d {
                return Ok(LevelRow { best, failed: Some(kf) });
            }
            running = running.max(d);
            best = Some((kf, running));
            k = kf + 1;
        }
        while k <= d {
            match self.self_modulus_within(k, &breve, d)? {
                Some(v) => {
                    running = running.max(v);
                    best = Some((k, running));
                }
                None => return Ok(LevelRow { best, failed: Some(k) }),
            }
            k += 1;
        }
        Ok(LevelRow { best, failed: None })
    }
}

impl Code for ModulusCode {
    fn interval(&self, s: &[u8]) -> Result<Option<RatInterval>> {
        let Some((k, m)) = self.level(s)? else {
            return Ok(None);
        };
        let point = DigitStream::<Ternary>::from_word(&Word::from_vec_unchecked(s[..m].to_vec()), 1);
        let c = self.f.apply(&phi(&point))?.approx(k)?;
        Ok(Some(RatInterval::centered(&c, &(Rational::from_integer(BigInt::from(7)) * pow2_neg(k)))))
    }

    fn length(&self, s: &[u8]) -> Result<Option<Rational>> {
        Ok(self.level(s)?.map(|(k, _)| dyadic_rat(BigInt::from(14), k)))
    }
}

/// Largest `k` with `|I| <= 2^{-k}`, `None` when `|I| > 1`, `usize::MAX` for a point.
fn precision_level(len: &Rational) -> Option<usize> {
    if len.is_zero() {
        return Some(usize::MAX);
    }
    let (n, d) = (len.numer().magnitude(), len.denom().magnitude());
    if n > d {
        return None;
    }
    let mut k = (d.bits() - n.bits()) as usize;
    while (n << k) > *d {
        k -= 1;
    }
    Some(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    C1,
    C3,
    C4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeViolation {
    pub rule: Rule,
    pub words: Vec<TernaryWord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Progress {
    Verified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeReport {
    pub checked_depth: usize,
    pub violations: Vec<CodeViolation>,
    /// Entry `k` covers precision `2^{-k}` along all words of the checked depth.
    pub progress: Vec<Progress>,
}

impl CodeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, rule: Rule) -> usize {
        self.violations.iter().filter(|v| v.rule == rule).count()
    }
}

fn word_at(level: usize, mut idx: usize) -> TernaryWord {
    let mut d = vec![0u8; level];
    for x in d.iter_mut().rev() {
        *x = (idx % 3) as u8;
        idx /= 3;
    }
    TernaryWord::from_vec_unchecked(d)
}

struct Group {
    lo: u128,
    hi: u128,
    max_lo: (Rational, usize, usize),
    min_hi: (Rational, usize, usize),
}

/// Exhaustive C1, C3 and C4 checks on words of length `<= depth`; C2 on all
/// words of length `depth` for `k <= kmax`.
pub fn code_validate(code: &dyn Code, depth: usize, kmax: usize) -> Result<CodeReport> {
    if depth > 40 {
        return Err(Error::invalid("validation depth above 40"));
    }
    let mut violations = Vec::new();
    let mut levels: Vec<Vec<Option<RatInterval>>> = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let mut row = Vec::with_capacity(3usize.pow(n as u32));
        for (idx, w) in TernaryWord::all_of_length(n).enumerate() {
            let v = code.value(w.digits())?;
            let entry = match decode_code_value(&v) {
                Ok(e) => e,
                Err(_) => {
                    violations.push(CodeViolation { rule: Rule::C1, words: vec![word_at(n, idx)] });
                    None
                }
            };
            row.push(if v.is_zero() { None } else { entry });
        }
        levels.push(row);
    }
    let nonzero = |n: usize, idx: usize| -> Result<bool> { Ok(!code.value(word_at(n, idx).digits())?.is_zero()) };

    for n in 0..depth {
        for (idx, parent) in levels[n].iter().enumerate() {
            let Some(p) = parent else { continue };
            for i in 0..3 {
                let c = 3 * idx + i;
                match &levels[n + 1][c] {
                    Some(child) if child.within(p) => {}
                    Some(_) => violations.push(CodeViolation { rule: Rule::C3, words: vec![word_at(n, idx), word_at(n + 1, c)] }),
                    None if nonzero(n + 1, c)? => {}
                    None => violations.push(CodeViolation { rule: Rule::C3, words: vec![word_at(n, idx), word_at(n + 1, c)] }),
                }
            }
        }
    }

    let mut groups: HashMap<(usize, u128), Group> = HashMap::new();
    for (n, row) in levels.iter().enumerate() {
        for (idx, e) in row.iter().enumerate() {
            let Some(e) = e else { continue };
            let w = word_at(n, idx);
            let num: u128 = node_number_digits(w.digits()).try_into().expect("depth bounded");
            let shift = depth - n;
            let g = groups.entry((n, num)).or_insert_with(|| Group {
                lo: (num - 1) << shift,
                hi: (num + 1) << shift,
                max_lo: (e.lo().clone(), n, idx),
                min_hi: (e.hi().clone(), n, idx),
            });
            if *e.lo() > g.max_lo.0 {
                g.max_lo = (e.lo().clone(), n, idx);
            }
            if *e.hi() < g.min_hi.0 {
                g.min_hi = (e.hi().clone(), n, idx);
            }
        }
    }
    let mut gs: Vec<&Group> = groups.values().collect();
    gs.sort_by_key(|g| (g.lo, g.hi));
    let max_width = gs.iter().map(|g| g.hi - g.lo).max().unwrap_or(0);
    for (i, a) in gs.iter().enumerate() {
        // groups are sorted by left end; any group touching `a` from the right starts at or before a.hi
        for b in gs[i..].iter() {
            if b.lo > a.hi {
                break;
            }
            for (x, y) in [(a, b), (b, a)] {
                if x.max_lo.0 > y.min_hi.0 {
                    violations.push(CodeViolation {
                        rule: Rule::C4,
                        words: vec![word_at(x.max_lo.1, x.max_lo.2), word_at(y.min_hi.1, y.min_hi.2)],
                    });
                }
            }
        }
        let _ = max_width;
    }
    violations.dedup();

    let mut best: Vec<i64> = vec![-1];
    for (n, row) in levels.iter().enumerate() {
        let mut next = Vec::with_capacity(row.len());
        for (idx, e) in row.iter().enumerate() {
            let inherited = if n == 0 { -1 } else { best[idx / 3] };
            let own = e.as_ref().and_then(|e| precision_level(&e.length())).map_or(-1, |k| k.min(kmax) as i64);
            next.push(inherited.max(own));
        }
        best = next;
    }
    let reached = best.iter().copied().min().unwrap_or(-1);
    let progress = (0..=kmax).map(|k| if (k as i64) <= reached { Progress::Verified } else { Progress::Inconclusive }).collect();
    Ok(CodeReport { checked_depth: depth, violations, progress })
}

/// `h_k(α)`: the least `n < cap` with `φ(ᾱn) ≠ 0` and length `<= 2^{-k}`.
pub fn code_locate(code: &dyn Code, k: usize, alpha: &TernaryStream, cap: usize) -> Result<usize> {
    let e = pow2_neg(k);
    let mut prefix = Vec::new();
    for n in 0..cap {
        if let Some(len) = code.length(&prefix)? {
            if len <= e {
                return Ok(n);
            }
        }
        prefix.push(alpha.digit(n)?);
    }
    Err(Error::cap(format!("code locate at k={k}"), cap))
}

/// `f^φ_T(α)`: interval `n` is `φ(ᾱ h_n(α)) - 1`, with convergence `k ↦ k`.
pub fn code_eval_ternary(code: &SharedCode, alpha: &TernaryStream) -> ShrinkingReal {
    let (code, alpha) = (code.clone(), alpha.clone());
    ShrinkingReal::new(
        move |n| {
            let h = code_locate(code.as_ref(), n, &alpha, search_cap())?;
            let w = alpha.prefix_digits(h)?;
            code.interval(&w)?.ok_or_else(|| Error::InvariantViolation("located word has no interval".into()))
        },
        |k| k,
    )
}

/// `f_φ(x)`, read through the path `α_x`.
pub fn code_eval(code: &SharedCode, x: &RegularReal) -> RegularReal {
    regular_from_shrinking(&code_eval_ternary(code, &path_of_real(x)))
}

/// `g_k(α) = h_k(ρ(α)) + 6`.
pub fn code_to_ternary_modulus(code: &SharedCode) -> TernaryModulus {
    let code = code.clone();
    TernaryModulus::new(move |k, alpha: &TernaryStream| Ok(code_locate(code.as_ref(), k, &rho(alpha), search_cap())? + 6))
}

pub fn modulated_fn_to_code(f: &ModulatedRealFn) -> ModulusCode {
    ModulusCode::new(f.clone())
}

/// The code of `f` built from the constant ternary modulus `g_k = max{ω(i) : i <= k}`.
pub fn uc_fn_to_code(f: impl Fn(&RegularReal) -> Result<RegularReal> + Send + Sync + 'static, omega: &UniformModulus) -> ModulusCode {
    let omega = omega.clone();
    let g = TernaryModulus::new(move |k, _: &TernaryStream| omega.get(k)).with_flags(true, true);
    ModulusCode::new(ModulatedRealFn::new(f, crate::moduli::FnModulus::Ternary(g)))
}

/// `ω(k)`: the least depth at which every ternary word has a prefix whose
/// entry is nonzero with length `<= 2^{-k}`. Values for `k <= kmax` are found
/// by one tree search with depth cap `cap`; larger `k` are searched on demand.
pub fn code_uc_witness(code: &SharedCode, kmax: usize, cap: usize) -> Result<UniformModulus> {
    code_uc_witness_with(code, kmax, FanLimits::depth(cap))
}

pub fn code_uc_witness_with(code: &SharedCode, kmax: usize, limits: FanLimits) -> Result<UniformModulus> {
    let known = uniform_depths(code.as_ref(), kmax, limits)?;
    let code = code.clone();
    Ok(UniformModulus::with_prefix(known, move |k| {
        let e = pow2_neg(k);
        fan_uniform_depth_with::<Ternary>(|s| Ok(code.length(s)?.is_some_and(|len| len <= e)), limits)
    }))
}

fn uniform_depths(code: &dyn Code, kmax: usize, limits: FanLimits) -> Result<Vec<usize>> {
    let level = |s: &[u8]| -> Result<i64> {
        Ok(code.length(s)?.as_ref().and_then(precision_level).map_or(-1, |k| k.min(kmax) as i64))
    };
    let mut omega = vec![0usize; kmax + 1];
    let top = kmax as i64;
    let record = |omega: &mut Vec<usize>, from: i64, to: i64, depth: usize| {
        for k in (from + 1).max(0)..=to {
            let k = k as usize;
            omega[k] = omega[k].max(depth);
        }
    };
    let root = level(&[])?;
    record(&mut omega, -1, root, 0);
    if root >= top {
        return Ok(omega);
    }
    let fail = |best: i64, cap: usize, what: &str| Error::cap(format!("uniform code bound at k={} ({what})", best + 1), cap);
    if limits.depth == 0 {
        return Err(fail(root, 0, "depth"));
    }
    let mut visited = 1usize;
    let mut path: Vec<u8> = Vec::new();
    // (next digit, best level of the node owning this frame)
    let mut frames: Vec<(u8, i64)> = vec![(0, root)];
    while let Some(top_frame) = frames.last_mut() {
        if top_frame.0 == 3 {
            frames.pop();
            path.pop();
            continue;
        }
        let inherited = top_frame.1;
        path.push(top_frame.0);
        top_frame.0 += 1;
        visited += 1;
        if visited > limits.nodes {
            return Err(fail(inherited, limits.nodes, "node budget"));
        }
        let lv = inherited.max(level(&path)?);
        record(&mut omega, inherited, lv, path.len());
        if lv >= top {
            path.pop();
        } else if path.len() >= limits.depth {
            return Err(fail(lv, limits.depth, "depth"));
        } else {
            frames.push((0, lv));
        }
    }
    Ok(omega)
}
