//! End-to-end acceptance checks. One `#[test]` runs every criterion in order
//! and prints a PASS/FAIL line per criterion with its tolerances.

mod common;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use conreal::bar::{bar_uniform_bound, verify_hitting, BarFunction, DecidableBar};
use conreal::cantor::{gamma, immediate_neighbors, immediately_precedes, kappa};
use conreal::code::{
    code_eval, code_uc_witness, code_uc_witness_with, code_validate, modulated_fn_to_code, uc_fn_to_code, AffineCode, Code, ConstCode,
    IdentityCode, Rule, SharedCode, SlowZeroCode,
};
use conreal::moduli::{check_modulus, FanLimits, FnModulus, IntensionalModulus, ModulatedRealFn, SamplePoint, UniformModulus};
use conreal::rational::{int, pow2_neg, rat};
use conreal::real::{eq_at, fundamental_from_regular, regular_from_fundamental, regular_from_shrinking, shrinking_from_regular};
use conreal::spread::{node_number_digits, path_of_real, phi, quotient_lift, rho};
use conreal::{BinaryWord, Error, Rational, RegularReal, TernaryWord};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;

use common::*;

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: conreal::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn within_budget(elapsed: Duration, budget: Duration) -> std::result::Result<(), String> {
    check(elapsed <= budget, || format!("took {elapsed:.1?}, budget {budget:?}"))
}

fn c1_round_trips() -> Outcome {
    let mut r = rng(1);
    for i in 0..200 {
        let x = random_regular(&mut r);
        let via_f = regular_from_fundamental(&fundamental_from_regular(&x));
        let via_s = regular_from_shrinking(&shrinking_from_regular(&x));
        check(ok(eq_at(&x, &via_f, 40), "fundamental")?, || format!("sample {i}: fundamental round trip"))?;
        check(ok(eq_at(&x, &via_s, 40), "shrinking")?, || format!("sample {i}: shrinking round trip"))?;
    }
    Ok("200 walks, both round trips eq_at depth 40".into())
}

fn c2_surjectivity() -> Outcome {
    let mut r = rng(2);
    let mut xs: Vec<RegularReal> = vec![RegularReal::constant(int(0)), RegularReal::constant(int(1)), RegularReal::constant(rat(1, 2))];
    while xs.len() < 200 {
        xs.push(random_unit_regular(&mut r));
    }
    for (i, x) in xs.iter().enumerate() {
        let back = phi(&path_of_real(x));
        check(ok(eq_at(x, &back, 40), "phi(path)")?, || format!("sample {i}"))?;
    }
    Ok("200 reals in [0,1] (0, 1/2, 1 included), eq_at depth 40".into())
}

fn c3_rho_laws() -> Outcome {
    let mut r = rng(3);
    let mut window_hits = 0;
    for i in 0..200 {
        // a third of the streams open with a long run of 0s or 2s so the window law is exercised
        let run = if i % 3 == 0 { r.gen_range(0..12) } else { 0 };
        let lead = if r.gen_bool(0.5) { 0u8 } else { 2 };
        let tail = random_ternary(&mut r, 80);
        let a = tail.prepend(&TernaryWord::repeat(lead, run));
        let ra = rho(&a);
        let ad = ok(a.prefix_digits(64), "alpha")?;
        let rd = ok(ra.prefix_digits(64), "rho")?;
        for n in 0..=60 {
            let x = BigInt::from(node_number_digits(&ad[..n + 1]));
            let y = BigInt::from(node_number_digits(&rd[..n + 1]));
            check((x - y).abs() <= BigInt::from(1), || format!("stream {i}: numbering gap above 1 at n = {n}"))?;
            for w in [0u8, 2] {
                if rd[n..n + 3] == [w, w, w] {
                    window_hits += 1;
                    check(ad[..n + 1].iter().all(|&d| d == w), || format!("stream {i}: window {w}{w}{w} at n = {n}"))?;
                }
            }
        }
        check(ok(eq_at(&phi(&a), &phi(&ra), 40), "phi")?, || format!("stream {i}: phi(rho) differs"))?;
    }
    Ok(format!("200 streams, n <= 60, |dN| <= 1, eq_at depth 40, {window_hits} window occurrences checked"))
}

fn c4_quotient_lift() -> Outcome {
    let mut r = rng(4);
    for i in 0..100 {
        let a = random_ternary(&mut r, 40);
        let n = r.gen_range(0..=20);
        let head = ok(rho(&a).prefix(n + 6), "rho")?;
        let beta = random_ternary(&mut r, 30).prepend(&head);
        let x = phi(&beta);
        let lifted = match quotient_lift(&a, n, &x) {
            Ok(l) => l,
            Err(Error::NoLiftFound) => return Err(format!("case {i}: NoLiftFound")),
            Err(e) => return Err(format!("case {i}: {e}")),
        };
        check(ok(lifted.prefix(n), "lift")? == ok(rho(&a).prefix(n), "rho")?, || format!("case {i}: prefix"))?;
        check(ok(eq_at(&phi(&lifted), &x, 30), "phi")?, || format!("case {i}: value"))?;
    }
    Ok("100 lifts, prefix rho(a)|n kept, eq_at depth 30, no NoLiftFound".into())
}

fn c5_discontinuum() -> Outcome {
    let mut r = rng(5);
    for i in 0..200 {
        let b = random_binary(&mut r, 40);
        let g = gamma(&path_of_real(&kappa(&b)));
        check(ok(g.prefix(30), "gamma")? == ok(b.prefix(30), "beta")?, || format!("stream {i}: {}", b.to_string_prefix(30).unwrap()))?;
    }
    Ok("200 bit streams, 30 digits".into())
}

fn c6_bars() -> Outcome {
    let mut r = rng(6);
    let mut bars: Vec<(String, DecidableBar, usize)> = (0..=4).map(|d| (format!("|s|>={d}"), DecidableBar::min_length(d), d)).collect();
    for i in 0..20 {
        let words = random_antichain(&mut r, 6);
        let longest = words.iter().map(|w| w.len()).max().unwrap_or(0);
        bars.push((format!("antichain {i}"), antichain_bar(&words), longest));
    }
    let mut checked = 0;
    for (name, bar, longest) in &bars {
        for j in 0..100 {
            let b = random_binary(&mut r, 12);
            check(ok(verify_hitting(bar, &b, 25), "verify")?, || format!("{name}: hitting mismatch on sample {j}"))?;
        }
        let f = BarFunction::new(bar.clone());
        let g = f.modulus();
        let func = ModulatedRealFn::new(move |x| f.eval(x), FnModulus::Ternary(g));
        let mut pairs = Vec::new();
        for _ in 0..50 {
            let a = random_ternary(&mut r, 30);
            let centre = ok(phi(&a).approx(40), "phi")?;
            let m = r.gen_range(3..=30);
            let d = Rational::new(BigInt::from(r.gen_range(-64..=64)), BigInt::from(64) << m);
            let y = (centre + d).clamp(int(0), int(1));
            pairs.push((SamplePoint::Path(a), RegularReal::constant(y)));
        }
        let report = ok(check_modulus(&func, &pairs, 8, 20), "check_modulus")?;
        checked += report.checked;
        check(report.passed(), || format!("{name}: modulus violations {:?}", report.violations))?;
        let bound = ok(bar_uniform_bound(bar, 64), "bound")?;
        check(bound == *longest, || format!("{name}: bound {bound}, longest generator {longest}"))?;
    }
    let two = DecidableBar::parse("0\n10\n11\n").unwrap();
    let half = ok(BarFunction::new(two).eval(&RegularReal::constant(rat(1, 2))), "two-level")?;
    let printed = ok(half.approx(10), "approx")?.to_string();
    check(printed == "3/2", || format!("two-level f(1/2) printed {printed}"))?;
    Ok(format!("{} bars x 100 hitting checks at depth 25, 50 pairs each kmax 8 prec 20 ({checked} premises), bounds exact, f(1/2) = 3/2", bars.len()))
}

fn sample_points(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<RegularReal> {
    let mut xs = vec![RegularReal::constant(int(0)), RegularReal::constant(rat(1, 2)), RegularReal::constant(int(1))];
    while xs.len() < n {
        xs.push(random_unit_regular(r));
    }
    xs
}

fn c7_code_round_trips() -> Outcome {
    type PointFn = fn(&RegularReal) -> conreal::Result<RegularReal>;
    type Fixture = (&'static str, PointFn, fn(usize) -> usize);
    let fixtures: Vec<Fixture> = vec![
        ("identity", |x| Ok(x.clone()), |k| k),
        ("constant 1/3", |_| Ok(RegularReal::constant(rat(1, 3))), |_| 0),
        ("affine 3x/2-1/4", |x| Ok(x.scale(&rat(3, 2)).offset(&rat(-1, 4))), |k| k + 1),
        ("|x-1/2|", |x| Ok(x.offset(&rat(-1, 2)).abs()), |k| k),
    ];
    let mut r = rng(7);
    let tol = pow2_neg(8);
    for (name, f, g) in fixtures {
        let func = ModulatedRealFn::new(f, FnModulus::Intensional(IntensionalModulus::constant(g)));
        let code: SharedCode = Arc::new(modulated_fn_to_code(&func));
        let report = ok(code_validate(code.as_ref(), 8, 8), "validate")?;
        check(report.is_clean(), || format!("{name}: {} violations, first {:?}", report.violations.len(), report.violations.first()))?;
        for (i, x) in sample_points(&mut r, 20).iter().enumerate() {
            let got = ok(code_eval(&code, x).approx(12), "code_eval")?;
            let want = ok(ok(f(x), "f")?.approx(12), "f")?;
            check((got.clone() - want.clone()).abs() <= tol, || format!("{name}: sample {i}: {got} vs {want}"))?;
        }
    }
    Ok("4 fixtures, 20 points each within 2^-8, codes clean at depth 8".into())
}

fn uc_sample_test(name: &str, code: &SharedCode, omega: &[usize], r: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    for (k, &w) in omega.iter().enumerate() {
        for j in 0..4 {
            let x = Rational::new(BigInt::from(r.gen_range(0..=1024)), BigInt::from(1024));
            let d = Rational::new(BigInt::from(r.gen_range(-256..=256)), BigInt::from(256) << w);
            let y = (x.clone() + d).clamp(int(0), int(1));
            let fx = ok(code_eval(code, &RegularReal::constant(x.clone())).approx(k + 2), "eval")?;
            let fy = ok(code_eval(code, &RegularReal::constant(y.clone())).approx(k + 2), "eval")?;
            let bound = pow2_neg(k) + pow2_neg(k + 1);
            check((fx.clone() - fy.clone()).abs() <= bound, || format!("{name}: k = {k}, pair {j}: f({x}) = {fx}, f({y}) = {fy}"))?;
        }
    }
    Ok(())
}

fn c8_uniform_continuity() -> Outcome {
    let mut r = rng(8);
    let kmax = 8;
    // pipeline codes need depth about k + 6, so 3^14 nodes at k = 8
    let limits = FanLimits::new(64, 1 << 25);
    let mut codes: Vec<(&str, SharedCode)> = vec![
        ("builtin identity", Arc::new(IdentityCode)),
        ("builtin const 1/3", Arc::new(ConstCode(rat(1, 3)))),
        ("builtin affine 3x/2-1/4", Arc::new(AffineCode { a: rat(3, 2), b: rat(-1, 4) })),
    ];
    let id_omega = UniformModulus::new(Ok);
    codes.push(("pipeline identity", Arc::new(uc_fn_to_code(|x| Ok(x.clone()), &id_omega))));
    codes.push(("pipeline const 2/5", Arc::new(uc_fn_to_code(|_| Ok(RegularReal::constant(rat(2, 5))), &UniformModulus::new(|_| Ok(0))))));
    codes.push(("pipeline 1-x", Arc::new(uc_fn_to_code(|x| Ok(x.neg().offset(&int(1))), &id_omega))));
    let mut summary = Vec::new();
    for (name, code) in &codes {
        let t = Instant::now();
        let omega = ok(code_uc_witness_with(code, kmax, limits), name)?;
        let values = ok(omega.prefix(kmax + 1), name)?;
        for (k, &w) in values.iter().enumerate() {
            check(w <= k + 8, || format!("{name}: omega({k}) = {w} > k + 8"))?;
        }
        uc_sample_test(name, code, &values, &mut r)?;
        summary.push(format!("{name} {:?} ({:.1?})", values, t.elapsed()));
    }
    match code_uc_witness(&(Arc::new(SlowZeroCode) as SharedCode), kmax, 64) {
        Err(Error::CapExceeded { .. }) => {}
        other => return Err(format!("slow-zero fixture: expected CapExceeded, got {other:?}")),
    }
    Ok(format!("omega(k) <= k + 8 for k <= 8, UC sample test at precision k+2; slow-zero CapExceeded; {}", summary.join("; ")))
}

fn c9_small_worlds() -> Outcome {
    for n in 0..=12usize {
        let mut w = Some(BinaryWord::repeat(0, n));
        let mut seen = 0usize;
        let mut last: Option<BinaryWord> = None;
        while let Some(cur) = w {
            if let Some(prev) = &last {
                check(immediately_precedes(prev, &cur), || format!("n = {n}: {prev} does not precede {cur}"))?;
                check(immediate_neighbors(&cur).pred.as_ref() == Some(prev), || format!("n = {n}: pred of {cur}"))?;
            }
            seen += 1;
            w = immediate_neighbors(&cur).succ;
            last = Some(cur);
        }
        check(seen == 1 << n, || format!("n = {n}: chain covers {seen} words"))?;
        check(last == Some(BinaryWord::repeat(1, n)), || format!("n = {n}: chain ends early"))?;
    }

    // N(a*c) + k = N(b*d) whenever N(a) = N(b) and N(c) + k = N(d), |c| = |d|.
    // For fixed a and length, the statement says N(a*c) - N(c) is one value shared by all a with equal N(a).
    let small: Vec<Vec<u8>> = (0..=4).flat_map(|l| TernaryWord::all_of_length(l).map(|w| w.digits().to_vec())).collect();
    let num = |s: &[u8]| BigInt::from(node_number_digits(s));
    let mut pairs = 0usize;
    for len in 0..=6 {
        let cs: Vec<Vec<u8>> = TernaryWord::all_of_length(len).map(|w| w.digits().to_vec()).collect();
        let mut offset_by_number: std::collections::HashMap<BigInt, BigInt> = std::collections::HashMap::new();
        for a in &small {
            for c in &cs {
                let ac: Vec<u8> = a.iter().chain(c).copied().collect();
                let diff = num(&ac) - num(c);
                let seen = offset_by_number.entry(num(a)).or_insert_with(|| diff.clone());
                check(*seen == diff, || format!("|c| = {len}: offset differs at a = {a:?}, c = {c:?}"))?;
            }
        }
        for a in &small {
            for b in &small {
                if num(a) == num(b) {
                    pairs += 1;
                }
            }
        }
    }
    // the literal quantifiers on short words
    for len in 0..=3 {
        let cs: Vec<Vec<u8>> = TernaryWord::all_of_length(len).map(|w| w.digits().to_vec()).collect();
        for a in &small {
            for b in &small {
                if num(a) != num(b) {
                    continue;
                }
                for c in &cs {
                    for d in &cs {
                        let k = num(d) - num(c);
                        let ac: Vec<u8> = a.iter().chain(c).copied().collect();
                        let bd: Vec<u8> = b.iter().chain(d).copied().collect();
                        check(num(&ac) + &k == num(&bd), || format!("a = {a:?}, b = {b:?}, c = {c:?}, d = {d:?}"))?;
                    }
                }
            }
        }
    }
    Ok(format!("successor chains n <= 12; numbering congruence |a|,|b| <= 4, |c| <= 6 ({pairs} equal-number pairs over all lengths)"))
}

const GOLDEN: [(&str, &[&str]); 12] = [
    ("spread_phi", &["spread", "phi", "--path", "1~1", "--prec", "10"]),
    ("bar_eval", &["bar", "eval", "--bar", "tests/fixtures/two-level.txt", "--at", "1/2", "--prec", "10"]),
    ("bar_bound_cap", &["bar", "bound", "--bar", "tests/fixtures/empty.txt", "--cap", "100"]),
    ("bar_hitting", &["bar", "hitting", "--bar", "tests/fixtures/two-level.txt", "--bits", "10~1"]),
    ("real_approx_kappa", &["real", "approx", "kappa:01~1", "--prec", "20"]),
    ("real_convert", &["real", "convert", "1/3", "--to", "shrinking", "--terms", "4"]),
    ("spread_extract", &["spread", "extract", "1/3", "--digits", "16"]),
    ("spread_rho", &["spread", "rho", "--path", "0201~2", "--digits", "12"]),
    ("cantor_gamma", &["cantor", "gamma", "--path", "2~0", "--digits", "12"]),
    ("cantor_interval", &["cantor", "interval", "--word", "0110"]),
    ("code_check", &["code", "check", "--code", "builtin:identity", "--depth", "5", "--kmax", "5"]),
    ("code_ucmod", &["code", "ucmod", "--code", "builtin:affine:3/2:-1/4", "--kmax", "6"]),
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn render(args: &[&str]) -> std::result::Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_conreal"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("CONREAL_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "status {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    ))
}

fn c10_cli_golden() -> Outcome {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let got = render(args)?;
        let again = render(args)?;
        check(got == again, || format!("{name}: output differs between runs"))?;
        let path = golden_dir().join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &got).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        check(got == want, || format!("{name}: got\n{got}\nexpected\n{want}"))?;
    }
    Ok(format!("{} invocations byte-exact", GOLDEN.len()))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 10] = [
        ("representation round trips", c1_round_trips, 10),
        ("spread surjectivity", c2_surjectivity, 30),
        ("rewriting laws", c3_rho_laws, 30),
        ("quotient lift", c4_quotient_lift, 30),
        ("discontinuum identification", c5_discontinuum, 30),
        ("bar construction", c6_bars, 120),
        ("code round trips", c7_code_round_trips, 120),
        ("uniform continuity", c8_uniform_continuity, 60),
        ("small-world checks", c9_small_worlds, 60),
        ("CLI determinism", c10_cli_golden, 10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run().and_then(|detail| within_budget(t.elapsed(), Duration::from_secs(*budget)).map(|_| detail));
        let line = match &outcome {
            Ok(detail) => format!("criterion {:>2} PASS {name} [{:.2?} / {budget}s]: {detail}", i + 1, t.elapsed()),
            Err(why) => format!("criterion {:>2} FAIL {name} [{:.2?} / {budget}s]: {why}", i + 1, t.elapsed()),
        };
        writeln!(std::io::stdout().lock(), "{line}").ok();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn code_rules_catch_broken_fixtures() {
    let mut t = std::collections::HashMap::new();
    t.insert(vec![], conreal::encode::code_value(Some(&conreal::RatInterval::new(int(0), int(1)).unwrap())));
    let code = conreal::code::TableCode::new(t);
    let report = code_validate(&code, 2, 2).unwrap();
    assert_eq!(report.count(Rule::C3), 3);
    assert!(code.interval(&[0]).unwrap().is_none());
}
