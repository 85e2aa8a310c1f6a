//! The `conreal` command line.
//!
//! `run` takes the full argument list and returns the exit status with the text
//! destined for stdout and stderr, so the binary is a thin wrapper and tests
//! can drive every subcommand in-process.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bar::{bar_uniform_bound, hitting_time, verify_hitting, BarFunction, DecidableBar};
use crate::cantor::{cantor_interval, gamma, kappa};
use crate::code::{code_eval, code_locate, code_uc_witness, code_validate, AffineCode, ConstCode, IdentityCode, Progress, SharedCode, SlowZeroCode, TableCode};
use crate::digits::{BinaryStream, BinaryWord, TernaryStream};
use crate::error::{Error, Result};
use crate::rational::{is_dyadic, parse_rational};
use crate::real::{fundamental_from_regular, shrinking_from_regular, RegularReal};
use crate::spread::{path_of_real, phi, quotient_lift, rho};
use crate::{search_cap, with_search_cap, DEFAULT_SEARCH_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

const PREC_HELP: &str = "precision K: the printed rational is within 2^-K of the real";

#[derive(Parser, Debug)]
#[command(name = "conreal", version, about = "Constructive reals, the ternary spread, bars and codes")]
struct Cli {
    /// Budget for unbounded searches; overrides CONREAL_CAP
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reals given as const:p/q, dyadic:p/q, kappa:BITS, phi:DIGITS[~d] or p/q
    #[command(subcommand)]
    Real(RealCmd),
    /// The ternary spread
    #[command(subcommand)]
    Spread(SpreadCmd),
    /// The Cantor discontinuum
    #[command(subcommand)]
    Cantor(CantorCmd),
    /// Bar files: one binary word per line
    #[command(subcommand)]
    Bar(BarCmd),
    /// Codes: builtin:identity, builtin:const:p/q, builtin:affine:a/b:c/d, builtin:slow-zero, file:PATH
    #[command(subcommand)]
    Code(CodeCmd),
}

#[derive(Args, Debug)]
struct Prec {
    #[arg(long, default_value_t = 30, help = PREC_HELP)]
    prec: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Repr {
    Regular,
    Fundamental,
    Shrinking,
}

#[derive(Subcommand, Debug)]
enum RealCmd {
    /// Print a rational within 2^-prec of the real
    Approx {
        spec: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Print the first terms of another representation
    Convert {
        spec: String,
        #[arg(long, value_enum)]
        to: Repr,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SpreadCmd {
    /// The real coded by a path DIGITS[~d]
    Phi {
        #[arg(long)]
        path: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Digits of the path extracted from a real in [0,1]
    Extract {
        spec: String,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Digits of the rewritten path
    Rho {
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Lift a nearby real to a path agreeing with rho(path) on n digits
    Lift {
        #[arg(long)]
        path: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CantorCmd {
    /// The Cantor point of a bit stream BITS[~d]
    Kappa {
        #[arg(long)]
        bits: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Bits read off a spread path
    Gamma {
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// The middle-third interval of a binary word
    Interval {
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand, Debug)]
enum BarCmd {
    /// The bar function at a real
    Eval {
        #[arg(long)]
        bar: String,
        #[arg(long)]
        at: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Least depth by which every path has hit the bar
    Bound {
        #[arg(long)]
        bar: String,
    },
    /// Hitting time of a bit stream
    Hitting {
        #[arg(long)]
        bar: String,
        #[arg(long)]
        bits: String,
    },
    /// Check f(kappa(bits)) equals the hitting time; exit 4 when it does not
    Verify {
        #[arg(long)]
        bar: String,
        #[arg(long)]
        bits: String,
        #[arg(long, default_value_t = 25)]
        prec: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Validate a code on all words up to a depth; exit 4 on violations
    Check {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// The induced function at a real in [0,1]
    Eval {
        #[arg(long)]
        code: String,
        #[arg(long)]
        at: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Least prefix length with an entry of length at most 2^-k
    Locate {
        #[arg(long)]
        code: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        path: String,
    },
    /// Uniform modulus values for k = 0..=kmax
    Ucmod {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
}

/// Parses a real spec: `const:p/q`, `dyadic:p/q`, `kappa:BITS`, `phi:DIGITS[~d]` or `p/q`.
pub fn parse_real(spec: &str) -> Result<RegularReal> {
    let (kind, body) = spec.split_once(':').unwrap_or(("const", spec));
    match kind {
        "const" => Ok(RegularReal::constant(parse_rational(body)?)),
        "dyadic" => {
            let q = parse_rational(body)?;
            if !is_dyadic(&q) {
                return Err(Error::invalid(format!("not dyadic: {body}")));
            }
            Ok(RegularReal::constant(q))
        }
        "kappa" => Ok(kappa(&BinaryStream::parse(body)?)),
        "phi" => Ok(phi(&TernaryStream::parse(body)?)),
        _ => Err(Error::invalid(format!("unknown real spec {spec:?}"))),
    }
}

/// Parses a code spec; see the `code` subcommand help.
pub fn parse_code(spec: &str) -> Result<SharedCode> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{path}: {e}")))?;
        return Ok(Arc::new(TableCode::parse(&text)?));
    }
    let Some(rest) = spec.strip_prefix("builtin:") else {
        return Err(Error::invalid(format!("unknown code spec {spec:?}")));
    };
    let parts: Vec<&str> = rest.split(':').collect();
    match parts.as_slice() {
        ["identity"] => Ok(Arc::new(IdentityCode)),
        ["slow-zero"] => Ok(Arc::new(SlowZeroCode)),
        ["const", q] => Ok(Arc::new(ConstCode(parse_rational(q)?))),
        ["affine", a, b] => Ok(Arc::new(AffineCode { a: parse_rational(a)?, b: parse_rational(b)? })),
        _ => Err(Error::invalid(format!("unknown builtin code {rest:?}"))),
    }
}

fn read_bar(path: &str) -> Result<DecidableBar> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{path}: {e}")))?;
    DecidableBar::parse(&text)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::InvariantViolation(_) => EXIT_VIOLATION,
        _ => EXIT_INVALID,
    }
}

fn cap_from_env() -> std::result::Result<Option<usize>, String> {
    match std::env::var("CONREAL_CAP") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("CONREAL_CAP is not a natural number: {v:?}")),
        Err(_) => Ok(None),
    }
}

/// Runs the command line; returns `(status, stdout, stderr)`.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { (EXIT_INVALID, String::new(), text) } else { (EXIT_OK, text, String::new()) };
        }
    };
    let cap = match cli.cap.map(Ok).or_else(|| cap_from_env().transpose()) {
        Some(Ok(c)) => c,
        Some(Err(msg)) => return (EXIT_INVALID, String::new(), format!("error: {msg}\n")),
        None => DEFAULT_SEARCH_CAP,
    };
    if cap == 0 {
        return (EXIT_INVALID, String::new(), "error: cap must be positive\n".into());
    }
    match with_search_cap(cap, || dispatch(cli.command)) {
        Ok((status, out)) => (status, out, String::new()),
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

fn dispatch(cmd: Command) -> Result<(i32, String)> {
    let mut out = String::new();
    let mut status = EXIT_OK;
    match cmd {
        Command::Real(RealCmd::Approx { spec, prec }) => {
            writeln!(out, "{}", parse_real(&spec)?.approx(prec.prec)?).ok();
        }
        Command::Real(RealCmd::Convert { spec, to, terms }) => {
            let x = parse_real(&spec)?;
            match to {
                Repr::Regular => {
                    for n in 0..terms {
                        writeln!(out, "{n} {}", x.term(n)?).ok();
                    }
                }
                Repr::Fundamental => {
                    let f = fundamental_from_regular(&x);
                    for n in 0..terms {
                        writeln!(out, "{n} {} modulus {}", f.term(n)?, f.modulus(n)).ok();
                    }
                }
                Repr::Shrinking => {
                    let s = shrinking_from_regular(&x);
                    for n in 0..terms {
                        writeln!(out, "{n} {}", s.interval(n)?).ok();
                    }
                }
            }
        }
        Command::Spread(SpreadCmd::Phi { path, prec }) => {
            writeln!(out, "{}", phi(&TernaryStream::parse(&path)?).approx(prec.prec)?).ok();
        }
        Command::Spread(SpreadCmd::Extract { spec, digits }) => {
            writeln!(out, "{}", path_of_real(&parse_real(&spec)?).to_string_prefix(digits)?).ok();
        }
        Command::Spread(SpreadCmd::Rho { path, digits }) => {
            writeln!(out, "{}", rho(&TernaryStream::parse(&path)?).to_string_prefix(digits)?).ok();
        }
        Command::Spread(SpreadCmd::Lift { path, n, at, digits }) => {
            let lifted = quotient_lift(&TernaryStream::parse(&path)?, n, &parse_real(&at)?)?;
            writeln!(out, "{}", lifted.to_string_prefix(digits)?).ok();
        }
        Command::Cantor(CantorCmd::Kappa { bits, prec }) => {
            writeln!(out, "{}", kappa(&BinaryStream::parse(&bits)?).approx(prec.prec)?).ok();
        }
        Command::Cantor(CantorCmd::Gamma { path, digits }) => {
            writeln!(out, "{}", gamma(&TernaryStream::parse(&path)?).to_string_prefix(digits)?).ok();
        }
        Command::Cantor(CantorCmd::Interval { word }) => {
            let w: BinaryWord = word.parse()?;
            writeln!(out, "{}", cantor_interval(&w)).ok();
        }
        Command::Bar(BarCmd::Eval { bar, at, prec }) => {
            let f = BarFunction::new(read_bar(&bar)?);
            writeln!(out, "{}", f.eval(&parse_real(&at)?)?.approx(prec.prec)?).ok();
        }
        Command::Bar(BarCmd::Bound { bar }) => {
            writeln!(out, "{}", bar_uniform_bound(&read_bar(&bar)?, search_cap())?).ok();
        }
        Command::Bar(BarCmd::Hitting { bar, bits }) => {
            writeln!(out, "{}", hitting_time(&read_bar(&bar)?, &BinaryStream::parse(&bits)?, search_cap())?).ok();
        }
        Command::Bar(BarCmd::Verify { bar, bits, prec }) => {
            let ok = verify_hitting(&read_bar(&bar)?, &BinaryStream::parse(&bits)?, prec)?;
            writeln!(out, "{ok}").ok();
            if !ok {
                status = EXIT_VIOLATION;
            }
        }
        Command::Code(CodeCmd::Check { code, depth, kmax }) => {
            let report = code_validate(parse_code(&code)?.as_ref(), depth, kmax)?;
            writeln!(out, "checked depth {}", report.checked_depth).ok();
            writeln!(out, "violations {}", report.violations.len()).ok();
            for v in &report.violations {
                let words: Vec<String> = v.words.iter().map(|w| w.to_string()).collect();
                writeln!(out, "{:?} {}", v.rule, words.join(" ")).ok();
            }
            for (k, p) in report.progress.iter().enumerate() {
                let tag = match p {
                    Progress::Verified => "verified",
                    Progress::Inconclusive => "inconclusive",
                };
                writeln!(out, "k={k} {tag}").ok();
            }
            if !report.is_clean() {
                status = EXIT_VIOLATION;
            }
        }
        Command::Code(CodeCmd::Eval { code, at, prec }) => {
            writeln!(out, "{}", code_eval(&parse_code(&code)?, &parse_real(&at)?).approx(prec.prec)?).ok();
        }
        Command::Code(CodeCmd::Locate { code, k, path }) => {
            let n = code_locate(parse_code(&code)?.as_ref(), k, &TernaryStream::parse(&path)?, search_cap())?;
            writeln!(out, "{n}").ok();
        }
        Command::Code(CodeCmd::Ucmod { code, kmax }) => {
            let omega = code_uc_witness(&parse_code(&code)?, kmax, search_cap())?;
            let values: Vec<String> = omega.prefix(kmax + 1)?.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", values.join(" ")).ok();
        }
    }
    Ok((status, out))
}
