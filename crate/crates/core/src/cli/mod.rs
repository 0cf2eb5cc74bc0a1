//! The `aps` command line.
//!
//! Exit codes: 0 success, 1 user error, 2 corrupt data or internal failure.

pub mod cache;
pub mod literals;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::annihilator::search_annihilator;
use crate::arith_sieve::{sieve_with, ArithSequence, SieveConfig, Source};
use crate::error::{invalid, Error, Result};
use crate::periodicity::{refute_period_cm, PeriodClaim};
use crate::rationality::classify_prefix;
use crate::root_bounds::{cauchy_radius, count_roots_in_disk_adaptive};
use crate::series_eval::{digits_in_base, partial_sum_exact, sector_bound_probe, SectorSpec, DEFAULT_PRECISION};
use crate::zero_runs::{crt_zero_run, verify_zero_run};

use literals::{parse_assignment, parse_floats, parse_polynomial, parse_rational, parse_values, rational_string};

/// Values of the prefix echoed by `sieve`.
const ECHO_TERMS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "aps", version, about = "Power series with coefficients from arithmetic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Func {
    Liouville,
    Moebius,
    Cm,
    Literal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieve f(1..N) and optionally write a cache file.
    Sieve {
        #[arg(long, value_enum)]
        func: Func,
        /// Prime sign file for `cm`: `default: +1|-1`, then `p: +1|-1` lines.
        #[arg(long, required_if_eq("func", "cm"))]
        assignment: Option<PathBuf>,
        /// Coefficients for `literal`, e.g. `1,-1,0`.
        #[arg(long, allow_hyphen_values = true, required_if_eq("func", "literal"))]
        values: Option<String>,
        /// Prefix length (defaults to the number of literal values).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Rational candidate from an eventual period, or exclusion at scale.
    Classify {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        mmax: u64,
        #[arg(long)]
        kmax: u64,
    },
    /// Witness against an eventual period of a completely multiplicative function.
    Refute {
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        preperiod: u64,
        #[arg(long)]
        period: u64,
    },
    /// Search for sum a_i(z) F(z)^i = 0 mod z^(T+1).
    Annihilate {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        trunc: usize,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        deg: usize,
    },
    /// Cauchy root radius and certified root count.
    Rootbound {
        /// Integer coefficients, lowest degree first: `-1,0,1` is z^2 - 1.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Count roots in |z| < RADIUS (p/q, integer or decimal).
        #[arg(long)]
        count_at: Option<String>,
    },
    /// CRT certificate for L consecutive integers divisible by prime squares.
    Zerorun {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Partial sums: exact value at rational z, digit record, or sector CSV.
    #[command(group(ArgGroup::new("mode").required(true).args(["z", "digits", "radii"])))]
    Eval {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        n: usize,
        /// Rational point p/q.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, requires = "base")]
        digits: bool,
        #[arg(long)]
        base: Option<u32>,
        /// Sector angles LO,HI in radians; default -pi/8,pi/8.
        #[arg(long, allow_hyphen_values = true, requires = "radii")]
        sector: Option<String>,
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CorruptCache(_) | Error::UnsupportedVersion(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = write!(err, "{}", e.render());
                return 1;
            }
            let msg = e.render().to_string();
            let line = msg.lines().next().unwrap_or("error: bad arguments");
            let _ = writeln!(err, "{line}");
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn open_cache(path: &Path) -> Result<ArithSequence> {
    cache::cache_read(path).map_err(|e| match e {
        Error::Io(io) => invalid(format!("cannot read {}: {io}", path.display())),
        e => e,
    })
}

fn execute(cmd: Command) -> Result<String> {
    let mut s = String::new();
    match cmd {
        Command::Sieve {
            func,
            assignment,
            values,
            n,
            cache: cache_path,
        } => {
            let seq = match func {
                Func::Literal => {
                    let v = parse_values(values.as_deref().unwrap_or_default())?;
                    let seq = ArithSequence::from_values(&v)?;
                    match n {
                        Some(n) if n > seq.len() => {
                            return Err(invalid(format!("--n {n} exceeds the {} literal values", seq.len())))
                        }
                        Some(n) => seq.truncate(n)?,
                        None => seq,
                    }
                }
                other => {
                    let n = n.ok_or_else(|| invalid("--n is required"))?;
                    let source = match other {
                        Func::Liouville => Source::Liouville,
                        Func::Moebius => Source::Moebius,
                        _ => {
                            let path = assignment.ok_or_else(|| invalid("--assignment is required for cm"))?;
                            Source::CompletelyMultiplicative(parse_assignment(&read_text(&path)?)?)
                        }
                    };
                    sieve_with(source, n, &SieveConfig::default())?
                }
            };
            let (mut plus, mut minus, mut zero) = (0usize, 0usize, 0usize);
            for v in seq.iter() {
                match v {
                    1 => plus += 1,
                    -1 => minus += 1,
                    _ => zero += 1,
                }
            }
            writeln!(s, "source = {}", seq.source().name()).unwrap();
            writeln!(s, "N = {}", seq.len()).unwrap();
            writeln!(s, "counts: +1 = {plus}, -1 = {minus}, 0 = {zero}").unwrap();
            writeln!(s, "sum = {}", plus as i64 - minus as i64).unwrap();
            let head: Vec<String> = seq.iter().take(ECHO_TERMS).map(|v| v.to_string()).collect();
            writeln!(s, "f(1..{}) = {}", head.len(), head.join(",")).unwrap();
            if let Some(path) = cache_path {
                cache::cache_write(&seq, &path)?;
                writeln!(s, "cache = {}", path.display()).unwrap();
            }
        }
        Command::Classify { cache, mmax, kmax } => {
            let seq = open_cache(&cache)?;
            writeln!(s, "{}", classify_prefix(&seq, mmax, kmax)?).unwrap();
        }
        Command::Refute {
            assignment,
            preperiod,
            period,
        } => {
            let a = parse_assignment(&read_text(&assignment)?)?;
            let w = refute_period_cm(&a, PeriodClaim::new(preperiod, period)?)?;
            writeln!(s, "{w}").unwrap();
            writeln!(s, "f(a) = {}, f(b) = {}", a.eval(w.a), a.eval(w.b)).unwrap();
        }
        Command::Annihilate {
            cache,
            trunc,
            order,
            deg,
        } => {
            let seq = open_cache(&cache)?;
            match search_annihilator(&seq, trunc, order, deg)? {
                Some(c) => writeln!(s, "{c}").unwrap(),
                None => writeln!(s, "none at this scale").unwrap(),
            }
        }
        Command::Rootbound { poly, count_at } => {
            let p = parse_polynomial(&poly)?;
            let r = cauchy_radius(&p)?;
            writeln!(s, "r = {}", rational_string(&r)).unwrap();
            if let Some(radius) = count_at {
                let radius = parse_rational(&radius)?;
                let (n, bits) = count_roots_in_disk_adaptive(&p, &radius)?;
                writeln!(s, "roots in |z| < {} = {n} (certified at {bits} bits)", rational_string(&radius)).unwrap();
            }
        }
        Command::Zerorun { length, verify } => {
            let cert = crt_zero_run(length)?;
            writeln!(s, "{cert}").unwrap();
            if verify {
                if !verify_zero_run(&cert) {
                    return Err(Error::InvalidClaim("certificate failed verification".into()));
                }
                writeln!(s, "verified: all {length} divisibilities hold and mu(x+i) = 0 for i = 1..{length}").unwrap();
            }
        }
        Command::Eval {
            cache,
            n,
            z,
            digits,
            base,
            sector,
            radii,
            samples,
            precision,
        } => {
            let seq = open_cache(&cache)?;
            if let Some(z) = z {
                let z = parse_rational(&z)?;
                let v = partial_sum_exact(&seq, n, &z)?;
                writeln!(s, "F_{n}({}) = {}", rational_string(&z), rational_string(&v)).unwrap();
            } else if digits {
                let base = base.ok_or_else(|| invalid("--base is required with --digits"))?;
                writeln!(s, "{}", digits_in_base(&seq, base, n)?).unwrap();
            } else {
                let (lo, hi) = match sector {
                    Some(text) => match parse_floats(&text)?[..] {
                        [lo, hi] => (lo, hi),
                        _ => return Err(invalid("--sector takes exactly two angles LO,HI")),
                    },
                    None => (-std::f64::consts::FRAC_PI_8, std::f64::consts::FRAC_PI_8),
                };
                let radii = parse_floats(radii.as_deref().unwrap_or_default())?;
                let mut spec = SectorSpec::new(lo, hi, radii, samples)?;
                spec.precision = precision;
                s.push_str(&sector_bound_probe(&seq, &spec, n)?.to_csv());
            }
        }
    }
    Ok(s)
}
