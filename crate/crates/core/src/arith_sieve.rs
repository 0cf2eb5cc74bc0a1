//! Coefficient prefixes of the Liouville, Möbius and completely multiplicative
//! ±1 functions, stored two bits per coefficient.
//!
//! Below [`SieveConfig::segment_threshold`] entries the tables come from a
//! linear sieve; above it the range `[1, N]` is cut into segments that are
//! factored independently (and in parallel) against the primes up to `√N`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::primes::{factorize, is_prime, isqrt, next_prime, primes_up_to};

/// Value of a completely multiplicative ±1 function at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Signs on the primes, extended to ℕ by complete multiplicativity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeAssignment {
    default_sign: Sign,
    exceptions: BTreeMap<u64, Sign>,
}

impl PrimeAssignment {
    /// Every key of `exceptions` must be prime; a composite key is an error.
    pub fn new(default_sign: Sign, exceptions: impl IntoIterator<Item = (u64, Sign)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, s) in exceptions {
            if !is_prime(p) {
                return Err(Error::CompositeKey(p));
            }
            map.insert(p, s);
        }
        Ok(PrimeAssignment {
            default_sign,
            exceptions: map,
        })
    }

    /// λ: every prime maps to −1.
    pub fn liouville() -> Self {
        PrimeAssignment {
            default_sign: Sign::Minus,
            exceptions: BTreeMap::new(),
        }
    }

    pub fn default_sign(&self) -> Sign {
        self.default_sign
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Sign> {
        &self.exceptions
    }

    /// Sign assigned to the prime `p` (no primality check).
    pub fn sign_of(&self, p: u64) -> Sign {
        self.exceptions.get(&p).copied().unwrap_or(self.default_sign)
    }

    /// The smallest prime with sign −1, if any.
    pub fn smallest_negative_prime(&self) -> Option<u64> {
        match self.default_sign {
            Sign::Plus => self
                .exceptions
                .iter()
                .find(|(_, &s)| s == Sign::Minus)
                .map(|(&p, _)| p),
            Sign::Minus => {
                // finitely many exceptions, so this terminates
                let mut p = 2;
                while self.sign_of(p) == Sign::Plus {
                    p = next_prime(p);
                }
                Some(p)
            }
        }
    }

    /// f(n) by trial division.
    pub fn eval(&self, n: u64) -> i8 {
        factorize(n).into_iter().fold(1i8, |acc, (p, e)| {
            if e % 2 == 1 {
                acc * self.sign_of(p).value()
            } else {
                acc
            }
        })
    }
}

/// The generating rule a sequence was produced from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Source {
    Liouville,
    Moebius,
    CompletelyMultiplicative(PrimeAssignment),
    Literal,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::Liouville => "liouville",
            Source::Moebius => "moebius",
            Source::CompletelyMultiplicative(_) => "cm",
            Source::Literal => "literal",
        }
    }
}

const CODE_ZERO: u8 = 0b00;
const CODE_PLUS: u8 = 0b01;
const CODE_MINUS: u8 = 0b11;

pub(crate) fn encode(v: i8) -> u8 {
    match v {
        0 => CODE_ZERO,
        1 => CODE_PLUS,
        -1 => CODE_MINUS,
        _ => unreachable!("coefficient {v} outside {{-1, 0, 1}}"),
    }
}

fn decode(code: u8) -> Option<i8> {
    match code {
        CODE_ZERO => Some(0),
        CODE_PLUS => Some(1),
        CODE_MINUS => Some(-1),
        _ => None,
    }
}

fn pack(values: &[i8]) -> Vec<u8> {
    let mut bytes = vec![0u8; values.len().div_ceil(4)];
    for (i, &v) in values.iter().enumerate() {
        bytes[i / 4] |= encode(v) << (2 * (i % 4));
    }
    bytes
}

/// Finite prefix `(c_1, …, c_N)` with entries in {−1, 0, +1}.
#[derive(Clone, PartialEq, Eq)]
pub struct ArithSequence {
    packed: Vec<u8>,
    len: usize,
    source: Source,
}

impl fmt::Debug for ArithSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithSequence")
            .field("len", &self.len)
            .field("source", &self.source)
            .finish()
    }
}

impl ArithSequence {
    /// A literal prefix; `values[0]` is c_1.
    pub fn from_values(values: &[i8]) -> Result<Self> {
        Self::with_source(Source::Literal, values)
    }

    pub(crate) fn with_source(source: Source, values: &[i8]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("sequence length must be at least 1"));
        }
        if let Some(v) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(invalid(format!("coefficient {v} outside {{-1, 0, 1}}")));
        }
        Ok(ArithSequence {
            packed: pack(values),
            len: values.len(),
            source,
        })
    }

    /// Rebuilds a sequence from its 2-bit payload, rejecting code `0b10` and
    /// nonzero padding bits.
    pub fn from_packed(source: Source, len: usize, packed: Vec<u8>) -> Result<Self> {
        if len == 0 {
            return Err(invalid("sequence length must be at least 1"));
        }
        if packed.len() != len.div_ceil(4) {
            return Err(Error::CorruptCache(format!(
                "payload has {} bytes, expected {}",
                packed.len(),
                len.div_ceil(4)
            )));
        }
        for (b, &byte) in packed.iter().enumerate() {
            for slot in 0..4 {
                let code = (byte >> (2 * slot)) & 0b11;
                let index = 4 * b + slot;
                if index >= len {
                    if code != 0 {
                        return Err(Error::CorruptCache("nonzero padding bits".into()));
                    }
                } else if decode(code).is_none() {
                    return Err(Error::CorruptCache(format!("invalid code 0b10 at n = {}", index + 1)));
                }
            }
        }
        Ok(ArithSequence { packed, len, source })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn packed(&self) -> &[u8] {
        &self.packed
    }

    /// c_n for `1 <= n <= len`; panics outside that range.
    #[inline]
    pub fn get(&self, n: usize) -> i8 {
        assert!(n >= 1 && n <= self.len, "index {n} outside 1..={}", self.len);
        let i = n - 1;
        let code = (self.packed[i / 4] >> (2 * (i % 4))) & 0b11;
        // 0b01 -> 1, 0b11 -> -1, 0b00 -> 0
        match code {
            CODE_PLUS => 1,
            CODE_MINUS => -1,
            _ => 0,
        }
    }

    pub fn try_get(&self, n: u64) -> Result<i8> {
        if n == 0 || n > self.len as u64 {
            return Err(Error::OutOfRange {
                index: n,
                len: self.len as u64,
            });
        }
        Ok(self.get(n as usize))
    }

    /// Coefficients c_1..c_N in order.
    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (1..=self.len).map(move |n| self.get(n))
    }

    pub fn to_vec(&self) -> Vec<i8> {
        self.iter().collect()
    }

    /// The first `n` coefficients, keeping the source tag.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len {
            return Err(invalid(format!("cannot truncate length {} to {n}", self.len)));
        }
        Self::with_source(self.source.clone(), &self.to_vec()[..n])
    }

    pub fn is_plus_minus_one(&self) -> bool {
        self.iter().all(|v| v != 0)
    }
}

/// Sieve tuning knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Prefixes longer than this use the segmented path.
    pub segment_threshold: usize,
    /// Entries per segment; rounded up to a multiple of 4.
    pub segment_len: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_threshold: 1 << 26,
            segment_len: 1 << 20,
        }
    }
}

pub fn sieve_liouville(n: usize) -> Result<ArithSequence> {
    sieve_with(Source::Liouville, n, &SieveConfig::default())
}

pub fn sieve_mobius(n: usize) -> Result<ArithSequence> {
    sieve_with(Source::Moebius, n, &SieveConfig::default())
}

pub fn sieve_cm(assignment: &PrimeAssignment, n: usize) -> Result<ArithSequence> {
    sieve_with(
        Source::CompletelyMultiplicative(assignment.clone()),
        n,
        &SieveConfig::default(),
    )
}

/// Sieves the first `n` values of a rule-based source.
pub fn sieve_with(source: Source, n: usize, config: &SieveConfig) -> Result<ArithSequence> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if source == Source::Literal {
        return Err(invalid("literal sequences cannot be sieved"));
    }
    let packed = if n <= config.segment_threshold {
        pack(&linear_sieve(&source, n))
    } else {
        segmented_sieve(&source, n, config)
    };
    Ok(ArithSequence {
        packed,
        len: n,
        source,
    })
}

const UNSET: i8 = 2;

fn prime_value(source: &Source, p: u64) -> i8 {
    match source {
        Source::Liouville | Source::Moebius => -1,
        Source::CompletelyMultiplicative(a) => a.sign_of(p).value(),
        Source::Literal => unreachable!(),
    }
}

/// Linear sieve producing values directly; `i % p == 0` in the inner loop
/// identifies p as the smallest prime factor of i.
fn linear_sieve(source: &Source, n: usize) -> Vec<i8> {
    let mut vals = vec![UNSET; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    let moebius = matches!(source, Source::Moebius);
    vals[1] = 1;
    for i in 2..=n {
        if vals[i] == UNSET {
            vals[i] = prime_value(source, i as u64);
            primes.push(i as u32);
        }
        let vi = vals[i];
        for &p in &primes {
            let m = i * p as usize;
            if m > n {
                break;
            }
            let divides = i % p as usize == 0;
            vals[m] = if moebius {
                if divides {
                    0
                } else {
                    -vi
                }
            } else {
                vals[p as usize] * vi
            };
            if divides {
                break;
            }
        }
    }
    vals.remove(0);
    vals
}

fn segmented_sieve(source: &Source, n: usize, config: &SieveConfig) -> Vec<u8> {
    let base = primes_up_to(isqrt(n as u64) as usize);
    let seg = config.segment_len.max(4).div_ceil(4) * 4;
    let starts: Vec<usize> = (1..=n).step_by(seg).collect();
    let chunks: Vec<Vec<u8>> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + seg - 1).min(n);
            pack(&sieve_segment(source, &base, lo, hi))
        })
        .collect();
    chunks.concat()
}

/// Values for `lo..=hi` by stripping every base prime from each entry.
fn sieve_segment(source: &Source, base: &[u32], lo: usize, hi: usize) -> Vec<i8> {
    let width = hi - lo + 1;
    let mut rem: Vec<u64> = (lo as u64..=hi as u64).collect();
    let mut vals = vec![1i8; width];
    for &p in base {
        let p = p as u64;
        if p * p > hi as u64 {
            break;
        }
        let fp = prime_value(source, p);
        let first = (lo as u64).div_ceil(p) * p;
        let mut m = first;
        while m <= hi as u64 {
            let idx = (m - lo as u64) as usize;
            let mut e = 0u32;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                e += 1;
            }
            vals[idx] = match source {
                Source::Moebius if e >= 2 => 0,
                _ if e % 2 == 1 => vals[idx] * fp,
                _ => vals[idx],
            };
            m += p;
        }
    }
    for (idx, r) in rem.into_iter().enumerate() {
        if r > 1 {
            vals[idx] *= prime_value(source, r);
        }
    }
    vals
}

/// f(n) by trial division, independent of the sieve tables.
pub fn value_by_factorization(source: &Source, n: u64) -> Result<i8> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let factors = factorize(n);
    Ok(match source {
        Source::Liouville => {
            let omega: u32 = factors.iter().map(|&(_, e)| e).sum();
            if omega % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Source::Moebius => {
            if factors.iter().any(|&(_, e)| e >= 2) {
                0
            } else if factors.len() % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Source::CompletelyMultiplicative(a) => a.eval(n),
        Source::Literal => return Err(invalid("literal sequences have no generating rule")),
    })
}
