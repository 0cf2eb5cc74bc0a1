//! Partial sums F_N(z) = Σ_{n≤N} c_n zⁿ: exact at rational points, and in
//! fixed-point ball arithmetic at complex points of the unit disk. Digit
//! expansions at z = 1/2 and z = 1/3, and a sampled sector probe.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith_sieve::ArithSequence;
use crate::error::{invalid, Error, Result};
use crate::periodicity::{detect_eventual_period, PeriodClaim};

pub const DEFAULT_PRECISION: u32 = 128;
const MIN_PRECISION: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum EvalPoint {
    ExactRational(BigRational),
    /// z = re + i·im, evaluated with `precision` fractional bits.
    Complex { re: f64, im: f64, precision: u32 },
}

impl EvalPoint {
    pub fn rational(num: i64, den: i64) -> Self {
        EvalPoint::ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

/// Computed value and a bound on |computed − F_N(z)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

impl ComplexValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartialSum {
    Exact(BigRational),
    Approx(ComplexValue),
}

fn check_n(seq: &ArithSequence, n: usize) -> Result<()> {
    if n > seq.len() {
        return Err(Error::OutOfRange {
            index: n as u64,
            len: seq.len() as u64,
        });
    }
    Ok(())
}

pub fn partial_sum(seq: &ArithSequence, n: usize, z: &EvalPoint) -> Result<PartialSum> {
    match z {
        EvalPoint::ExactRational(q) => partial_sum_exact(seq, n, q).map(PartialSum::Exact),
        EvalPoint::Complex { re, im, precision } => {
            partial_sum_complex(seq, n, *re, *im, *precision).map(PartialSum::Approx)
        }
    }
}

/// Horner over exact rationals.
pub fn partial_sum_exact(seq: &ArithSequence, n: usize, z: &BigRational) -> Result<BigRational> {
    check_n(seq, n)?;
    let mut acc = BigRational::zero();
    for k in (1..=n).rev() {
        acc = acc * z + BigRational::from_integer(BigInt::from(seq.get(k)));
    }
    Ok(acc * z)
}

fn to_fixed(x: f64, precision: u32) -> BigInt {
    let q = BigRational::from_f64(x).expect("finite input") * BigRational::from_integer(BigInt::one() << precision);
    q.round().to_integer()
}

fn fixed_to_f64(x: &BigInt, precision: u32) -> f64 {
    // exact to within one f64 rounding
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = (x >> shift as usize).to_f64().unwrap_or(0.0);
    top * 2f64.powi((shift - precision as i64) as i32)
}

/// Fixed-point Horner with scale 2^precision. Each complex product is
/// truncated once per component (error < √2 ulp) and |z| < 1 keeps earlier
/// errors from growing, so the arithmetic error is below (N+1)·√2·2^{−precision}.
/// The perturbation from rounding z itself is added through |F_N'| ≤ Σ n ρ^{n−1}.
pub fn partial_sum_complex(seq: &ArithSequence, n: usize, re: f64, im: f64, precision: u32) -> Result<ComplexValue> {
    check_n(seq, n)?;
    if !(re.is_finite() && im.is_finite()) || re.hypot(im) >= 1.0 {
        return Err(invalid("complex evaluation point must lie in the open unit disk"));
    }
    if precision < MIN_PRECISION {
        return Err(invalid(format!("precision must be at least {MIN_PRECISION} bits")));
    }
    let p = precision as usize;
    let zr = to_fixed(re, precision);
    let zi = to_fixed(im, precision);
    let one = BigInt::one() << p;
    let (mut sr, mut si) = (BigInt::zero(), BigInt::zero());
    for k in (1..=n).rev() {
        let r = (&sr * &zr - &si * &zi) >> p;
        let i = (&sr * &zi + &si * &zr) >> p;
        sr = r;
        si = i;
        match seq.get(k) {
            1 => sr += &one,
            -1 => sr -= &one,
            _ => {}
        }
    }
    let r = (&sr * &zr - &si * &zi) >> p;
    let i = (&sr * &zi + &si * &zr) >> p;

    let out_re = fixed_to_f64(&r, precision);
    let out_im = fixed_to_f64(&i, precision);

    let ulp = 2f64.powi(-(precision as i32));
    let arithmetic = (n as f64 + 1.0) * std::f64::consts::SQRT_2 * ulp;
    let delta = std::f64::consts::SQRT_2 * 0.5 * ulp;
    let rho = re.hypot(im) * (1.0 + f64::EPSILON) + delta;
    let nf = n as f64;
    let deriv = if rho < 1.0 {
        (nf * (nf + 1.0) / 2.0).min(1.0 / ((1.0 - rho) * (1.0 - rho)))
    } else {
        nf * (nf + 1.0) / 2.0
    };
    let conversion = (out_re.abs() + out_im.abs()) * f64::EPSILON;
    let bound = (arithmetic + delta * deriv + conversion) * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    Ok(ComplexValue {
        re: out_re,
        im: out_im,
        error_bound: bound,
    })
}

/// Digits of Σ c_n b^{−n}: bits (c_n + 1)/2 at b = 2 for ±1 sequences, the
/// coefficients themselves as signed digits for b ≥ 3.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitRecord {
    pub base: u32,
    pub digits: Vec<i8>,
    /// Σ_{n≤N} c_n b^{−n}
    pub value: BigRational,
    /// At b = 2: Σ c_n 2^{−n} = 2·Σ b_n 2^{−n} − (1 − 2^{−N}) checked exactly.
    pub identity_verified: Option<bool>,
    pub scan_bounds: Option<(u64, u64)>,
    pub periodicity: Option<PeriodClaim>,
}

impl DigitRecord {
    /// The exact rational spelled by the digits alone.
    pub fn reconstruct(&self) -> BigRational {
        let b = BigRational::from_integer(BigInt::from(self.base));
        let inv = b.recip();
        let mut acc = BigRational::zero();
        let mut w = inv.clone();
        for &d in &self.digits {
            acc += &w * BigRational::from_integer(BigInt::from(d));
            w *= &inv;
        }
        if self.base == 2 {
            let n = self.digits.len() as i32;
            let tail = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << n as usize);
            acc * BigRational::from_integer(BigInt::from(2)) - tail
        } else {
            acc
        }
    }

    pub fn digit_string(&self) -> String {
        self.digits
            .iter()
            .map(|&d| match (self.base, d) {
                (2, 0) => '0',
                (2, _) => '1',
                (_, 1) => '+',
                (_, -1) => '-',
                _ => '0',
            })
            .collect()
    }
}

impl fmt::Display for DigitRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base = {}", self.base)?;
        writeln!(f, "digits = {}", self.digit_string())?;
        writeln!(f, "value = {}", self.value)?;
        if let Some(ok) = self.identity_verified {
            writeln!(f, "affine identity: {}", if ok { "verified" } else { "FAILED" })?;
        }
        match (self.scan_bounds, self.periodicity) {
            (Some((m, k)), Some(c)) => write!(f, "digit periodicity (M_max={m}, k_max={k}): {c}"),
            (Some((m, k)), None) => write!(f, "digit periodicity (M_max={m}, k_max={k}): none"),
            _ => write!(f, "digit periodicity: prefix too short to scan"),
        }
    }
}

pub fn digits_in_base(seq: &ArithSequence, base: u32, n: usize) -> Result<DigitRecord> {
    if base < 2 {
        return Err(invalid(format!("base {base} must be at least 2")));
    }
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    check_n(seq, n)?;
    let coeffs: Vec<i8> = seq.iter().take(n).collect();
    let z = BigRational::new(BigInt::one(), BigInt::from(base));
    let value = partial_sum_exact(seq, n, &z)?;
    let (digits, identity) = if base == 2 {
        if coeffs.contains(&0) {
            return Err(Error::UnsupportedAlphabet(
                "base 2 needs a ±1 sequence; zero coefficients have no bit".into(),
            ));
        }
        let bits: Vec<i8> = coeffs.iter().map(|&c| (c + 1) / 2).collect();
        let bit_seq = ArithSequence::from_values(&bits)?;
        let bit_sum = partial_sum_exact(&bit_seq, n, &z)?;
        let tail = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << n);
        let ok = value == bit_sum * BigRational::from_integer(BigInt::from(2)) - tail;
        (bits, Some(ok))
    } else {
        (coeffs, None)
    };
    let (scan_bounds, periodicity) = if n >= 3 {
        let k_max = (n / 3) as u64;
        let m_max = n as u64 - 2 * k_max;
        let s = ArithSequence::from_values(&digits)?;
        (Some((m_max, k_max)), detect_eventual_period(&s, m_max, k_max)?)
    } else {
        (None, None)
    };
    Ok(DigitRecord {
        base,
        digits,
        value,
        identity_verified: identity,
        scan_bounds,
        periodicity,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpec {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub radii: Vec<f64>,
    pub samples_per_arc: usize,
    pub precision: u32,
}

impl SectorSpec {
    pub fn new(theta_lo: f64, theta_hi: f64, radii: Vec<f64>, samples_per_arc: usize) -> Result<Self> {
        let spec = SectorSpec {
            theta_lo,
            theta_hi,
            radii,
            samples_per_arc,
            precision: DEFAULT_PRECISION,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta_lo < self.theta_hi) {
            return Err(invalid("sector needs theta_lo < theta_hi"));
        }
        if self.radii.is_empty() {
            return Err(invalid("no radii given"));
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(invalid("every radius must lie strictly inside (0, 1)"));
        }
        if self.samples_per_arc == 0 {
            return Err(invalid("samples_per_arc must be at least 1"));
        }
        Ok(())
    }

    /// Uniform angles, endpoints included (the midpoint for a single sample).
    pub fn angles(&self) -> Vec<f64> {
        let s = self.samples_per_arc;
        if s == 1 {
            return vec![0.5 * (self.theta_lo + self.theta_hi)];
        }
        (0..s)
            .map(|j| self.theta_lo + (self.theta_hi - self.theta_lo) * j as f64 / (s - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSample {
    pub radius: f64,
    pub theta: f64,
    pub value: ComplexValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorReport {
    /// Sorted by radius, then angle.
    pub samples: Vec<ProbeSample>,
}

impl SectorReport {
    /// Per radius, the sample with the largest computed |F_N|.
    pub fn maxima(&self) -> Vec<ProbeSample> {
        let mut out: Vec<ProbeSample> = Vec::new();
        for s in &self.samples {
            match out.last_mut() {
                Some(last) if last.radius == s.radius => {
                    if s.value.abs() > last.value.abs() {
                        *last = *s;
                    }
                }
                _ => out.push(*s),
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,theta,re,im,abs_FN,error_bound\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.radius,
                s.theta,
                s.value.re,
                s.value.im,
                s.value.abs(),
                s.value.error_bound
            ));
        }
        out
    }
}

/// Observational: evaluates |F_N| on the grid, asserting nothing about
/// boundedness.
pub fn sector_bound_probe(seq: &ArithSequence, spec: &SectorSpec, n: usize) -> Result<SectorReport> {
    spec.validate()?;
    check_n(seq, n)?;
    let mut radii = spec.radii.clone();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let angles = spec.angles();
    let grid: Vec<(f64, f64)> = radii
        .iter()
        .flat_map(|&r| angles.iter().map(move |&t| (r, t)))
        .collect();
    let samples = grid
        .par_iter()
        .map(|&(radius, theta)| {
            let (s, c) = theta.sin_cos();
            partial_sum_complex(seq, n, radius * c, radius * s, spec.precision).map(|value| ProbeSample {
                radius,
                theta,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorReport { samples })
}
