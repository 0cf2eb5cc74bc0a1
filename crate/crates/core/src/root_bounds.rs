//! Cauchy's root radius and a certified count of roots inside a disk.
//!
//! Every root of a_n z^n + … + a_0 lies in |z| < 1 + max_{k<n} |a_k|/|a_n|.
//!
//! The count is an argument-principle winding number. The circle |z| = R is
//! sampled at the rational points R((1 − t²) + 2ti)/(1 + t²) (and their
//! negatives) for dyadic t ∈ [−1, 1], so p is evaluated exactly over the
//! Gaussian integers. Between consecutive samples the arc length is at most
//! 2R·Δt, so if 2·L·R·Δt < |p(z_a)|, with L = Σ k|a_k|R^{k−1} bounding |p'| on
//! the circle, the image of the arc stays in a disk around p(z_a) that
//! excludes 0, the change of argument is below π/2, and the quadrant of p
//! moves by at most one step. Intervals failing that test are bisected down
//! to Δt = 2^{−precision}; a failure there is reported as indeterminate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::IntPolynomial;

pub const START_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1024;

/// 2^INITIAL_SPLIT_LOG starting intervals of t per half circle.
const INITIAL_SPLIT_LOG: u32 = 4;
const MAX_EVALUATIONS: usize = 1 << 20;

/// r = 1 + max_{0≤k<n} |a_k| / |a_n| as an exact rational.
pub fn cauchy_radius(p: &IntPolynomial) -> Result<BigRational> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(invalid("Cauchy radius needs degree at least 1")),
    };
    let lead = p.coeffs()[n].abs();
    let max = p.coeffs()[..n].iter().map(|c| c.abs()).max().unwrap_or_default();
    Ok(BigRational::one() + BigRational::new(max, lead))
}

/// Dyadic number num / 2^exp.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    fn new(num: i64, exp: u32) -> Self {
        Dyadic {
            num: BigInt::from(num),
            exp,
        }
    }

    /// Same value with one more bit of exponent.
    fn refine(&self) -> Self {
        Dyadic {
            num: &self.num * 2,
            exp: self.exp + 1,
        }
    }
}

struct Circle<'a> {
    coeffs: &'a [BigInt],
    deg: usize,
    rn: BigInt,
    rd: BigInt,
    /// 4·Ln²·rn² and Ld²·rd², the fixed parts of the arc test.
    lhs_const: BigInt,
    rhs_const: BigInt,
    evaluations: usize,
}

struct Sample {
    quadrant: u8,
    /// |P|² and v^{2n} for p(z) = P / v^n.
    abs2: BigInt,
    v2n: BigInt,
}

impl<'a> Circle<'a> {
    fn new(p: &'a IntPolynomial, radius: &BigRational) -> Self {
        let coeffs = p.coeffs();
        let deg = coeffs.len() - 1;
        let (rn, rd) = (radius.numer().clone(), radius.denom().clone());
        // L = Σ k|a_k| R^{k−1} = Ln / Ld with Ld = rd^{n−1}
        let mut ln = BigInt::zero();
        for (k, a) in coeffs.iter().enumerate().skip(1) {
            ln += a.abs()
                * BigInt::from(k)
                * num_traits::pow(rn.clone(), k - 1)
                * num_traits::pow(rd.clone(), deg - k);
        }
        let ld = num_traits::pow(rd.clone(), deg - 1);
        let lhs_const = BigInt::from(4) * &ln * &ln * &rn * &rn;
        let rhs_const = &ld * &ld * &rd * &rd;
        Circle {
            coeffs,
            deg,
            rn,
            rd,
            lhs_const,
            rhs_const,
            evaluations: 0,
        }
    }

    fn eval(&mut self, t: &Dyadic, left_half: bool) -> Sample {
        self.evaluations += 1;
        let k = &t.num;
        let d = BigInt::one() << t.exp;
        let mut ure = &self.rn * (&d * &d - k * k);
        let mut uim = &self.rn * BigInt::from(2) * k * &d;
        if left_half {
            ure = -ure;
            uim = -uim;
        }
        let v = &self.rd * (&d * &d + k * k);
        // Horner in homogeneous form: P = Σ a_j u^j v^{n−j}
        let mut pre = self.coeffs[self.deg].clone();
        let mut pim = BigInt::zero();
        let mut vpow = BigInt::one();
        for j in (0..self.deg).rev() {
            let re = &pre * &ure - &pim * &uim;
            let im = &pre * &uim + &pim * &ure;
            vpow *= &v;
            pre = re + &self.coeffs[j] * &vpow;
            pim = im;
        }
        let abs2 = &pre * &pre + &pim * &pim;
        Sample {
            quadrant: quadrant(&pre, &pim),
            abs2,
            v2n: &vpow * &vpow,
        }
    }

    /// 2·L·R·Δt < |p(z)|, with Δt = num / 2^exp.
    fn arc_ok(&self, s: &Sample, dt: &Dyadic) -> bool {
        let dd = BigInt::one() << dt.exp;
        let lhs = &self.lhs_const * &dt.num * &dt.num * &s.v2n;
        let rhs = &s.abs2 * &self.rhs_const * &dd * &dd;
        lhs < rhs
    }
}

fn quadrant(re: &BigInt, im: &BigInt) -> u8 {
    use num_bigint::Sign::{Minus, Plus};
    match (re.sign(), im.sign()) {
        (Plus, s) if s != Minus => 0,
        (r, Plus) if r != Plus => 1,
        (Minus, s) if s != Plus => 2,
        _ => 3,
    }
}

/// Quadrants of p along one half circle, t from −1 to 1.
fn walk_half(circle: &mut Circle, left: bool, precision: u32) -> Result<Vec<u8>> {
    let indeterminate = || Error::IndeterminateAtPrecision { precision };
    let base = INITIAL_SPLIT_LOG;
    let steps = 1i64 << base;
    // t-intervals [lo, lo + width], popped left to right
    let mut stack: Vec<(Dyadic, Dyadic)> = (0..steps)
        .rev()
        .map(|j| (Dyadic::new(2 * j - steps, base), Dyadic::new(2, base)))
        .collect();
    let mut quadrants = Vec::new();
    let mut cached: Option<(Dyadic, Sample)> = None;
    while let Some((lo, width)) = stack.pop() {
        if circle.evaluations > MAX_EVALUATIONS {
            return Err(indeterminate());
        }
        let sample = match cached.take() {
            Some((t, s)) if t == lo => s,
            _ => circle.eval(&lo, left),
        };
        if circle.arc_ok(&sample, &width) {
            quadrants.push(sample.quadrant);
            continue;
        }
        if width.exp >= precision {
            return Err(indeterminate());
        }
        let half = Dyadic {
            num: width.num.clone(),
            exp: width.exp + 1,
        };
        let lo2 = lo.refine();
        let mid = Dyadic {
            num: &lo2.num + &half.num,
            exp: lo2.exp,
        };
        stack.push((mid, half.clone()));
        stack.push((lo2.clone(), half));
        // the left half-interval starts at the same point
        cached = Some((lo2, sample));
    }
    let end = circle.eval(&Dyadic::new(1, 0), left);
    if end.abs2.is_zero() {
        return Err(indeterminate());
    }
    quadrants.push(end.quadrant);
    Ok(quadrants)
}

/// Certified number of roots (with multiplicity) in |z| < radius. The
/// precision bounds the finest parameter step, 2^{−precision}.
pub fn count_roots_in_disk(p: &IntPolynomial, radius: &BigRational, precision: u32) -> Result<usize> {
    if p.degree().is_none_or(|d| d == 0) {
        return Err(invalid("root counting needs degree at least 1"));
    }
    if !radius.is_positive() {
        return Err(invalid("radius must be positive"));
    }
    if precision < INITIAL_SPLIT_LOG {
        return Err(invalid(format!("precision must be at least {INITIAL_SPLIT_LOG} bits")));
    }
    let mut circle = Circle::new(p, radius);
    let mut q = walk_half(&mut circle, false, precision)?;
    q.extend(walk_half(&mut circle, true, precision)?);
    winding(&q).ok_or(Error::IndeterminateAtPrecision { precision })
}

/// Net quarter turns around the closed sample loop, divided by four.
fn winding(q: &[u8]) -> Option<usize> {
    let mut total: i64 = 0;
    for (i, &a) in q.iter().enumerate() {
        let b = q[(i + 1) % q.len()];
        match (b + 4 - a) % 4 {
            0 => {}
            1 => total += 1,
            3 => total -= 1,
            _ => return None,
        }
    }
    if total % 4 != 0 || total < 0 {
        return None;
    }
    Some((total / 4) as usize)
}

/// Doubles the precision from 64 up to 1024 bits until the count certifies.
pub fn count_roots_in_disk_adaptive(p: &IntPolynomial, radius: &BigRational) -> Result<(usize, u32)> {
    let mut precision = START_PRECISION;
    loop {
        match count_roots_in_disk(p, radius, precision) {
            Ok(n) => return Ok((n, precision)),
            Err(Error::IndeterminateAtPrecision { .. }) if precision < MAX_PRECISION => precision *= 2,
            Err(e) => return Err(e),
        }
    }
}
