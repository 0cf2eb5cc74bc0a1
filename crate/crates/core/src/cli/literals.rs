//! Text formats accepted on the command line.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith_sieve::{PrimeAssignment, Sign};
use crate::error::{invalid, Result};
use crate::poly::IntPolynomial;

fn parse_sign(s: &str) -> Option<Sign> {
    match s.trim() {
        "+1" | "1" => Some(Sign::Plus),
        "-1" => Some(Sign::Minus),
        _ => None,
    }
}

/// `default: +1|-1` on the first line, then `p: +1|-1` lines. `#` starts a
/// comment.
pub fn parse_assignment(text: &str) -> Result<PrimeAssignment> {
    let mut default = None;
    let mut exceptions: Vec<(u64, Sign)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |what: &str| invalid(format!("assignment line {}: {what}: {raw:?}", lineno + 1));
        let (key, value) = line.split_once(':').ok_or_else(|| err("expected `key: sign`"))?;
        let sign = parse_sign(value).ok_or_else(|| err("sign must be +1 or -1"))?;
        let key = key.trim();
        if key == "default" {
            if default.is_some() || !exceptions.is_empty() {
                return Err(err("`default` must appear once, first"));
            }
            default = Some(sign);
        } else {
            if default.is_none() {
                return Err(err("`default` must come first"));
            }
            let p: u64 = key.parse().map_err(|_| err("key is not an integer"))?;
            if exceptions.iter().any(|&(q, _)| q == p) {
                return Err(err("duplicate prime"));
            }
            exceptions.push((p, sign));
        }
    }
    let default = default.ok_or_else(|| invalid("assignment file has no `default` line"))?;
    PrimeAssignment::new(default, exceptions)
}

/// Low-degree-first comma-separated integers, e.g. `-1,0,1` for z² − 1.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial> {
    let coeffs = text
        .split(',')
        .map(|t| {
            BigInt::from_str(t.trim()).map_err(|_| invalid(format!("bad polynomial coefficient {:?}", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coeffs))
}

/// `p/q`, an integer, or a plain decimal such as `2.5`, read exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || invalid(format!("bad rational literal {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(invalid("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?.magnitude().clone().into()
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let v = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -v } else { v });
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

/// Comma-separated coefficients in {−1, 0, 1}.
pub fn parse_values(text: &str) -> Result<Vec<i8>> {
    text.split(',')
        .map(|t| match t.trim() {
            "1" | "+1" => Ok(1),
            "0" => Ok(0),
            "-1" => Ok(-1),
            other => Err(invalid(format!("coefficient {other:?} not in {{-1, 0, 1}}"))),
        })
        .collect()
}

/// Comma-separated floats.
pub fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad number {:?}", t.trim()))))
        .collect()
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
