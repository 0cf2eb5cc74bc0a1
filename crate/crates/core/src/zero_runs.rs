//! CRT certificates for runs of consecutive integers that are not squarefree,
//! hence runs of zeros of μ: x ≡ −i (mod p_i²) for the first L primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith_sieve::{value_by_factorization, Source};
use crate::error::{invalid, Result};
use crate::primes::{first_primes, primes_up_to};

/// Largest prime scanned when looking for a square factor of a value that
/// does not fit in a `u64`.
const SQUARE_SCAN_BOUND: usize = 1 << 20;

/// x, L, and for each i = 1..L the prime p_i with p_i² | x + i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroRunCertificate {
    pub start: BigInt,
    pub length: usize,
    /// (p_i, p_i², residue of x mod p_i²)
    pub congruences: Vec<(u64, BigInt, BigInt)>,
}

impl fmt::Display for ZeroRunCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x = {}", self.start)?;
        write!(f, "L = {}", self.length)?;
        for (i, (p, m, r)) in self.congruences.iter().enumerate() {
            let v = &self.start + BigInt::from(i + 1);
            write!(f, "\n  x + {} = {v}: {m} = {p}^2 divides it (x = {r} mod {m})", i + 1)?;
        }
        Ok(())
    }
}

/// Least nonnegative x with x ≡ r_i (mod m_i); moduli must be pairwise coprime.
pub fn crt_solve(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    if congruences.is_empty() {
        return Err(invalid("no congruences given"));
    }
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        if *m < BigInt::one() {
            return Err(invalid(format!("modulus {m} must be at least 1")));
        }
        if !modulus.gcd(m).is_one() {
            return Err(invalid(format!("modulus {m} is not coprime to the others")));
        }
        // x + modulus·t ≡ r (mod m)
        let inv = mod_inverse(&(&modulus % m), m);
        let t = ((r - &x) * inv).mod_floor(m);
        x += &modulus * t;
        modulus *= m;
    }
    Ok(x.mod_floor(&modulus))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

pub fn crt_zero_run(length: usize) -> Result<ZeroRunCertificate> {
    if length == 0 {
        return Err(invalid("run length must be at least 1"));
    }
    let primes = first_primes(length);
    let system: Vec<(BigInt, BigInt)> = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let m = BigInt::from(p) * BigInt::from(p);
            (-BigInt::from(i + 1), m)
        })
        .collect();
    let x = crt_solve(&system)?;
    let congruences = primes
        .iter()
        .zip(system)
        .map(|(&p, (_, m))| {
            let r = x.mod_floor(&m);
            (p, m, r)
        })
        .collect();
    Ok(ZeroRunCertificate {
        start: x,
        length,
        congruences,
    })
}

/// μ(n) = 0, decided without the certificate: full factorization when n fits
/// in a `u64`, otherwise a scan for a square prime factor.
fn mobius_vanishes(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return small > 0 && matches!(value_by_factorization(&Source::Moebius, small), Ok(0));
    }
    primes_up_to(SQUARE_SCAN_BOUND).into_iter().any(|q| {
        let q2 = BigInt::from(q as u64 * q as u64);
        (n % q2).is_zero()
    })
}

/// Checks every divisibility p_i² | x + i and, independently, μ(x + i) = 0.
pub fn verify_zero_run(cert: &ZeroRunCertificate) -> bool {
    if cert.length == 0 || cert.congruences.len() != cert.length {
        return false;
    }
    cert.congruences.iter().enumerate().all(|(i, (p, m, _))| {
        let v = &cert.start + BigInt::from(i + 1);
        let p = BigInt::from(*p);
        *m == &p * &p && (&v % m).is_zero() && mobius_vanishes(&v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[(big(1), big(2)), (big(2), big(3))]).unwrap(), big(5));
        assert_eq!(crt_solve(&[(big(4), big(7))]).unwrap(), big(4));
        assert_eq!(crt_solve(&[(big(-1), big(4))]).unwrap(), big(3));
        assert!(crt_solve(&[(big(0), big(4)), (big(0), big(6))]).is_err());
        assert!(crt_solve(&[(big(0), big(0))]).is_err());
    }

    #[test]
    fn canonical_starts() {
        assert_eq!(crt_zero_run(1).unwrap().start, big(3));
        assert_eq!(crt_zero_run(2).unwrap().start, big(7));
        assert_eq!(crt_zero_run(3).unwrap().start, big(547));
        assert!(crt_zero_run(0).is_err());
    }

    #[test]
    fn verification() {
        for l in 1..=8 {
            assert!(verify_zero_run(&crt_zero_run(l).unwrap()), "L = {l}");
        }
        let mut bad = crt_zero_run(3).unwrap();
        bad.start = big(548);
        assert!(!verify_zero_run(&bad));
    }

    #[test]
    fn certificate_is_least_solution() {
        for l in 1..=3 {
            let c = crt_zero_run(l).unwrap();
            let x = c.start.to_u64().unwrap();
            let first = (0..=x)
                .find(|&y| c.congruences.iter().enumerate().all(|(i, (p, _, _))| (y + i as u64 + 1) % (p * p) == 0))
                .unwrap();
            assert_eq!(first, x);
        }
    }

    #[test]
    fn large_start_uses_square_scan() {
        let c = crt_zero_run(14).unwrap();
        assert!(c.start.to_u64().is_none());
        assert!(verify_zero_run(&c));
    }
}
