//! Exact search for a polynomial relation a_n(z)F^n + … + a_0(z) ≡ 0 (mod z^{T+1})
//! with integer polynomials of bounded degree, verified at doubled truncation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith_sieve::ArithSequence;
use crate::error::{invalid, Result};
use crate::linalg::{self, Matrix};
pub use crate::poly::IntPolynomial;

/// A relation Σ a_i(z) F(z)^i that vanishes through z^verified_to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorCandidate {
    order: usize,
    coeffs: Vec<IntPolynomial>,
    degree_bound: usize,
    truncation: usize,
    verified_to: usize,
}

impl AnnihilatorCandidate {
    /// `coeffs[i]` multiplies F^i. Rejects the all-zero relation.
    pub fn new(coeffs: Vec<IntPolynomial>, degree_bound: usize, truncation: usize) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(invalid("relation needs order at least 1"));
        }
        if coeffs.iter().all(IntPolynomial::is_zero) {
            return Err(invalid("all-zero relation"));
        }
        if coeffs.iter().any(|a| a.degree().is_some_and(|d| d > degree_bound)) {
            return Err(invalid("coefficient polynomial exceeds the degree bound"));
        }
        Ok(AnnihilatorCandidate {
            order: coeffs.len() - 1,
            coeffs,
            degree_bound,
            truncation,
            verified_to: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn verified_to(&self) -> usize {
        self.verified_to
    }
}

impl fmt::Display for AnnihilatorCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.coeffs.iter().enumerate() {
            writeln!(f, "a{i} = {a}")?;
        }
        write!(
            f,
            "sum a_i F^i vanishes mod z^{} (found at T={}, verified to {})",
            self.verified_to + 1,
            self.truncation,
            self.verified_to
        )
    }
}

fn series(seq: &ArithSequence, t: usize) -> IntPolynomial {
    let mut c = vec![BigInt::zero(); t + 1];
    for n in 1..=t {
        c[n] = BigInt::from(seq.get(n));
    }
    IntPolynomial::new(c)
}

/// Coefficients 0..=T of F(z)^i mod z^{T+1}.
pub fn series_power_truncated(seq: &ArithSequence, i: u32, t: usize) -> Result<Vec<BigInt>> {
    if t > seq.len() {
        return Err(invalid(format!("truncation {t} exceeds prefix length {}", seq.len())));
    }
    let pw = powers(seq, i as usize, t);
    let p = &pw[i as usize];
    Ok((0..=t).map(|k| p.coeff(k)).collect())
}

fn powers(seq: &ArithSequence, n: usize, t: usize) -> Vec<IntPolynomial> {
    let f = series(seq, t);
    let mut out = vec![IntPolynomial::one()];
    for i in 1..=n {
        let next = out[i - 1].mul_trunc(&f, t + 1);
        out.push(next);
    }
    out
}

/// Rows z^0..z^T, columns a_{i,j} ordered by (i, j).
pub fn relation_system(seq: &ArithSequence, t: usize, n_max: usize, d_max: usize) -> Matrix {
    let pw = powers(seq, n_max, t);
    let cols = (n_max + 1) * (d_max + 1);
    (0..=t)
        .map(|row| {
            let mut r = vec![BigInt::zero(); cols];
            for (i, p) in pw.iter().enumerate() {
                for j in 0..=d_max.min(row) {
                    r[i * (d_max + 1) + j] = p.coeff(row - j);
                }
            }
            r
        })
        .collect()
}

/// Exact kernel dimension of the relation system.
pub fn kernel_dimension(seq: &ArithSequence, t: usize, n_max: usize, d_max: usize) -> usize {
    let cols = (n_max + 1) * (d_max + 1);
    cols - linalg::bareiss(relation_system(seq, t, n_max, d_max), cols).rank()
}

pub fn search_annihilator(
    seq: &ArithSequence,
    t: usize,
    n_max: usize,
    d_max: usize,
) -> Result<Option<AnnihilatorCandidate>> {
    if n_max == 0 {
        return Err(invalid("order bound must be at least 1"));
    }
    let unknowns = (n_max + 1) * (d_max + 1);
    if unknowns > t {
        return Err(invalid(format!(
            "{unknowns} unknowns exceed truncation {t}; the kernel would be trivially nonempty"
        )));
    }
    if seq.len() < 2 * t {
        return Err(invalid(format!(
            "prefix length {} shorter than 2T = {}",
            seq.len(),
            2 * t
        )));
    }
    let ech = linalg::bareiss(relation_system(seq, t, n_max, d_max), unknowns);
    let Some(mut v) = linalg::first_kernel_vector(&ech) else {
        return Ok(None);
    };
    linalg::normalize_sign_from_end(&mut v);
    let coeffs = v
        .chunks(d_max + 1)
        .map(|c| IntPolynomial::new(c.to_vec()))
        .collect();
    let mut cand = AnnihilatorCandidate::new(coeffs, d_max, t)?;
    if verify_relation(seq, &cand, 2 * t)? {
        cand.verified_to = 2 * t;
        Ok(Some(cand))
    } else {
        Ok(None)
    }
}

/// Whether Σ a_i F^i ≡ 0 (mod z^{T2+1}).
pub fn verify_relation(seq: &ArithSequence, cand: &AnnihilatorCandidate, t2: usize) -> Result<bool> {
    if t2 > seq.len() {
        return Err(invalid(format!("truncation {t2} exceeds prefix length {}", seq.len())));
    }
    let pw = powers(seq, cand.order, t2);
    let total = cand
        .coeffs
        .iter()
        .zip(&pw)
        .fold(IntPolynomial::zero(), |acc, (a, p)| &acc + &a.mul_trunc(p, t2 + 1));
    Ok(total.is_zero())
}
