//! Finite-alphabet series are either rational or transcendental. At prefix
//! scale the rational branch is certified by an explicit P/Q built from a
//! detected eventual period; otherwise the classifier only reports that no
//! period exists within the searched bounds.
//!
//! Hankel determinants give an independent check: a rational series has
//! finite Hankel rank.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith_sieve::ArithSequence;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Matrix};
use crate::periodicity::{detect_eventual_period, PeriodClaim};
use crate::poly::IntPolynomial;

/// P/Q with Q(0) = 1 whose expansion reproduces a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalForm {
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl RationalForm {
    /// Coefficients c_1..c_terms of the expansion (the constant term is
    /// dropped since every series here starts at z).
    pub fn expand(&self, terms: usize) -> Vec<BigInt> {
        let mut s = self
            .numerator
            .series_div(&self.denominator, terms + 1)
            .expect("denominator has Q(0) = 1");
        s.remove(0);
        s
    }

    /// Whether the expansion matches the prefix term for term, with zero
    /// constant term.
    pub fn reproduces(&self, seq: &ArithSequence) -> bool {
        if !self.numerator.coeff(0).is_zero() {
            return false;
        }
        self.expand(seq.len())
            .iter()
            .zip(seq.iter())
            .all(|(a, b)| *a == BigInt::from(b))
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P={}, Q={}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Eventually periodic on the prefix; rational with the given form.
    RationalCandidate { claim: PeriodClaim, form: RationalForm },
    /// No eventual period with M <= m_max, k <= k_max.
    NonPeriodicAtScale { m_max: u64, k_max: u64 },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::RationalCandidate { claim, form } => {
                write!(f, "rational candidate: {form} (eventual period {claim})")
            }
            Classification::NonPeriodicAtScale { m_max, k_max } => write!(
                f,
                "not eventually periodic up to (M_max={m_max}, k_max={k_max}); \
                 rational branch excluded at this scale"
            ),
        }
    }
}

pub fn classify_prefix(seq: &ArithSequence, m_max: u64, k_max: u64) -> Result<Classification> {
    match detect_eventual_period(seq, m_max, k_max)? {
        Some(claim) => Ok(Classification::RationalCandidate {
            claim,
            form: reconstruct_rational(seq, claim)?,
        }),
        None => Ok(Classification::NonPeriodicAtScale { m_max, k_max }),
    }
}

/// P(z) = (1 − z^k)·Σ_{n≤M} c_n zⁿ + z^M·Σ_{j=1..k} c_{M+j} z^j, Q(z) = 1 − z^k,
/// both divided by their joint integer content.
pub fn reconstruct_rational(seq: &ArithSequence, claim: PeriodClaim) -> Result<RationalForm> {
    let m = claim.preperiod as usize;
    let k = claim.period as usize;
    if m + k > seq.len() {
        return Err(Error::InvalidClaim(format!(
            "claim {claim} needs at least {} terms, prefix has {}",
            m + k,
            seq.len()
        )));
    }
    if !claim.holds_on(seq) {
        return Err(Error::InvalidClaim(format!("claim {claim} fails on the prefix")));
    }
    let mut head = vec![BigInt::zero(); m + 1];
    for n in 1..=m {
        head[n] = BigInt::from(seq.get(n));
    }
    let head = IntPolynomial::new(head);
    let mut period = vec![BigInt::zero(); m + k + 1];
    for j in 1..=k {
        period[m + j] = BigInt::from(seq.get(m + j));
    }
    let period = IntPolynomial::new(period);
    let mut q = vec![BigInt::zero(); k + 1];
    q[0] = BigInt::from(1);
    q[k] = BigInt::from(-1);
    let q = IntPolynomial::new(q);

    let p = &(&q * &head) + &period;
    let g = num_integer::Integer::gcd(&p.content(), &q.content());
    let form = RationalForm {
        numerator: p.div_exact(&g),
        denominator: q.div_exact(&g),
    };
    debug_assert!(form.reproduces(seq));
    Ok(form)
}

/// H_m = (c_{i+j−1})_{1≤i,j≤m}.
pub fn hankel_matrix(seq: &ArithSequence, order: usize) -> Matrix {
    (1..=order)
        .map(|i| (1..=order).map(|j| BigInt::from(seq.get(i + j - 1))).collect())
        .collect()
}

fn check_hankel_len(seq: &ArithSequence, order: usize) -> Result<()> {
    if order == 0 {
        return Err(invalid("order must be at least 1"));
    }
    if seq.len() < 2 * order - 1 {
        return Err(invalid(format!(
            "order {order} Hankel matrix needs {} terms, prefix has {}",
            2 * order - 1,
            seq.len()
        )));
    }
    Ok(())
}

/// Exact det H_1, …, det H_max_order.
pub fn hankel_rank_profile(seq: &ArithSequence, max_order: usize) -> Result<Vec<BigInt>> {
    check_hankel_len(seq, max_order)?;
    Ok((1..=max_order)
        .map(|m| linalg::determinant(hankel_matrix(seq, m)))
        .collect())
}

/// Exact rank of H_order. Every Hankel determinant of order above this rank
/// (and at most `order`) vanishes.
pub fn hankel_rank(seq: &ArithSequence, order: usize) -> Result<usize> {
    check_hankel_len(seq, order)?;
    Ok(linalg::rank(&hankel_matrix(seq, order), order))
}
