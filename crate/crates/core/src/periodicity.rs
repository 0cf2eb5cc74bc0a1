//! Eventual-period detection on finite prefixes, and explicit refutation of a
//! claimed eventual period for completely multiplicative functions.
//!
//! If f(p) = −1 and the values were k-periodic beyond index M, pick n with
//! nk > M: then f(pnk) = f(p)f(nk) = −f(nk) while pnk ≡ nk (mod k).

use std::fmt;

use crate::arith_sieve::{ArithSequence, PrimeAssignment};
use crate::error::{invalid, Error, Result};

/// "Periodic with period k after the M-th term."
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodClaim {
    pub preperiod: u64,
    pub period: u64,
}

impl PeriodClaim {
    pub fn new(preperiod: u64, period: u64) -> Result<Self> {
        if period == 0 {
            return Err(invalid("period must be at least 1"));
        }
        Ok(PeriodClaim { preperiod, period })
    }

    /// Whether c_i = c_{i+k} for every M < i <= N − k.
    pub fn holds_on(&self, seq: &ArithSequence) -> bool {
        last_mismatch(seq, self.period as usize).is_none_or(|i| (i as u64) <= self.preperiod)
    }
}

impl fmt::Display for PeriodClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M={}, k={})", self.preperiod, self.period)
    }
}

/// Largest i in 1..=N−k with c_i != c_{i+k}.
fn last_mismatch(seq: &ArithSequence, k: usize) -> Option<usize> {
    let n = seq.len();
    if k >= n {
        return None;
    }
    (1..=n - k).rev().find(|&i| seq.get(i) != seq.get(i + k))
}

/// Smallest period k <= `k_max` (then smallest preperiod M <= `m_max`) that
/// the prefix supports. Requires N >= M_max + 2·k_max.
pub fn detect_eventual_period(seq: &ArithSequence, m_max: u64, k_max: u64) -> Result<Option<PeriodClaim>> {
    if m_max == 0 || k_max == 0 {
        return Err(invalid("M_max and k_max must be at least 1"));
    }
    let need = m_max.saturating_add(k_max.saturating_mul(2));
    if (seq.len() as u64) < need {
        return Err(invalid(format!(
            "prefix of length {} too short for M_max = {m_max}, k_max = {k_max} (need {need})",
            seq.len()
        )));
    }
    for k in 1..=k_max {
        // scanning backwards finds the minimal preperiod for this k directly
        let m = last_mismatch(seq, k as usize).unwrap_or(0) as u64;
        if m <= m_max {
            return Ok(Some(PeriodClaim {
                preperiod: m,
                period: k,
            }));
        }
    }
    Ok(None)
}

/// Certified counterexample to a claimed eventual period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodWitness {
    pub prime: u64,
    pub n: u64,
    /// n·k
    pub a: u64,
    /// p·n·k
    pub b: u64,
    pub claim: PeriodClaim,
}

impl fmt::Display for PeriodWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "claim {}: p={}, n={}, a=n*k={}, b=p*n*k={}",
            self.claim, self.prime, self.n, self.a, self.b
        )
    }
}

/// Builds the witness with the smallest negative prime and smallest n with
/// n·k > M.
pub fn refute_period_cm(assignment: &PrimeAssignment, claim: PeriodClaim) -> Result<PeriodWitness> {
    let p = assignment.smallest_negative_prime().ok_or(Error::NoNegativePrime)?;
    let k = claim.period;
    let n = claim.preperiod / k + 1;
    let a = n
        .checked_mul(k)
        .ok_or_else(|| invalid("witness index overflows u64"))?;
    let b = a
        .checked_mul(p)
        .ok_or_else(|| invalid("witness index overflows u64"))?;
    Ok(PeriodWitness {
        prime: p,
        n,
        a,
        b,
        claim,
    })
}

/// Checks the witness against concrete values: a, b > M, a ≡ b (mod k),
/// f(b) = −f(a) with f(a) nonzero, and the indices are n·k and p·n·k.
pub fn verify_witness(seq: &ArithSequence, w: &PeriodWitness) -> Result<bool> {
    let fb = seq.try_get(w.b)?;
    let fa = seq.try_get(w.a)?;
    let PeriodClaim { preperiod, period } = w.claim;
    let shape = Some(w.a) == w.n.checked_mul(period) && Some(w.b) == w.a.checked_mul(w.prime);
    let beyond = w.a > preperiod && w.b > preperiod;
    let congruent = period != 0 && w.a % period == w.b % period;
    Ok(shape && beyond && congruent && fa != 0 && fb == -fa)
}
