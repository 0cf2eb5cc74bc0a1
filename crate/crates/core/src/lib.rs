//! Integer power series built from arithmetic functions.

pub mod annihilator;
pub mod arith_sieve;
pub mod error;
pub mod linalg;
pub mod periodicity;
pub mod poly;
pub mod primes;
pub mod rationality;
pub mod root_bounds;

pub use error::{Error, Result};
pub mod cli;
pub mod series_eval;
pub mod zero_runs;
