//! Exact linear algebra over ℤ by fraction-free (Bareiss) elimination, plus
//! an independent Gaussian elimination over 𝔽_p used for cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// Fraction-free row echelon form. `pivots[r]` is the pivot column of row r.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    pub cols: usize,
    /// Parity of the row swaps performed.
    pub swaps_odd: bool,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Bareiss elimination. Every entry below the pivot rows stays an exact
/// integer because each division is by the previous pivot.
pub fn bareiss(mut m: Matrix, cols: usize) -> Echelon {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps_odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps_odd = !swaps_odd;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            if lead.is_zero() {
                for x in row.iter_mut().skip(c + 1) {
                    if !x.is_zero() {
                        *x = &*x * piv / &prev;
                    }
                }
            } else {
                for j in c + 1..cols {
                    let v = &row[j] * piv - &lead * &pivot_row[j];
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
            }
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: m,
        pivots,
        cols,
        swaps_odd,
    }
}

/// Exact determinant of a square matrix.
pub fn determinant(m: Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let e = bareiss(m, n);
    if e.rank() < n {
        return BigInt::zero();
    }
    let d = e.rows[n - 1][n - 1].clone();
    if e.swaps_odd {
        -d
    } else {
        d
    }
}

/// Exact rank; identical rows are collapsed first since they cannot change it.
pub fn rank(m: &Matrix, cols: usize) -> usize {
    let mut unique: Matrix = Vec::new();
    for row in m {
        if row.iter().any(|x| !x.is_zero()) && !unique.contains(row) {
            unique.push(row.clone());
        }
    }
    bareiss(unique, cols).rank()
}

/// Kernel vector from the first free column (that free variable set to 1,
/// the others to 0), back-substituted and scaled to a primitive integer
/// vector. `None` if the kernel is trivial.
pub fn first_kernel_vector(e: &Echelon) -> Option<Vec<BigInt>> {
    let free = *e.free_columns().first()?;
    let mut x: Vec<BigRational> = vec![BigRational::zero(); e.cols];
    x[free] = BigRational::one();
    for r in (0..e.rank()).rev() {
        let c = e.pivots[r];
        let row = &e.rows[r];
        let mut acc = BigRational::zero();
        for j in c + 1..e.cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += BigRational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[c] = -acc / BigRational::from_integer(row[c].clone());
    }
    let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    Some(ints.into_iter().map(|v| v / &g).collect())
}

/// Matrix-vector product.
pub fn mul_vec(m: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub mod modular {
    //! Gaussian elimination modulo a prime below 2^63.

    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    use super::Matrix;

    fn reduce(x: &BigInt, p: u64) -> u64 {
        let r = x % BigInt::from(p);
        let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
        r.to_u64().expect("residue fits in u64")
    }

    fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn inv(a: u64, p: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base, p);
            }
            base = mul(base, base, p);
            exp >>= 1;
        }
        acc
    }

    /// Row-reduces in place, returning (rank, determinant factor).
    fn eliminate(m: &mut [Vec<u64>], cols: usize, p: u64) -> (usize, u64) {
        let rows = m.len();
        let mut r = 0;
        let mut det = 1u64;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
                det = 0;
                continue;
            };
            if piv != r {
                m.swap(piv, r);
                det = (p - det) % p;
            }
            det = mul(det, m[r][c], p);
            let iv = inv(m[r][c], p);
            for i in r + 1..rows {
                if m[i][c] == 0 {
                    continue;
                }
                let f = mul(m[i][c], iv, p);
                for j in c..cols {
                    let t = mul(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
            r += 1;
        }
        (r, det)
    }

    fn to_mod(m: &Matrix, p: u64) -> Vec<Vec<u64>> {
        m.iter().map(|row| row.iter().map(|x| reduce(x, p)).collect()).collect()
    }

    pub fn rank_mod(m: &Matrix, cols: usize, p: u64) -> usize {
        eliminate(&mut to_mod(m, p), cols, p).0
    }

    pub fn det_mod(m: &Matrix, p: u64) -> u64 {
        let n = m.len();
        let (r, d) = eliminate(&mut to_mod(m, p), n, p);
        if r < n {
            0
        } else {
            d
        }
    }

    pub fn residue(x: &BigInt, p: u64) -> u64 {
        reduce(x, p)
    }
}

/// Sign of the first nonzero entry scanning from the end.
pub(crate) fn normalize_sign_from_end(v: &mut [BigInt]) {
    if let Some(last) = v.iter().rev().find(|x| !x.is_zero()) {
        if last.is_negative() {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Leibniz expansion, usable up to about 7×7.
    fn det_leibniz(m: &[Vec<i64>]) -> i64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let s = if inversions % 2 == 0 { 1 } else { -1 };
                s * (0..n).map(|i| m[i][p[i]]).product::<i64>()
            })
            .sum()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(mat(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(determinant(mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn determinant_matches_leibniz() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        for n in 1..=6 {
            for _ in 0..20 {
                let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let big: Matrix = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                assert_eq!(determinant(big), BigInt::from(det_leibniz(&m)));
            }
        }
    }

    #[test]
    fn kernel_vector_is_in_kernel() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let e = bareiss(m.clone(), 4);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![1, 3]);
        let v = first_kernel_vector(&e).unwrap();
        assert!(mul_vec(&m, &v).iter().all(|x| x.is_zero()));
        assert_eq!(v, vec![BigInt::from(-2), BigInt::from(1), BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn full_rank_has_no_kernel() {
        let e = bareiss(mat(&[&[1, 0], &[0, 1], &[1, 1]]), 2);
        assert!(first_kernel_vector(&e).is_none());
    }

    #[test]
    fn modular_agrees() {
        let p = (1u64 << 61) - 1;
        let m = mat(&[&[3, -1, 4], &[1, 5, -9], &[2, 6, 5]]);
        let d = determinant(m.clone());
        assert_eq!(modular::det_mod(&m, p), modular::residue(&d, p));
        assert_eq!(modular::rank_mod(&m, 3, p), 3);
        assert_eq!(rank(&mat(&[&[1, 1], &[1, 1], &[2, 2]]), 2), 1);
    }
}
