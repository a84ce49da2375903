//! Determinants over exact and inexact scalar types.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

/// Square matrix stored as rows.
pub type Matrix<T> = Vec<Vec<T>>;

fn check_square<T>(m: &Matrix<T>) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter(format!("matrix is not square ({n} rows)")));
    }
    Ok(n)
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
///
/// For exact types every division is exact; a failed division is reported
/// as corruption. For `f64` the pivot with the largest magnitude is chosen,
/// which makes this plain partial-pivoting elimination up to scaling.
pub fn det_bareiss<T: Scalar>(mut m: Matrix<T>) -> Result<T> {
    let n = check_square(&m)?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        let (best, weight) = (k..n)
            .map(|i| (i, m[i][k].pivot_weight()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if weight <= 0.0 {
            return Ok(T::zero());
        }
        if best != k {
            m.swap(best, k);
            sign_flip = !sign_flip;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Corruption(format!("inexact Bareiss division at step {k}")))?;
            }
            m[i][k] = T::zero();
        }
        prev = pivot;
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Determinant over a commutative ring without division, by dynamic
/// programming over column subsets (`O(2^n n)` ring operations).
pub fn det_expand<T: Ring>(m: &Matrix<T>) -> Result<T> {
    let n = check_square(m)?;
    if n > 20 {
        return Err(Error::CapabilityLimit(format!("subset expansion limited to 20x20, got {n}")));
    }
    // dp[mask] = signed sum over assignments of rows 0..popcount(mask) to the
    // columns in mask.
    let mut dp: Vec<Option<T>> = vec![None; 1 << n];
    dp[0] = Some(T::one());
    for mask in 0usize..(1 << n) {
        let Some(val) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(val);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].is_zero() {
                continue;
            }
            // inversions with earlier rows: used columns to the right of `col`
            let above = (mask >> (col + 1)).count_ones();
            let term = val.clone() * m[row][col].clone();
            let term = if above % 2 == 1 { -term } else { term };
            let slot = &mut dp[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(acc) => acc + term,
                None => term,
            });
        }
        dp[mask] = Some(val);
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_else(T::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UPolynomial;
    use crate::scalar::rat;
    use num_rational::BigRational;

    fn hilbert(n: usize) -> Matrix<BigRational> {
        (0..n).map(|i| (0..n).map(|j| rat(1, (i + j + 1) as i64)).collect()).collect()
    }

    #[test]
    fn hilbert_determinants() {
        // 1/det(H_n) for n = 1..5 is 1, 12, 2160, 6048000, 266716800000
        let inv = [1i64, 12, 2160, 6_048_000, 266_716_800_000];
        for (n, d) in inv.iter().enumerate() {
            let h = hilbert(n + 1);
            assert_eq!(det_bareiss(h.clone()).unwrap(), rat(1, *d));
            assert_eq!(det_expand(&h).unwrap(), rat(1, *d));
        }
    }

    #[test]
    fn pivoting_and_sign() {
        let m = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(det_bareiss(m.clone()).unwrap(), rat(-1, 1));
        assert_eq!(det_expand(&m).unwrap(), rat(-1, 1));
        let f = vec![vec![0.0, 2.0, 1.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 3.0]];
        assert!((det_bareiss(f.clone()).unwrap() + 5.0).abs() < 1e-14);
        assert!((det_expand(&f).unwrap() + 5.0).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix() {
        let m = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert_eq!(det_bareiss(m).unwrap(), rat(0, 1));
    }

    #[test]
    fn polynomial_vandermonde() {
        // det [[1, x], [1, 2x]] = x over Q[x]
        let x = UPolynomial::x();
        let one = UPolynomial::one();
        let two_x = x.clone() + x.clone();
        let m = vec![vec![one.clone(), x.clone()], vec![one, two_x]];
        assert_eq!(det_bareiss(m.clone()).unwrap(), x);
        assert_eq!(det_expand(&m).unwrap(), x);
    }
}
