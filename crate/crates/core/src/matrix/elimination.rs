//! Elimination kernels behind [`Scalar`]'s determinant and inverse.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Relative pivot floor for the float backend.
pub const FLOAT_PIVOT_FLOOR: f64 = 1e-13;

/// Fraction-free (Bareiss) determinant of a square integer matrix stored
/// row-major. Every intermediate division is exact.
pub fn bareiss_determinant(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(r) => {
                    for j in 0..n {
                        a.swap(k * n + j, r * n + j);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let factor = a[i * n + k].clone();
            for j in k + 1..n {
                let v = &a[i * n + j] * &pivot - &factor * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = a[n * n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant of a rational matrix: each row is scaled to integers by the
/// lcm of its denominators, Bareiss runs over the integers, and the scale
/// factors are divided back out.
pub fn rational_determinant(m: &DenseMatrix<Rational>) -> Rational {
    let n = m.rows();
    let mut ints = Vec::with_capacity(n * n);
    let mut scale = BigInt::one();
    for i in 0..n {
        let row = m.row_slice(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in row {
            ints.push(x.numer() * (&lcm / x.denom()));
        }
        scale *= lcm;
    }
    Rational::new(bareiss_determinant(ints, n), scale)
}

/// Partial-pivoting elimination determinant.
pub fn float_determinant(m: &DenseMatrix<f64>) -> f64 {
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| {
                libm::fabs(a[x * n + k])
                    .partial_cmp(&libm::fabs(a[y * n + k]))
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        if a[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            for j in k + 1..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    det
}

/// `FLOAT_PIVOT_FLOOR` times the largest initial entry magnitude.
pub fn float_singularity_floor(m: &DenseMatrix<f64>) -> f64 {
    let max = m
        .as_slice()
        .iter()
        .fold(0.0f64, |acc, x| libm::fmax(acc, libm::fabs(*x)));
    FLOAT_PIVOT_FLOOR * max
}

/// `true` iff partial-pivoting elimination never meets a pivot below the
/// singularity floor.
pub fn float_pivots_above_floor(m: &DenseMatrix<f64>) -> bool {
    let floor = float_singularity_floor(m);
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    for k in 0..n {
        let Some(p) = largest_pivot(&column(&a, n, k), k, n, floor) else {
            return false;
        };
        for j in 0..n {
            a.swap(k * n + j, p * n + j);
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    true
}

fn column<T: Clone>(a: &[T], n: usize, k: usize) -> Vec<T> {
    (0..n).map(|i| a[i * n + k].clone()).collect()
}

/// Exact pivot rule: first nonzero entry at or below row `k`.
pub fn first_nonzero_pivot<T: Scalar>(col: &[T], k: usize, n: usize) -> Option<usize> {
    (k..n).find(|&r| !col[r].is_zero())
}

/// Float pivot rule: largest magnitude at or below row `k`, rejected when
/// not above `floor`.
pub fn largest_pivot(col: &[f64], k: usize, n: usize, floor: f64) -> Option<usize> {
    let mut best = k;
    for r in k + 1..n {
        if libm::fabs(col[r]) > libm::fabs(col[best]) {
            best = r;
        }
    }
    let mag = libm::fabs(col[best]);
    if mag == 0.0 || mag < floor || mag.is_nan() {
        None
    } else {
        Some(best)
    }
}

/// Gauss-Jordan inversion with a caller-supplied pivot rule. The rule sees
/// the current column `k` (all rows) and returns the pivot row or `None`
/// when the matrix is to be treated as singular.
pub fn gauss_jordan_inverse<T, F>(m: &DenseMatrix<T>, pick: F) -> Result<DenseMatrix<T>>
where
    T: Scalar,
    F: Fn(&[T], usize, usize) -> Option<usize>,
{
    let n = m.rows();
    let mut a = m.as_slice().to_vec();
    let mut inv = DenseMatrix::<T>::identity(n).into_entries();
    for k in 0..n {
        let p = pick(&column(&a, n, k), k, n).ok_or(Error::SingularMatrix)?;
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
                inv.swap(k * n + j, p * n + j);
            }
        }
        let pivot = a[k * n + k].clone();
        for j in 0..n {
            a[k * n + j] = a[k * n + j].clone() / pivot.clone();
            inv[k * n + j] = inv[k * n + j].clone() / pivot.clone();
        }
        for i in 0..n {
            if i == k || a[i * n + k].is_zero() {
                continue;
            }
            let f = a[i * n + k].clone();
            for j in 0..n {
                a[i * n + j] = a[i * n + j].clone() - f.clone() * a[k * n + j].clone();
                inv[i * n + j] = inv[i * n + j].clone() - f.clone() * inv[k * n + j].clone();
            }
        }
    }
    DenseMatrix::new(n, n, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn bareiss_small_cases() {
        let d = bareiss_determinant(vec![1, 2, 3, 4].into_iter().map(BigInt::from).collect(), 2);
        assert_eq!(d, BigInt::from(-2));
        // zero leading pivot forces a row swap
        let d = bareiss_determinant(
            vec![0, 1, 0, 1, 0, 0, 0, 0, 1]
                .into_iter()
                .map(BigInt::from)
                .collect(),
            3,
        );
        assert_eq!(d, BigInt::from(-1));
        let d = bareiss_determinant(
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9]
                .into_iter()
                .map(BigInt::from)
                .collect(),
            3,
        );
        assert!(d.is_zero());
        assert_eq!(bareiss_determinant(Vec::new(), 0), BigInt::one());
    }

    #[test]
    fn float_pivot_floor_rejects_near_singular() {
        let m = DenseMatrix::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-15]).unwrap();
        assert!(!float_pivots_above_floor(&m));
        let m = DenseMatrix::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-9]).unwrap();
        assert!(float_pivots_above_floor(&m));
        let z = DenseMatrix::new(1, 1, vec![0.0]).unwrap();
        assert!(!float_pivots_above_floor(&z));
    }
}
