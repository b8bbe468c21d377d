//! Test-only oracles, written against plain nested `Vec`s so they share no
//! code with the library's elimination kernels.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use submat::{DenseMatrix, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rows(m: &DenseMatrix<Rational>) -> Vec<Vec<Rational>> {
    m.row_iter().map(|r| r.to_vec()).collect()
}

/// Laplace expansion along the first row.
pub fn laplace_det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut det = Rational::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let term = &a[0][j] * laplace_det(&brute_delete(a, 0, j));
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Deletes row `i` and column `j` (0-based) by copying the survivors.
pub fn brute_delete(a: &[Vec<Rational>], i: usize, j: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for (r, row) in a.iter().enumerate() {
        if r == i {
            continue;
        }
        let mut new_row = Vec::new();
        for (c, x) in row.iter().enumerate() {
            if c != j {
                new_row.push(x.clone());
            }
        }
        out.push(new_row);
    }
    out
}

/// 1-based minor by Laplace expansion.
pub fn laplace_minor(a: &[Vec<Rational>], i: usize, j: usize) -> Rational {
    laplace_det(&brute_delete(a, i - 1, j - 1))
}

/// Inverse as adjugate over determinant, from Laplace cofactors.
pub fn laplace_inverse(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let det = laplace_det(a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = laplace_det(&brute_delete(a, j, i));
                    let c = if (i + j) % 2 == 0 { c } else { -c };
                    c / &det
                })
                .collect()
        })
        .collect()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

pub fn square(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DenseMatrix<Rational>> {
    n.prop_flat_map(|n| {
        prop::collection::vec(rational(), n * n)
            .prop_map(move |e| DenseMatrix::new(n, n, e).unwrap())
    })
}

/// Nonnegative rows scaled so each sums to at most `cap`.
pub fn substochastic_candidate(
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = DenseMatrix<Rational>> {
    n.prop_flat_map(|n| {
        (
            prop::collection::vec(0i64..=5, n * n),
            prop::collection::vec(0i64..=8, n),
        )
            .prop_map(move |(w, caps)| {
                let mut rows = Vec::new();
                for i in 0..n {
                    let row = &w[i * n..(i + 1) * n];
                    let total: i64 = row.iter().sum();
                    rows.push(
                        row.iter()
                            .map(|&x| {
                                if total == 0 {
                                    Rational::zero()
                                } else {
                                    q(x * caps[i], total * 8)
                                }
                            })
                            .collect(),
                    );
                }
                DenseMatrix::from_rows(rows).unwrap()
            })
    })
}
