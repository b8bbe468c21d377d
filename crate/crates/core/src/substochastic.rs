//! Certified substochastic matrices and the diagonal-maximality property
//! of `C = (I - Pᵀ)⁻¹`: every diagonal entry `c_mm` is a maximal element of
//! its row.
//!
//! A matrix `P` is accepted when it is entrywise nonnegative, every row
//! sums to at most one, and its spectral radius is below one. The last
//! condition is decided exactly: if every row sum is strictly below one it
//! holds trivially, otherwise `I - P` is a Z-matrix and `ρ(P) < 1` is
//! equivalent to all leading principal minors of `I - P` being positive.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::SplitMix64;
use crate::scalar::{Rational, Scalar, Sign, Tolerance};

/// How the spectral-radius bound was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Every row sum is strictly below one.
    RowSumStrict,
    /// All leading principal minors of `I - P` are positive.
    MMatrixCertified,
}

/// `P` with a certificate that `ρ(P) < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstochasticMatrix<T> {
    p: DenseMatrix<T>,
    certification: Certification,
}

/// Location of the first row-major violation of diagonal maximality.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityWitness<T> {
    pub row: usize,
    pub col: usize,
    pub diagonal: T,
    pub offending: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport<T> {
    pub holds: bool,
    pub witness: Option<MaximalityWitness<T>>,
    /// `C = (I - Pᵀ)⁻¹`.
    pub matrix: DenseMatrix<T>,
}

fn check_entries_nonnegative<T: Scalar>(m: &DenseMatrix<T>) -> Result<()> {
    for (i, row) in m.row_iter().enumerate() {
        if let Some(j) = row.iter().position(|x| x.sign() == Sign::Negative) {
            return Err(Error::NegativeEntry {
                row: i + 1,
                col: j + 1,
            });
        }
    }
    Ok(())
}

fn row_sums<T: Scalar>(m: &DenseMatrix<T>) -> Vec<T> {
    m.row_iter()
        .map(|row| row.iter().cloned().fold(T::zero(), |a, b| a + b))
        .collect()
}

fn first_row_over_one<T: Scalar>(sums: &[T]) -> Option<usize> {
    let tol = Tolerance::default();
    sums.iter()
        .position(|s| T::one().definitely_lt(s, &tol))
        .map(|i| i + 1)
}

/// Exact test for `ρ(P) < 1`: all leading principal minors of `I - P` are
/// positive. Float entries are converted to their exact binary values.
pub fn spectral_radius_lt_one<T: Scalar>(p: &DenseMatrix<T>) -> Result<bool> {
    let n = p.order()?;
    if check_entries_nonnegative(p).is_err() {
        return Err(Error::PreconditionViolated("negative entry"));
    }
    if first_row_over_one(&row_sums(p)).is_some() {
        return Err(Error::PreconditionViolated("row sum exceeds one"));
    }
    let exact = p
        .as_slice()
        .iter()
        .map(|x| x.to_rational().ok_or(Error::NotRepresentable))
        .collect::<Result<Vec<Rational>>>()?;
    let a = DenseMatrix::new(n, n, exact)?.identity_minus()?;
    for k in 1..=n {
        let leading: Vec<Rational> = a
            .row_iter()
            .take(k)
            .flat_map(|row| row[..k].iter().cloned())
            .collect();
        let minor = DenseMatrix::new(k, k, leading)?.determinant()?;
        if minor.sign() != Sign::Positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Power-iteration estimate of `ρ(P)` for a nonnegative `P`.
///
/// Iterates on `P + I`, whose Perron root is `ρ(P) + 1` and strictly
/// dominant in modulus, so periodic chains converge too. The start vector
/// has entries drawn uniformly from `[0.5, 1.5)`.
pub fn spectral_radius_estimate<T: Scalar>(
    p: &DenseMatrix<T>,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    let n = p.order()?;
    let shifted = p
        .map(Scalar::to_f64)
        .sub(&DenseMatrix::<f64>::identity(n).scale(&-1.0))?;
    let mut rng = SplitMix64::new(seed);
    let mut x: Vec<f64> = (0..n).map(|_| 0.5 + rng.next_f64()).collect();
    let mut lambda = 0.0;
    for _ in 0..iterations.max(1) {
        let norm = x.iter().fold(0.0f64, |a, v| libm::fmax(a, libm::fabs(*v)));
        x.iter_mut().for_each(|v| *v /= norm);
        let y = shifted.mul_vec(&x)?;
        lambda = y.iter().fold(0.0f64, |a, v| libm::fmax(a, libm::fabs(*v)));
        x = y;
    }
    Ok(libm::fmax(lambda - 1.0, 0.0))
}

/// Validates and certifies `m` as a substochastic matrix with spectral
/// radius below one.
pub fn validate_substochastic<T: Scalar>(m: DenseMatrix<T>) -> Result<SubstochasticMatrix<T>> {
    m.order()?;
    check_entries_nonnegative(&m)?;
    let sums = row_sums(&m);
    if let Some(row) = first_row_over_one(&sums) {
        return Err(Error::RowSumExceedsOne { row });
    }
    let certification = if sums.iter().all(|s| *s < T::one()) {
        Certification::RowSumStrict
    } else if spectral_radius_lt_one(&m)? {
        Certification::MMatrixCertified
    } else {
        return Err(Error::SpectralRadiusNotLessThanOne);
    };
    Ok(SubstochasticMatrix {
        p: m,
        certification,
    })
}

/// `true` when entries are nonnegative and every column sums to at most one.
pub fn is_column_substochastic<T: Scalar>(q: &DenseMatrix<T>) -> bool {
    check_entries_nonnegative(q).is_ok() && first_row_over_one(&row_sums(&q.transpose())).is_none()
}

/// Sums rows `m` and `m + 1` of the column-substochastic `Q` into one row
/// and deletes column `m`, giving an `(n-1)×(n-1)` column-substochastic
/// matrix `P̃` with `det(I - P̃) ≥ 0`.
pub fn merge_rows_reduction<T: Scalar>(q: &DenseMatrix<T>, m: usize) -> Result<DenseMatrix<T>> {
    let n = q.order()?;
    if n < 2 {
        return Err(Error::MatrixTooSmall { dim: n });
    }
    if !(1..n).contains(&m) {
        return Err(Error::IndexOutOfRange {
            index: m,
            dim: n - 1,
        });
    }
    if !is_column_substochastic(q) {
        return Err(Error::NotColumnSubstochastic);
    }
    let mut merged: Vec<Vec<T>> = Vec::with_capacity(n - 1);
    for (r, row) in q.row_iter().enumerate() {
        if r + 1 == m + 1 {
            let last = merged.last_mut().expect("row m precedes row m+1");
            for (acc, x) in last.iter_mut().zip(row) {
                *acc = acc.clone() + x.clone();
            }
        } else {
            merged.push(row.to_vec());
        }
    }
    for row in merged.iter_mut() {
        row.remove(m - 1);
    }
    let reduced = DenseMatrix::from_rows(merged)?;
    if !is_column_substochastic(&reduced) {
        return Err(Error::InvariantViolated(
            "row merge broke column substochasticity",
        ));
    }
    Ok(reduced)
}

impl<T: Scalar> SubstochasticMatrix<T> {
    /// Same as [`validate_substochastic`].
    pub fn new(m: DenseMatrix<T>) -> Result<Self> {
        validate_substochastic(m)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.p
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.p
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    pub fn order(&self) -> usize {
        self.p.rows()
    }

    /// `I - P`.
    pub fn i_minus_p(&self) -> DenseMatrix<T> {
        self.p.identity_minus().expect("square by construction")
    }

    /// `I - Pᵀ`.
    pub fn i_minus_pt(&self) -> DenseMatrix<T> {
        self.p
            .transpose()
            .identity_minus()
            .expect("square by construction")
    }

    /// Re-expresses the certified matrix on another backend. The
    /// certificate is carried over, not recomputed.
    pub fn convert<U: Scalar>(&self) -> SubstochasticMatrix<U> {
        SubstochasticMatrix {
            p: self
                .p
                .map(|x| U::from_rational(&x.to_rational().unwrap_or_default())),
            certification: self.certification,
        }
    }

    /// `det(I - Pᵀ)`, which is positive for every certified `P`.
    pub fn det_i_minus_pt(&self) -> Result<T> {
        let det = self.i_minus_pt().determinant()?;
        if det.sign() != Sign::Positive {
            return Err(Error::InvariantViolated("det(I - P^T) is not positive"));
        }
        Ok(det)
    }

    /// `(I - Pᵀ)⁻¹` when `transposed`, else `(I - P)⁻¹`. All entries are
    /// nonnegative.
    pub fn fundamental_matrix(&self, transposed: bool) -> Result<DenseMatrix<T>> {
        let a = if transposed {
            self.i_minus_pt()
        } else {
            self.i_minus_p()
        };
        let inv = a.inverse()?;
        let tol = Tolerance::default();
        if inv
            .as_slice()
            .iter()
            .any(|x| x.definitely_lt(&T::zero(), &tol))
        {
            return Err(Error::InvariantViolated(
                "fundamental matrix has a negative entry",
            ));
        }
        Ok(inv)
    }

    /// Checks `c_mm ≥ c_ml` for every row `m` of `C = (I - Pᵀ)⁻¹`,
    /// reporting the first violation in row-major order.
    pub fn check_diagonal_maximality(&self) -> Result<MaximalityReport<T>> {
        let c = self.fundamental_matrix(true)?;
        let tol = Tolerance::default();
        let n = self.order();
        let mut witness = None;
        'scan: for m in 1..=n {
            let diagonal = c.at(m, m);
            for l in 1..=n {
                let value = c.at(m, l);
                if diagonal.definitely_lt(value, &tol) {
                    witness = Some(MaximalityWitness {
                        row: m,
                        col: l,
                        diagonal: diagonal.clone(),
                        offending: value.clone(),
                    });
                    break 'scan;
                }
            }
        }
        Ok(MaximalityReport {
            holds: witness.is_none(),
            witness,
            matrix: c,
        })
    }

    /// `M_mm - (-1)^{m+l} M_lm` on `I - Pᵀ`, where `M_lm = det((I - Pᵀ)(l|m))`.
    /// Nonnegative for every certified `P`; zero when `m == l`.
    pub fn minor_sum_nonneg(&self, m: usize, l: usize) -> Result<T> {
        let n = self.order();
        for idx in [m, l] {
            if !(1..=n).contains(&idx) {
                return Err(Error::IndexOutOfRange { index: idx, dim: n });
            }
        }
        if m == l {
            return Ok(T::zero());
        }
        let a = self.i_minus_pt();
        let value = a.minor(m, m)? - a.minor(l, m)?.signed(Sign::of_parity(m + l));
        if value.definitely_lt(&T::zero(), &Tolerance::default()) {
            return Err(Error::InvariantViolated("minor difference is negative"));
        }
        Ok(value)
    }
}
