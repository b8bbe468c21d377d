//! Dense matrices and the deletion constructions used by the identities.
//!
//! All index arguments are 1-based. `B(i|j)` is `B` with row `i` and
//! column `j` removed; `b_{l·}` and `b_{·l}` are row and column `l` with
//! their `l`-th entry removed.

pub(crate) mod elimination;

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Sign};

/// Row-major dense matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.chunks(self.cols))
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.cols).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Whether a [`DeletedVector`] came from a row or a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

/// Length `n - 1` vector obtained from row or column `origin` of an `n×n`
/// matrix by dropping entry `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeletedVector<T> {
    entries: Vec<T>,
    origin: usize,
    orientation: Orientation,
}

impl<T: Scalar> DeletedVector<T> {
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based index of the row/column the vector was cut from.
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dot(&self, other: &[T]) -> Result<T> {
        dot(&self.entries, other)
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("dot product of unequal lengths"));
    }
    Ok(a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone()))
}

impl<T> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows"));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    /// 0-based row view.
    pub(crate) fn row_slice(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.cols)
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Result<&T> {
        self.check_row(i)?;
        self.check_col(j)?;
        Ok(&self.entries[(i - 1) * self.cols + (j - 1)])
    }

    /// Entry `(i, j)`, 1-based. Panics when out of range.
    pub fn at(&self, i: usize, j: usize) -> &T {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "index ({i}, {j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if (1..=self.rows).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                dim: self.rows,
            })
        }
    }

    fn check_col(&self, j: usize) -> Result<()> {
        if (1..=self.cols).contains(&j) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: j,
                dim: self.cols,
            })
        }
    }

    /// Dimension of a square matrix.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn order_at_least_two(&self) -> Result<usize> {
        let n = self.order()?;
        if n < 2 {
            return Err(Error::MatrixTooSmall { dim: n });
        }
        Ok(n)
    }
}

impl<T: Clone> DenseMatrix<T> {
    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entries[i * self.cols + j].clone());
            }
        }
        DenseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `B(i|j)`: the matrix without row `i` and column `j`.
    pub fn delete_row_col(&self, i: usize, j: usize) -> Result<Self> {
        self.order_at_least_two()?;
        self.check_row(i)?;
        self.check_col(j)?;
        let entries = self
            .row_iter()
            .enumerate()
            .filter(|&(r, _)| r + 1 != i)
            .flat_map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(move |&(c, _)| c + 1 != j)
                    .map(|(_, x)| x.clone())
            })
            .collect();
        Ok(DenseMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        })
    }
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: alloc::vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("matrix product"));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.entries[i * rhs.cols + j].clone()
                        + a.clone() * rhs.entries[k * rhs.cols + j].clone();
                    out.entries[i * rhs.cols + j] = v;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("matrix-vector product"));
        }
        self.row_iter().map(|row| dot(row, v)).collect()
    }

    /// `left · self · right`.
    pub fn bilinear(&self, left: &[T], right: &[T]) -> Result<T> {
        if self.rows != left.len() {
            return Err(Error::DimensionMismatch("bilinear form"));
        }
        dot(left, &self.mul_vec(right)?)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix difference"));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    /// `I - self` for a square matrix.
    pub fn identity_minus(&self) -> Result<Self> {
        let n = self.order()?;
        Self::identity(n).sub(self)
    }

    /// Entrywise comparison under the backend's tolerance rule.
    pub fn approx_eq(&self, other: &Self, tol: &crate::scalar::Tolerance) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// `b_{l·}`: row `l` without its `l`-th entry.
    pub fn row_without(&self, l: usize) -> Result<DeletedVector<T>> {
        self.order_at_least_two()?;
        self.check_row(l)?;
        let entries = self
            .row_slice(l - 1)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j + 1 != l)
            .map(|(_, x)| x.clone())
            .collect();
        Ok(DeletedVector {
            entries,
            origin: l,
            orientation: Orientation::Row,
        })
    }

    /// `b_{·l}`: column `l` without its `l`-th entry.
    pub fn col_without(&self, l: usize) -> Result<DeletedVector<T>> {
        self.order_at_least_two()?;
        self.check_col(l)?;
        let entries = (1..=self.rows)
            .filter(|&i| i != l)
            .map(|i| self.at(i, l).clone())
            .collect();
        Ok(DeletedVector {
            entries,
            origin: l,
            orientation: Orientation::Column,
        })
    }

    pub fn determinant(&self) -> Result<T> {
        self.order()?;
        Ok(T::determinant_kernel(self))
    }

    /// `M_ij = det(B(i|j))`.
    pub fn minor(&self, i: usize, j: usize) -> Result<T> {
        self.delete_row_col(i, j)?.determinant()
    }

    /// `(-1)^{i+j} M_ij`.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<T> {
        Ok(self.minor(i, j)?.signed(Sign::of_parity(i + j)))
    }

    /// Transposed cofactor matrix: `(adj B)_ij = (-1)^{i+j} M_ji`.
    /// The adjugate of a `1×1` matrix is `[[1]]`.
    pub fn adjugate(&self) -> Result<Self> {
        let n = self.order()?;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(self.cofactor(j, i)?);
            }
        }
        Self::new(n, n, entries)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.order()?;
        T::inverse_kernel(self)
    }

    /// Whether the backend considers the matrix invertible (exact: nonzero
    /// determinant; float: no elimination pivot under the floor).
    pub fn is_nonsingular(&self) -> Result<bool> {
        self.order()?;
        Ok(T::nonsingular_kernel(self))
    }
}

/// `f_ml`: unit row vector in dimension `n - 1` that picks the position
/// index `m` occupies once index `l` is deleted, i.e. `e_m` when `m < l`
/// and `e_{m-1}` when `m > l`.
pub fn selector<T: Scalar>(m: usize, l: usize, n: usize) -> Result<DeletedVector<T>> {
    if n < 2 {
        return Err(Error::MatrixTooSmall { dim: n });
    }
    for idx in [m, l] {
        if !(1..=n).contains(&idx) {
            return Err(Error::IndexOutOfRange { index: idx, dim: n });
        }
    }
    if m == l {
        return Err(Error::SelectorUndefined { index: m });
    }
    let hot = if m < l { m } else { m - 1 };
    let entries = (1..n)
        .map(|k| if k == hot { T::one() } else { T::zero() })
        .collect();
    Ok(DeletedVector {
        entries,
        origin: l,
        orientation: Orientation::Row,
    })
}
