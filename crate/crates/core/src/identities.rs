//! Two-sided evaluation of the adjugate / Schur-complement identities.
//!
//! Notation, for an `n×n` matrix `B` with `1 ≤ l, m ≤ n`:
//!
//! * `B(l|l)` deletes row and column `l`; `b_{l·}`, `b_{·l}` are row and
//!   column `l` with entry `l` removed; `f_ml` is [`selector`].
//! * `s_l = b_ll - b_{l·} B(l|l)⁻¹ b_{·l}` is the Schur denominator; it
//!   equals `det B / det B(l|l)`.
//!
//! | id | left side | right side |
//! |----|-----------|------------|
//! | `Lemma1` | `f_ml adj(B(l|l)) b_{·l}` | `(-1)^{m+l+1} det B(l|m)` |
//! | `Lemma2` | `b_ll det B(l|l) - b_{l·} adj(B(l|l)) b_{·l}` | `det B` |
//! | `Eq13` | `(b_mm - s_m) / s_m` | `Σ_{l≠m} b_lm f_ml B(l|l)⁻¹ b_{·l} / s_l` |
//! | `Eq17` | as `Eq13` with adjugates, denominators `b_ll det B(l|l) - b_{l·} adj b_{·l}` | |
//! | `Eq20` | `-b_mm f_lm B(m|m)⁻¹ b_{·m} / s_m` | `-b_lm / s_l + Σ_{k≠l,m} b_km f_lk B(k|k)⁻¹ b_{·k} / s_k` |
//! | `Eq21` | `-b_mm f_lm adj(B(m|m)) b_{·m}` | `-b_lm det B(l|l) + Σ_{k≠l,m} b_km f_lk adj(B(k|k)) b_{·k}` |
//!
//! `Thm2First` and `Thm2Second` are `Eq13` and `Eq20` written directly in
//! terms of a substochastic `P` with `B = I - P`, and are evaluated from
//! `P` without forming `B`.
//!
//! Left and right sides are always computed separately; a residual of zero
//! (exact backend) is therefore a real check and not a tautology.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::{selector, DenseMatrix};
use crate::scalar::{Scalar, Sign, Tolerance};
use crate::substochastic::SubstochasticMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Lemma1,
    Lemma2,
    Eq13,
    Eq17,
    Eq20,
    Eq21,
    Thm2First,
    Thm2Second,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::Lemma1,
        IdentityId::Lemma2,
        IdentityId::Eq13,
        IdentityId::Eq17,
        IdentityId::Eq20,
        IdentityId::Eq21,
        IdentityId::Thm2First,
        IdentityId::Thm2Second,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Lemma1 => "lemma1",
            IdentityId::Lemma2 => "lemma2",
            IdentityId::Eq13 => "eq13",
            IdentityId::Eq17 => "eq17",
            IdentityId::Eq20 => "eq20",
            IdentityId::Eq21 => "eq21",
            IdentityId::Thm2First => "thm2_first",
            IdentityId::Thm2Second => "thm2_second",
        }
    }

    /// Whether the identity is stated for substochastic `P` only.
    pub fn needs_substochastic(self) -> bool {
        matches!(self, IdentityId::Thm2First | IdentityId::Thm2Second)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport<T> {
    pub id: IdentityId,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub lhs: T,
    pub rhs: T,
    /// `lhs - rhs`.
    pub residual: T,
    pub passed: bool,
}

impl<T: Scalar> IdentityReport<T> {
    fn new(
        id: IdentityId,
        m: Option<usize>,
        l: Option<usize>,
        lhs: T,
        rhs: T,
        tol: &Tolerance,
    ) -> Self {
        let residual = lhs.clone() - rhs.clone();
        let passed = T::residual_passes(&lhs, &rhs, &residual, tol);
        IdentityReport {
            id,
            m,
            l,
            lhs,
            rhs,
            residual,
            passed,
        }
    }

    fn sort_key(&self) -> (IdentityId, Option<usize>, Option<usize>) {
        (self.id, self.m, self.l)
    }
}

/// A failed evaluation inside a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityFailure {
    pub id: IdentityId,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub error: Error,
}

/// Left side plus the individual right-side summands, keyed by summation
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    pub lhs: T,
    pub terms: Vec<(usize, T)>,
}

impl<T: Scalar> Expansion<T> {
    pub fn rhs(&self) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (_, t)| acc + t.clone())
    }

    /// Same left side and same summands, under `tol`.
    pub fn matches(&self, other: &Self, tol: &Tolerance) -> bool {
        self.lhs.approx_eq(&other.lhs, tol)
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((i, a), (j, b))| i == j && a.approx_eq(b, tol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateScope {
    /// `det B` and every `det B(l|l)` are nonzero.
    Denominators,
    /// Every principal minor is nonzero.
    AllPrincipalMinors,
}

/// Square `B` whose determinant and single-deletion principal minors are
/// all nonzero, the condition every denominator in the identities needs.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMatrix<T> {
    b: DenseMatrix<T>,
    scope: CertificateScope,
}

impl<T: Scalar> GeneralMatrix<T> {
    /// Checks `det B ≠ 0` and `det B(l|l) ≠ 0` for every `l`.
    pub fn certify(b: DenseMatrix<T>) -> Result<Self> {
        let n = b.order()?;
        if !b.is_nonsingular()? {
            return Err(Error::NotCertified("det B is zero"));
        }
        if n >= 2 {
            for l in 1..=n {
                if !b.delete_row_col(l, l)?.is_nonsingular()? {
                    return Err(Error::NotCertified("a minor det B(l|l) is zero"));
                }
            }
        }
        Ok(GeneralMatrix {
            b,
            scope: CertificateScope::Denominators,
        })
    }

    /// Checks every one of the `2^n - 1` principal minors.
    pub fn certify_strict(b: DenseMatrix<T>) -> Result<Self> {
        let n = b.order()?;
        if n > 20 {
            return Err(Error::PreconditionViolated(
                "strict certification limited to n <= 20",
            ));
        }
        for mask in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let entries = idx
                .iter()
                .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
                .map(|(i, j)| b.at(i + 1, j + 1).clone())
                .collect();
            if !DenseMatrix::new(idx.len(), idx.len(), entries)?.is_nonsingular()? {
                return Err(Error::NotCertified("a principal minor is zero"));
            }
        }
        Ok(GeneralMatrix {
            b,
            scope: CertificateScope::AllPrincipalMinors,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.b
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.b
    }

    pub fn order(&self) -> usize {
        self.b.rows()
    }

    pub fn scope(&self) -> CertificateScope {
        self.scope
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, dim: n })
    }
}

fn check_pair(m: usize, l: usize, n: usize) -> Result<()> {
    check_index(m, n)?;
    check_index(l, n)?;
    if m == l {
        return Err(Error::SelectorUndefined { index: m });
    }
    Ok(())
}

fn at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::MatrixTooSmall { dim: n })
    } else {
        Ok(())
    }
}

fn nonzero<T: Scalar>(den: T, index: usize) -> Result<T> {
    if den.is_zero() {
        Err(Error::SingularSubmatrix { index })
    } else {
        Ok(den)
    }
}

/// Quantities attached to one deleted index `l`.
#[derive(Debug, Clone)]
struct Deletion<T> {
    /// `det B(l|l)`.
    minor: T,
    row: Vec<T>,
    /// `B(l|l)⁻¹ b_{·l}`, or why it does not exist.
    inverse_col: Result<Vec<T>>,
    /// `adj(B(l|l)) b_{·l}`.
    adjugate_col: Vec<T>,
}

/// Per-matrix cache of everything the identities need for each deleted
/// index. Built once per sweep.
#[derive(Debug, Clone)]
struct Workspace<'a, T> {
    b: &'a DenseMatrix<T>,
    det: T,
    deletions: Vec<Deletion<T>>,
}

impl<'a, T: Scalar> Workspace<'a, T> {
    fn new(b: &'a DenseMatrix<T>) -> Result<Self> {
        let n = b.order()?;
        at_least_two(n)?;
        let mut deletions = Vec::with_capacity(n);
        for l in 1..=n {
            let sub = b.delete_row_col(l, l)?;
            let col = b.col_without(l)?;
            let inverse_col = match sub.inverse() {
                Ok(inv) => inv.mul_vec(col.entries()),
                Err(Error::SingularMatrix) => Err(Error::SingularSubmatrix { index: l }),
                Err(e) => Err(e),
            };
            deletions.push(Deletion {
                minor: sub.determinant()?,
                row: b.row_without(l)?.entries().to_vec(),
                inverse_col,
                adjugate_col: sub.adjugate()?.mul_vec(col.entries())?,
            });
        }
        Ok(Workspace {
            b,
            det: b.determinant()?,
            deletions,
        })
    }

    fn n(&self) -> usize {
        self.b.rows()
    }

    fn entry(&self, i: usize, j: usize) -> T {
        self.b.at(i, j).clone()
    }

    fn del(&self, l: usize) -> &Deletion<T> {
        &self.deletions[l - 1]
    }

    fn inverse_col(&self, l: usize) -> Result<&[T]> {
        self.del(l).inverse_col.as_deref().map_err(Clone::clone)
    }

    /// `b_{l·} B(l|l)⁻¹ b_{·l}`.
    fn inverse_form(&self, l: usize) -> Result<T> {
        crate::matrix::dot(&self.del(l).row, self.inverse_col(l)?)
    }

    /// `b_{l·} adj(B(l|l)) b_{·l}`.
    fn adjugate_form(&self, l: usize) -> Result<T> {
        crate::matrix::dot(&self.del(l).row, &self.del(l).adjugate_col)
    }

    /// `f_{pick,del} B(del|del)⁻¹ b_{·del}`.
    fn selected_inverse(&self, pick: usize, del: usize) -> Result<T> {
        selector::<T>(pick, del, self.n())?.dot(self.inverse_col(del)?)
    }

    /// `f_{pick,del} adj(B(del|del)) b_{·del}`.
    fn selected_adjugate(&self, pick: usize, del: usize) -> Result<T> {
        selector::<T>(pick, del, self.n())?.dot(&self.del(del).adjugate_col)
    }

    /// `b_ll det B(l|l) - b_{l·} adj(B(l|l)) b_{·l}`.
    fn cleared_denominator(&self, l: usize) -> Result<T> {
        Ok(self.entry(l, l) * self.del(l).minor.clone() - self.adjugate_form(l)?)
    }

    /// `b_ll - b_{l·} B(l|l)⁻¹ b_{·l}`.
    fn schur(&self, l: usize) -> Result<T> {
        Ok(self.entry(l, l) - self.inverse_form(l)?)
    }

    fn lemma1(&self, m: usize, l: usize, tol: &Tolerance) -> Result<IdentityReport<T>> {
        check_pair(m, l, self.n())?;
        let lhs = self.selected_adjugate(m, l)?;
        let rhs = self.b.minor(l, m)?.signed(Sign::of_parity(m + l + 1));
        Ok(IdentityReport::new(
            IdentityId::Lemma1,
            Some(m),
            Some(l),
            lhs,
            rhs,
            tol,
        ))
    }

    fn lemma2(&self, l: usize, tol: &Tolerance) -> Result<IdentityReport<T>> {
        check_index(l, self.n())?;
        let lhs = self.cleared_denominator(l)?;
        Ok(IdentityReport::new(
            IdentityId::Lemma2,
            None,
            Some(l),
            lhs,
            self.det.clone(),
            tol,
        ))
    }

    fn eq13(&self, m: usize) -> Result<Expansion<T>> {
        let n = self.n();
        check_index(m, n)?;
        let form = self.inverse_form(m)?;
        let lhs = form.clone() / nonzero(self.entry(m, m) - form, m)?;
        let mut terms = Vec::with_capacity(n - 1);
        for l in (1..=n).filter(|&l| l != m) {
            let den = nonzero(self.schur(l)?, l)?;
            terms.push((l, self.entry(l, m) * self.selected_inverse(m, l)? / den));
        }
        Ok(Expansion { lhs, terms })
    }

    fn eq17(&self, m: usize, tol: &Tolerance) -> Result<IdentityReport<T>> {
        let n = self.n();
        check_index(m, n)?;
        let check = |den: T, index: usize| -> Result<T> {
            if T::EXACT && den != self.det {
                return Err(Error::InvariantViolated(
                    "adjugate-cleared denominator differs from det B",
                ));
            }
            nonzero(den, index)
        };
        let form = self.adjugate_form(m)?;
        let lhs = form.clone() / check(self.entry(m, m) * self.del(m).minor.clone() - form, m)?;
        let mut rhs = T::zero();
        for l in (1..=n).filter(|&l| l != m) {
            let den = check(self.cleared_denominator(l)?, l)?;
            rhs = rhs + self.entry(l, m) * self.selected_adjugate(m, l)? / den;
        }
        Ok(IdentityReport::new(
            IdentityId::Eq17,
            Some(m),
            None,
            lhs,
            rhs,
            tol,
        ))
    }

    fn eq20(&self, l: usize, m: usize) -> Result<Expansion<T>> {
        let n = self.n();
        check_pair(l, m, n)?;
        let den_m = nonzero(self.schur(m)?, m)?;
        let lhs = -(self.entry(m, m) * self.selected_inverse(l, m)?) / den_m;
        let mut terms = Vec::with_capacity(n - 1);
        for k in (1..=n).filter(|&k| k != m) {
            let den_k = nonzero(self.schur(k)?, k)?;
            let term = if k == l {
                -self.entry(l, m) / den_k
            } else {
                self.entry(k, m) * self.selected_inverse(l, k)? / den_k
            };
            terms.push((k, term));
        }
        Ok(Expansion { lhs, terms })
    }

    fn eq21(&self, l: usize, m: usize, tol: &Tolerance) -> Result<IdentityReport<T>> {
        let n = self.n();
        check_pair(l, m, n)?;
        let lhs = -(self.entry(m, m) * self.selected_adjugate(l, m)?);
        let mut rhs = -(self.entry(l, m) * self.del(l).minor.clone());
        for k in (1..=n).filter(|&k| k != l && k != m) {
            rhs = rhs + self.entry(k, m) * self.selected_adjugate(l, k)?;
        }
        Ok(IdentityReport::new(
            IdentityId::Eq21,
            Some(m),
            Some(l),
            lhs,
            rhs,
            tol,
        ))
    }
}

fn report_of<T: Scalar>(
    id: IdentityId,
    m: Option<usize>,
    l: Option<usize>,
    e: Expansion<T>,
    tol: &Tolerance,
) -> IdentityReport<T> {
    let rhs = e.rhs();
    IdentityReport::new(id, m, l, e.lhs, rhs, tol)
}

/// `b_ll - b_{l·} B(l|l)⁻¹ b_{·l}`. On the exact backend the result is
/// checked against `det B / det B(l|l)` multiplicatively.
pub fn schur_denominator<T: Scalar>(b: &GeneralMatrix<T>, l: usize) -> Result<T> {
    let ws = Workspace::new(&b.b)?;
    check_index(l, ws.n())?;
    let den = ws.schur(l)?;
    if T::EXACT && den.clone() * ws.del(l).minor.clone() != ws.det {
        return Err(Error::InvariantViolated(
            "Schur denominator times det B(l|l) differs from det B",
        ));
    }
    Ok(den)
}

pub fn lemma1_sides<T: Scalar>(
    b: &GeneralMatrix<T>,
    m: usize,
    l: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Workspace::new(&b.b)?.lemma1(m, l, tol)
}

pub fn lemma2_sides<T: Scalar>(
    b: &GeneralMatrix<T>,
    l: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Workspace::new(&b.b)?.lemma2(l, tol)
}

/// Summands of the quotient identity at row/column `m`.
pub fn eq13_expansion<T: Scalar>(b: &GeneralMatrix<T>, m: usize) -> Result<Expansion<T>> {
    Workspace::new(&b.b)?.eq13(m)
}

pub fn eq13_sides<T: Scalar>(
    b: &GeneralMatrix<T>,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Ok(report_of(
        IdentityId::Eq13,
        Some(m),
        None,
        eq13_expansion(b, m)?,
        tol,
    ))
}

/// The quotient identity with adjugates in place of inverses. Every
/// denominator must equal `det B`; on the exact backend a mismatch is an
/// error.
pub fn eq17_residual<T: Scalar>(
    b: &GeneralMatrix<T>,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Workspace::new(&b.b)?.eq17(m, tol)
}

/// Summands of the off-diagonal quotient identity for the pair `(l, m)`.
/// The `-b_lm / s_l` summand is keyed by `l`.
pub fn eq20_expansion<T: Scalar>(b: &GeneralMatrix<T>, l: usize, m: usize) -> Result<Expansion<T>> {
    Workspace::new(&b.b)?.eq20(l, m)
}

pub fn eq20_sides<T: Scalar>(
    b: &GeneralMatrix<T>,
    l: usize,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Ok(report_of(
        IdentityId::Eq20,
        Some(m),
        Some(l),
        eq20_expansion(b, l, m)?,
        tol,
    ))
}

/// Division-free form of the off-diagonal identity.
pub fn eq21_residual<T: Scalar>(
    b: &GeneralMatrix<T>,
    l: usize,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    Workspace::new(&b.b)?.eq21(l, m, tol)
}

/// `Σ_k b_km (-1)^{k+l} det B(k|l)`: the expansion along column `l` of `B`
/// with column `l` replaced by column `m`. Zero whenever `l ≠ m`, and
/// `det B` when `l = m`.
pub fn column_replacement_sum<T: Scalar>(b: &DenseMatrix<T>, l: usize, m: usize) -> Result<T> {
    let n = b.order()?;
    at_least_two(n)?;
    check_index(l, n)?;
    check_index(m, n)?;
    let mut sum = T::zero();
    for k in 1..=n {
        sum = sum + b.at(k, m).clone() * b.cofactor(k, l)?;
    }
    Ok(sum)
}

/// Pieces of the identities written for `P`, with all deletions taken
/// from `I - P`.
struct PNotation<'a, T> {
    p: &'a DenseMatrix<T>,
    /// `(I - P)(k|k)⁻¹ p_{·k}` per `k`.
    solved: Vec<Result<Vec<T>>>,
}

impl<'a, T: Scalar> PNotation<'a, T> {
    fn new(p: &'a SubstochasticMatrix<T>) -> Result<Self> {
        let a = p.i_minus_p();
        let n = p.order();
        at_least_two(n)?;
        let mut solved = Vec::with_capacity(n);
        for k in 1..=n {
            let col = p.matrix().col_without(k)?;
            solved.push(match a.delete_row_col(k, k)?.inverse() {
                Ok(inv) => inv.mul_vec(col.entries()),
                Err(Error::SingularMatrix) => Err(Error::SingularSubmatrix { index: k }),
                Err(e) => Err(e),
            });
        }
        Ok(PNotation {
            p: p.matrix(),
            solved,
        })
    }

    fn n(&self) -> usize {
        self.p.rows()
    }

    fn solved_column(&self, k: usize) -> Result<&[T]> {
        self.solved[k - 1].as_deref().map_err(Clone::clone)
    }

    /// `p_{k·} (I - P)(k|k)⁻¹ p_{·k}`.
    fn form(&self, k: usize) -> Result<T> {
        self.p.row_without(k)?.dot(self.solved_column(k)?)
    }

    /// `1 - p_kk - p_{k·} (I - P)(k|k)⁻¹ p_{·k}`.
    fn denominator(&self, k: usize) -> Result<T> {
        nonzero(T::one() - self.p.at(k, k).clone() - self.form(k)?, k)
    }

    /// `f_{pick,k} (I - P)(k|k)⁻¹ p_{·k}`.
    fn selected(&self, pick: usize, k: usize) -> Result<T> {
        selector::<T>(pick, k, self.n())?.dot(self.solved_column(k)?)
    }

    fn first(&self, m: usize) -> Result<Expansion<T>> {
        let n = self.n();
        check_index(m, n)?;
        let lhs = self.form(m)? / self.denominator(m)?;
        let mut terms = Vec::with_capacity(n - 1);
        for k in (1..=n).filter(|&k| k != m) {
            terms.push((
                k,
                self.p.at(k, m).clone() * self.selected(m, k)? / self.denominator(k)?,
            ));
        }
        Ok(Expansion { lhs, terms })
    }

    fn second(&self, l: usize, m: usize) -> Result<Expansion<T>> {
        let n = self.n();
        check_pair(l, m, n)?;
        let lhs =
            (T::one() - self.p.at(m, m).clone()) * self.selected(l, m)? / self.denominator(m)?;
        let mut terms = Vec::with_capacity(n - 1);
        for k in (1..=n).filter(|&k| k != m) {
            let term = if k == l {
                self.p.at(l, m).clone() / self.denominator(l)?
            } else {
                self.p.at(k, m).clone() * self.selected(l, k)? / self.denominator(k)?
            };
            terms.push((k, term));
        }
        Ok(Expansion { lhs, terms })
    }
}

pub fn thm2_first_expansion<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    m: usize,
) -> Result<Expansion<T>> {
    PNotation::new(p)?.first(m)
}

pub fn thm2_second_expansion<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    l: usize,
    m: usize,
) -> Result<Expansion<T>> {
    PNotation::new(p)?.second(l, m)
}

fn general_of<T: Scalar>(p: &SubstochasticMatrix<T>) -> Result<GeneralMatrix<T>> {
    GeneralMatrix::certify(p.i_minus_p())
}

fn coherent<T: Scalar>(
    id: IdentityId,
    m: Option<usize>,
    l: Option<usize>,
    direct: Expansion<T>,
    via_b: &Expansion<T>,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    if !direct.matches(via_b, tol) {
        return Err(Error::InvariantViolated(
            "p-notation evaluation disagrees with B = I - P",
        ));
    }
    Ok(report_of(id, m, l, direct, tol))
}

/// Evaluates the first identity for `P` and requires it to agree, summand
/// by summand, with [`eq13_expansion`] at `B = I - P`.
pub fn thm2_first<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    let direct = thm2_first_expansion(p, m)?;
    let via_b = eq13_expansion(&general_of(p)?, m)?;
    coherent(IdentityId::Thm2First, Some(m), None, direct, &via_b, tol)
}

/// Evaluates the second identity for `P` and requires it to agree, summand
/// by summand, with [`eq20_expansion`] at `B = I - P`.
pub fn thm2_second<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    l: usize,
    m: usize,
    tol: &Tolerance,
) -> Result<IdentityReport<T>> {
    let direct = thm2_second_expansion(p, l, m)?;
    let via_b = eq20_expansion(&general_of(p)?, l, m)?;
    coherent(
        IdentityId::Thm2Second,
        Some(m),
        Some(l),
        direct,
        &via_b,
        tol,
    )
}

/// What [`verify_all`] runs on.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a, T> {
    General(&'a GeneralMatrix<T>),
    Substochastic(&'a SubstochasticMatrix<T>),
}

pub type SweepEntry<T> = core::result::Result<IdentityReport<T>, IdentityFailure>;

/// Every applicable identity over every valid index combination.
pub fn verify_all<T: Scalar>(subject: Subject<'_, T>, tol: &Tolerance) -> Vec<SweepEntry<T>> {
    verify_selected(subject, &IdentityId::ALL, tol)
}

/// Like [`verify_all`] but limited to `ids`. Identities that need a
/// substochastic input are skipped for a general one. Errors are collected
/// per entry; the sweep never stops early. Output is ordered by identity,
/// then `m`, then `l`.
pub fn verify_selected<T: Scalar>(
    subject: Subject<'_, T>,
    ids: &[IdentityId],
    tol: &Tolerance,
) -> Vec<SweepEntry<T>> {
    // certification of I - P is rechecked so a general-matrix failure is
    // reported rather than assumed away
    let (b, certified, substochastic) = match subject {
        Subject::General(g) => (g.matrix().clone(), Ok(()), None),
        Subject::Substochastic(p) => (p.i_minus_p(), general_of(p).map(|_| ()), Some(p)),
    };
    let n = b.rows();
    let mut out: Vec<SweepEntry<T>> = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push =
        |id: IdentityId, m: Option<usize>, l: Option<usize>, r: Result<IdentityReport<T>>| {
            out.push(r.map_err(|error| IdentityFailure { id, m, l, error }));
        };
    let mut ids: Vec<IdentityId> = ids.to_vec();
    ids.sort();
    ids.dedup();
    let pairs = || (1..=n).flat_map(move |m| (1..=n).filter(move |&l| l != m).map(move |l| (m, l)));
    let ws = certified.and_then(|()| Workspace::new(&b));
    let pn = substochastic.map(PNotation::new);

    for id in ids {
        if id.needs_substochastic() {
            let Some(pn) = &pn else { continue };
            let pn = match pn {
                Ok(pn) => pn,
                Err(e) => {
                    push(id, None, None, Err(e.clone()));
                    continue;
                }
            };
            let ws = match &ws {
                Ok(ws) => ws,
                Err(e) => {
                    push(id, None, None, Err(e.clone()));
                    continue;
                }
            };
            if id == IdentityId::Thm2First {
                for m in 1..=n {
                    let r = pn
                        .first(m)
                        .and_then(|d| coherent(id, Some(m), None, d, &ws.eq13(m)?, tol));
                    push(id, Some(m), None, r);
                }
            } else {
                for (m, l) in pairs() {
                    let r = pn
                        .second(l, m)
                        .and_then(|d| coherent(id, Some(m), Some(l), d, &ws.eq20(l, m)?, tol));
                    push(id, Some(m), Some(l), r);
                }
            }
            continue;
        }
        let ws = match &ws {
            Ok(ws) => ws,
            Err(e) => {
                push(id, None, None, Err(e.clone()));
                continue;
            }
        };
        match id {
            IdentityId::Lemma1 => {
                for (m, l) in pairs() {
                    push(id, Some(m), Some(l), ws.lemma1(m, l, tol));
                }
            }
            IdentityId::Lemma2 => {
                for l in 1..=n {
                    push(id, None, Some(l), ws.lemma2(l, tol));
                }
            }
            IdentityId::Eq13 => {
                for m in 1..=n {
                    let r = ws.eq13(m).map(|e| report_of(id, Some(m), None, e, tol));
                    push(id, Some(m), None, r);
                }
            }
            IdentityId::Eq17 => {
                for m in 1..=n {
                    push(id, Some(m), None, ws.eq17(m, tol));
                }
            }
            IdentityId::Eq20 => {
                for (m, l) in pairs() {
                    let r = ws
                        .eq20(l, m)
                        .map(|e| report_of(id, Some(m), Some(l), e, tol));
                    push(id, Some(m), Some(l), r);
                }
            }
            IdentityId::Eq21 => {
                for (m, l) in pairs() {
                    push(id, Some(m), Some(l), ws.eq21(l, m, tol));
                }
            }
            IdentityId::Thm2First | IdentityId::Thm2Second => unreachable!(),
        }
    }
    out.sort_by_key(|e| match e {
        Ok(r) => r.sort_key(),
        Err(f) => (f.id, f.m, f.l),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::substochastic::validate_substochastic;
    use alloc::vec;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(rows: &[&[i64]]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn tridiag() -> GeneralMatrix<Rational> {
        GeneralMatrix::certify(ints(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])).unwrap()
    }

    fn sample_p() -> SubstochasticMatrix<Rational> {
        validate_substochastic(
            DenseMatrix::from_rows(vec![vec![q(1, 2), q(1, 4)], vec![q(1, 3), q(1, 3)]]).unwrap(),
        )
        .unwrap()
    }

    const TOL: Tolerance = Tolerance::new(1e-9, 1e-12);

    #[test]
    fn certification() {
        assert!(GeneralMatrix::certify(ints(&[&[1, 2], &[3, 4]])).is_ok());
        assert_eq!(
            GeneralMatrix::certify(ints(&[&[1, 2], &[2, 4]])),
            Err(Error::NotCertified("det B is zero"))
        );
        assert_eq!(
            GeneralMatrix::certify(ints(&[&[0, 1], &[1, 0]])),
            Err(Error::NotCertified("a minor det B(l|l) is zero"))
        );
        // every det B(l|l) is -1 but the 1x1 principal minors vanish
        let b = ints(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(
            GeneralMatrix::certify(b.clone()).map(|g| g.scope()),
            Ok(CertificateScope::Denominators)
        );
        assert_eq!(
            GeneralMatrix::certify_strict(b),
            Err(Error::NotCertified("a principal minor is zero"))
        );
        let b = ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert!(GeneralMatrix::certify(b.clone()).is_ok());
        assert_eq!(
            GeneralMatrix::certify_strict(b).map(|g| g.scope()),
            Ok(CertificateScope::AllPrincipalMinors)
        );
        assert!(GeneralMatrix::certify(ints(&[&[3]])).is_ok());
        assert!(GeneralMatrix::certify(ints(&[&[0]])).is_err());
    }

    #[test]
    fn schur_denominator_examples() {
        let b = GeneralMatrix::certify(ints(&[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(schur_denominator(&b, 1).unwrap(), q(-1, 2));
        let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(4)).unwrap();
        for l in 1..=4 {
            assert_eq!(schur_denominator(&id, l).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn lemma_examples() {
        let b = GeneralMatrix::certify(ints(&[&[1, 2], &[3, 4]])).unwrap();
        let r = lemma1_sides(&b, 1, 2, &TOL).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(2, 1), q(2, 1)));
        assert!(r.passed);
        let r = lemma2_sides(&b, 1, &TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (q(-2, 1), q(-2, 1)));
        let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(3)).unwrap();
        for (m, l) in [(1, 2), (3, 1), (2, 3)] {
            let r = lemma1_sides(&id, m, l, &TOL).unwrap();
            assert!(r.lhs.is_zero() && r.rhs.is_zero());
        }
        for l in 1..=3 {
            let r = lemma2_sides(&id, l, &TOL).unwrap();
            assert_eq!((r.lhs, r.rhs), (q(1, 1), q(1, 1)));
        }
        assert_eq!(
            lemma1_sides(&b, 2, 2, &TOL),
            Err(Error::SelectorUndefined { index: 2 })
        );
    }

    #[test]
    fn quotient_identity_examples() {
        let b = tridiag();
        // B⁻¹ = (1/4)[[3,-2,1],[-2,4,-2],[1,-2,3]]; for m = 1,
        // s_1 = det B / det B(1|1) = 4/3 and b_11 - s_1 = 2/3, so lhs = 1/2.
        let r = eq13_sides(&b, 1, &TOL).unwrap();
        assert_eq!(r.lhs, q(1, 2));
        assert!(r.passed && r.residual.is_zero());
        let r = eq17_residual(
            &GeneralMatrix::certify(ints(&[&[2, 1], &[1, 2]])).unwrap(),
            1,
            &TOL,
        )
        .unwrap();
        assert!(r.passed);
        let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(3)).unwrap();
        for m in 1..=3 {
            let r = eq13_sides(&id, m, &TOL).unwrap();
            assert!(r.lhs.is_zero() && r.rhs.is_zero());
            let r = eq17_residual(&id, m, &TOL).unwrap();
            assert!(r.lhs.is_zero() && r.rhs.is_zero());
        }
    }

    #[test]
    fn off_diagonal_identity_examples() {
        let b = tridiag();
        let r = eq20_sides(&b, 1, 2, &TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let r = eq21_residual(&b, 3, 1, &TOL).unwrap();
        assert!(r.passed, "{r:?}");
        // two-term case: B = [[a,b],[c,d]], l=1, m=2 gives -bd/(ad-bc) on both sides
        let two = GeneralMatrix::certify(ints(&[&[1, 2], &[3, 4]])).unwrap();
        let r = eq20_sides(&two, 1, 2, &TOL).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(4, 1), q(4, 1)));
        let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(3)).unwrap();
        let r = eq20_sides(&id, 2, 3, &TOL).unwrap();
        assert!(r.lhs.is_zero() && r.rhs.is_zero());
        let r = eq21_residual(&id, 2, 3, &TOL).unwrap();
        assert!(r.lhs.is_zero() && r.rhs.is_zero());
    }

    #[test]
    fn column_replacement() {
        let b = ints(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        for l in 1..=3 {
            for m in 1..=3 {
                let s = column_replacement_sum(&b, l, m).unwrap();
                if l == m {
                    assert_eq!(s, q(4, 1));
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn p_notation_examples() {
        let z = validate_substochastic(DenseMatrix::<Rational>::zeros(3, 3)).unwrap();
        for m in 1..=3 {
            let r = thm2_first(&z, m, &TOL).unwrap();
            assert!(r.lhs.is_zero() && r.rhs.is_zero());
            for l in (1..=3).filter(|&l| l != m) {
                let r = thm2_second(&z, l, m, &TOL).unwrap();
                assert!(r.lhs.is_zero() && r.rhs.is_zero());
            }
        }
        let p = sample_p();
        // I - P = [[1/2,-1/4],[-1/3,2/3]]; m = 1: form = (1/4)(3/2)(1/3) = 1/8,
        // denominator 1 - 1/2 - 1/8 = 3/8, so lhs = 1/3.
        let r = thm2_first(&p, 1, &TOL).unwrap();
        assert_eq!(r.lhs, q(1, 3));
        assert!(r.residual.is_zero());
        let r = thm2_second(&p, 1, 2, &TOL).unwrap();
        assert!(r.residual.is_zero(), "{r:?}");
    }

    #[test]
    fn sweep_ordering_and_counts() {
        let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(3)).unwrap();
        let all = verify_all(Subject::General(&id), &TOL);
        // lemma1 6 + lemma2 3 + eq13 3 + eq17 3 + eq20 6 + eq21 6
        assert_eq!(all.len(), 27);
        assert!(all
            .iter()
            .all(|e| e.as_ref().is_ok_and(|r| r.passed && r.residual.is_zero())));
        let keys: Vec<_> = all.iter().map(|e| e.as_ref().unwrap().sort_key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let all = verify_all(Subject::General(&tridiag()), &TOL);
        assert!(all.iter().all(|e| e.as_ref().is_ok_and(|r| r.passed)));

        let p = sample_p();
        let all = verify_all(Subject::Substochastic(&p), &TOL);
        // 2 + 2 + 2 + 2 + 2 + 2 + 2 + 2
        assert_eq!(all.len(), 16);
        assert!(all.iter().all(|e| e.as_ref().is_ok_and(|r| r.passed)));
    }

    #[test]
    fn float_backend_sweep() {
        let b = GeneralMatrix::certify(tridiag().into_matrix().map(Scalar::to_f64)).unwrap();
        let all = verify_all(Subject::General(&b), &TOL);
        assert!(all.iter().all(|e| e.as_ref().is_ok_and(|r| r.passed)));
    }
}
