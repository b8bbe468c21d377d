//! Number backends.
//!
//! [`Scalar`] is the contract every matrix entry satisfies. Two backends
//! implement it: [`Rational`] (arbitrary precision, exact equality) and
//! `f64` (IEEE-754 double, comparisons under a [`Tolerance`]).

use core::cmp::Ordering;
use core::fmt::{Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::matrix::{elimination, DenseMatrix};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_parity(k: usize) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Comparison tolerance for the float backend. Ignored by exact backends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance.
    pub rel: f64,
    /// Absolute floor used when both operands are near zero.
    pub abs_floor: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-9;
    pub const DEFAULT_ABS_FLOOR: f64 = 1e-12;

    pub const fn new(rel: f64, abs_floor: f64) -> Self {
        Tolerance { rel, abs_floor }
    }

    pub const fn relative(rel: f64) -> Self {
        Tolerance {
            rel,
            abs_floor: Self::DEFAULT_ABS_FLOOR,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(Self::DEFAULT_REL, Self::DEFAULT_ABS_FLOOR)
    }
}

/// Field element usable as a matrix entry.
///
/// Elimination-based kernels (determinant, inverse, singularity test) are
/// part of the contract so that each backend can pick its own algorithm:
/// fraction-free Bareiss elimination for rationals, partial pivoting for
/// floats.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact and equality is literal.
    const EXACT: bool;
    /// Short backend name, `"exact"` or `"float"`.
    const BACKEND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Nearest representable value (exact for [`Rational`]).
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact rational value, `None` for non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    fn is_zero(&self) -> bool;
    fn sign(&self) -> Sign;
    fn abs(&self) -> Self;

    /// Equality up to `tol` (literal equality on exact backends).
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool;

    /// `self < other` by more than `tol` allows (literal `<` on exact
    /// backends).
    fn definitely_lt(&self, other: &Self, tol: &Tolerance) -> bool;

    /// Pass rule for an identity residual. Exact: `residual == 0`.
    /// Float: `|residual| <= tol.rel * (1 + max(|lhs|, |rhs|))`.
    fn residual_passes(lhs: &Self, rhs: &Self, residual: &Self, tol: &Tolerance) -> bool;

    fn determinant_kernel(m: &DenseMatrix<Self>) -> Self;
    fn inverse_kernel(m: &DenseMatrix<Self>) -> Result<DenseMatrix<Self>>;
    fn nonsingular_kernel(m: &DenseMatrix<Self>) -> bool;

    fn signed(self, sign: Sign) -> Self {
        match sign {
            Sign::Positive => self,
            Sign::Negative => -self,
            Sign::Zero => Self::zero(),
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const BACKEND: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sign(&self) -> Sign {
        if Zero::is_zero(self) {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn approx_eq(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }

    fn definitely_lt(&self, other: &Self, _tol: &Tolerance) -> bool {
        self < other
    }

    fn residual_passes(_lhs: &Self, _rhs: &Self, residual: &Self, _tol: &Tolerance) -> bool {
        Zero::is_zero(residual)
    }

    fn determinant_kernel(m: &DenseMatrix<Self>) -> Self {
        elimination::rational_determinant(m)
    }

    fn inverse_kernel(m: &DenseMatrix<Self>) -> Result<DenseMatrix<Self>> {
        elimination::gauss_jordan_inverse(m, elimination::first_nonzero_pivot)
    }

    fn nonsingular_kernel(m: &DenseMatrix<Self>) -> bool {
        !Zero::is_zero(&elimination::rational_determinant(m))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const BACKEND: &'static str = "float";

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn sign(&self) -> Sign {
        match self.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Sign::Positive,
            Some(Ordering::Less) => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    fn abs(&self) -> Self {
        libm::fabs(*self)
    }

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        let scale = libm::fmax(libm::fabs(*self), libm::fabs(*other));
        libm::fabs(self - other) <= libm::fmax(tol.rel * scale, tol.abs_floor)
    }

    fn definitely_lt(&self, other: &Self, tol: &Tolerance) -> bool {
        *self < *other && !self.approx_eq(other, tol)
    }

    fn residual_passes(lhs: &Self, rhs: &Self, residual: &Self, tol: &Tolerance) -> bool {
        let scale = 1.0 + libm::fmax(libm::fabs(*lhs), libm::fabs(*rhs));
        libm::fabs(*residual) <= tol.rel * scale
    }

    fn determinant_kernel(m: &DenseMatrix<Self>) -> Self {
        elimination::float_determinant(m)
    }

    fn inverse_kernel(m: &DenseMatrix<Self>) -> Result<DenseMatrix<Self>> {
        let floor = elimination::float_singularity_floor(m);
        elimination::gauss_jordan_inverse(m, |col, k, n| {
            elimination::largest_pivot(col, k, n, floor)
        })
    }

    fn nonsingular_kernel(m: &DenseMatrix<Self>) -> bool {
        elimination::float_pivots_above_floor(m)
    }
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"-0.125"` / `"1e-3"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if Zero::is_zero(&den) {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut all = alloc::string::String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Some(if negative { -value } else { value })
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> alloc::string::String {
    alloc::format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_lowest_terms() {
        let r = q(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2"), Some(q(1, 2)));
        assert_eq!(parse_rational(" -3/6 "), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("0.1"), Some(q(1, 10)));
        assert_eq!(parse_rational("-1.25e-1"), Some(q(-1, 8)));
        assert_eq!(parse_rational("2E2"), Some(q(200, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn format_round_trip() {
        for r in [q(1, 2), q(-7, 3), q(5, 1), q(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
    }

    #[test]
    fn float_tolerance_rules() {
        let tol = Tolerance::default();
        assert!(1.0f64.approx_eq(&(1.0 + 1e-12), &tol));
        assert!(!1.0f64.approx_eq(&(1.0 + 1e-6), &tol));
        // absolute floor near zero
        assert!(0.0f64.approx_eq(&1e-13, &tol));
        assert!(!0.0f64.approx_eq(&1e-11, &tol));
        assert!(f64::residual_passes(&1e6, &1e6, &1e-4, &tol));
        assert!(!f64::residual_passes(&1.0, &1.0, &1e-8, &tol));
        assert!(!f64::residual_passes(&1.0, &1.0, &f64::NAN, &tol));
        assert!(!(-1e-14f64).definitely_lt(&0.0, &tol));
        assert!((-1e-3f64).definitely_lt(&0.0, &tol));
    }

    #[test]
    fn exact_comparisons_ignore_tolerance() {
        let tol = Tolerance::relative(1.0);
        assert!(!q(1, 3).approx_eq(&q(1, 2), &tol));
        assert!(q(-1, 1000000).definitely_lt(&<Rational as Scalar>::zero(), &tol));
        assert_eq!(q(-1, 3).sign(), Sign::Negative);
        assert_eq!(Scalar::sign(&q(0, 3)), Sign::Zero);
    }

    #[test]
    fn float_to_rational_is_exact() {
        assert_eq!(0.5f64.to_rational(), Some(q(1, 2)));
        assert_eq!(f64::NAN.to_rational(), None);
        assert_eq!(<f64 as Scalar>::from_rational(&q(1, 4)), 0.25);
    }
}
