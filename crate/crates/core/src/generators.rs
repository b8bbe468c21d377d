//! Seeded random instances.
//!
//! Generation is integer-only: every draw comes from [`SplitMix64`] through
//! bounded integer sampling, and entries are built as `k / D` with
//! `D = denominator_bound`. The same [`GenSpec`] gives the same matrix on
//! every platform.
//!
//! Substochastic rows: each column is kept with probability `density`, a
//! row total `t / D` is drawn uniformly from the grid points in
//! `[0, max_row_sum]`, and the `t` units are split among the kept columns
//! in proportion to integer weights drawn from `1..=D` (largest-remainder
//! rounding, ties to the lower column). Every entry is therefore a multiple
//! of `1 / D`.
//!
//! General matrices: each kept entry is `k / D` with `k` uniform in
//! `-D..=D`; candidates are rejected until the nonzero-minor certificate
//! holds.
//!
//! Attempt `a` (0-based) draws from the stream seeded with
//! `derive_seed(seed, a)`; at most [`MAX_ATTEMPTS`] attempts are made.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::identities::GeneralMatrix;
use crate::matrix::DenseMatrix;
use crate::rng::{derive_seed, SplitMix64};
use crate::scalar::Rational;
use crate::substochastic::{validate_substochastic, SubstochasticMatrix};

pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    /// Probability in `[0, 1]` that an entry is drawn rather than zero.
    pub density: Rational,
    /// Upper bound in `(0, 1]` for row sums of substochastic instances.
    pub max_row_sum: Rational,
    pub denominator_bound: u64,
}

impl GenSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        GenSpec {
            n,
            seed,
            density: Rational::one(),
            max_row_sum: Rational::one(),
            denominator_bound: 12,
        }
    }

    pub fn with_density(mut self, density: Rational) -> Self {
        self.density = density;
        self
    }

    pub fn with_max_row_sum(mut self, max_row_sum: Rational) -> Self {
        self.max_row_sum = max_row_sum;
        self
    }

    pub fn with_denominator_bound(mut self, bound: u64) -> Self {
        self.denominator_bound = bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive"));
        }
        if self.density < Rational::zero() || self.density > Rational::one() {
            return Err(Error::InvalidSpec("density must lie in [0, 1]"));
        }
        if self.max_row_sum <= Rational::zero() || self.max_row_sum > Rational::one() {
            return Err(Error::InvalidSpec("max_row_sum must lie in (0, 1]"));
        }
        if self.denominator_bound == 0 || self.denominator_bound > u32::MAX as u64 {
            return Err(Error::InvalidSpec(
                "denominator_bound must lie in [1, 2^32)",
            ));
        }
        self.density_parts()?;
        Ok(())
    }

    fn density_parts(&self) -> Result<(u64, u64)> {
        match (self.density.numer().to_u64(), self.density.denom().to_u64()) {
            (Some(num), Some(den)) => Ok((num, den)),
            _ => Err(Error::InvalidSpec("density denominator too large")),
        }
    }
}

struct Draws<'a> {
    rng: SplitMix64,
    spec: &'a GenSpec,
    keep: (u64, u64),
}

impl Draws<'_> {
    fn kept(&mut self) -> bool {
        let (num, den) = self.keep;
        self.rng.below(den) < num
    }

    fn fraction(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k), BigInt::from(self.spec.denominator_bound))
    }

    fn substochastic_row(&mut self) -> Vec<Rational> {
        let n = self.spec.n;
        let d = self.spec.denominator_bound;
        let kept: Vec<bool> = (0..n).map(|_| self.kept()).collect();
        let weights: Vec<u64> = kept
            .iter()
            .map(|&k| if k { self.rng.range_inclusive(1, d) } else { 0 })
            .collect();
        let cap = (&self.spec.max_row_sum * Rational::from_integer(BigInt::from(d)))
            .floor()
            .to_integer()
            .to_u64()
            .unwrap_or(d);
        let total = self.rng.range_inclusive(0, cap);
        let units = apportion(total, &weights);
        units.into_iter().map(|u| self.fraction(u as i64)).collect()
    }

    fn general_row(&mut self) -> Vec<Rational> {
        let d = self.spec.denominator_bound;
        (0..self.spec.n)
            .map(|_| {
                if self.kept() {
                    let k = self.rng.range_inclusive(0, 2 * d) as i64 - d as i64;
                    self.fraction(k)
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }
}

/// Splits `total` units in proportion to `weights` by largest remainder.
/// All units go nowhere when every weight is zero.
fn apportion(total: u64, weights: &[u64]) -> Vec<u64> {
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    if sum == 0 {
        return alloc::vec![0; weights.len()];
    }
    let mut units: Vec<u64> = Vec::with_capacity(weights.len());
    let mut rems: Vec<(u128, usize)> = Vec::with_capacity(weights.len());
    for (j, &w) in weights.iter().enumerate() {
        let share = total as u128 * w as u128;
        units.push((share / sum) as u64);
        if w > 0 {
            rems.push((share % sum, j));
        }
    }
    let leftover = total - units.iter().sum::<u64>();
    rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, j) in rems.iter().take(leftover as usize) {
        units[j] += 1;
    }
    units
}

fn draws(spec: &GenSpec, attempt: usize) -> Result<Draws<'_>> {
    Ok(Draws {
        rng: SplitMix64::new(derive_seed(spec.seed, attempt as u64)),
        spec,
        keep: spec.density_parts()?,
    })
}

/// Random certified substochastic matrix.
pub fn gen_substochastic(spec: &GenSpec) -> Result<SubstochasticMatrix<Rational>> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let mut d = draws(spec, attempt)?;
        let rows = (0..spec.n).map(|_| d.substochastic_row()).collect();
        if let Ok(p) = validate_substochastic(DenseMatrix::from_rows(rows)?) {
            return Ok(p);
        }
    }
    Err(Error::GenerationExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// Random matrix with `det B ≠ 0` and every `det B(l|l) ≠ 0`.
pub fn gen_general(spec: &GenSpec) -> Result<GeneralMatrix<Rational>> {
    spec.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let mut d = draws(spec, attempt)?;
        let rows = (0..spec.n).map(|_| d.general_row()).collect();
        if let Ok(b) = GeneralMatrix::certify(DenseMatrix::from_rows(rows)?) {
            return Ok(b);
        }
    }
    Err(Error::GenerationExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn apportion_is_exact() {
        assert_eq!(apportion(10, &[1, 1, 1]), alloc::vec![4, 3, 3]);
        assert_eq!(apportion(7, &[0, 5, 0]), alloc::vec![0, 7, 0]);
        assert_eq!(apportion(5, &[0, 0]), alloc::vec![0, 0]);
        assert_eq!(apportion(0, &[3, 9]), alloc::vec![0, 0]);
        let u = apportion(97, &[13, 2, 40, 7]);
        assert_eq!(u.iter().sum::<u64>(), 97);
    }

    #[test]
    fn one_by_one() {
        for seed in 0..50 {
            let spec = GenSpec::new(1, seed).with_max_row_sum(q(1, 2));
            let p = gen_substochastic(&spec).unwrap();
            let s = p.matrix().at(1, 1).clone();
            assert!(s >= q(0, 1) && s <= q(1, 2));
        }
    }

    #[test]
    fn zero_density_gives_zero_matrix() {
        let spec = GenSpec::new(5, 3).with_density(q(0, 1));
        let p = gen_substochastic(&spec).unwrap();
        assert!(p.matrix().as_slice().iter().all(|x| x.is_zero()));
        assert_eq!(
            gen_general(&spec),
            Err(Error::GenerationExhausted {
                attempts: MAX_ATTEMPTS
            })
        );
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::new(6, 1234).with_density(q(3, 4));
        assert_eq!(
            gen_substochastic(&spec).unwrap(),
            gen_substochastic(&spec).unwrap()
        );
        assert_eq!(gen_general(&spec).unwrap(), gen_general(&spec).unwrap());
        let other = GenSpec::new(6, 1235).with_density(q(3, 4));
        assert_ne!(gen_general(&spec).unwrap(), gen_general(&other).unwrap());
    }

    #[test]
    fn denominators_bounded() {
        for seed in 0..40 {
            let spec = GenSpec::new(5, seed).with_denominator_bound(7);
            let p = gen_substochastic(&spec).unwrap();
            let b = gen_general(&spec).unwrap();
            for x in p.matrix().as_slice().iter().chain(b.matrix().as_slice()) {
                assert!(x.denom() <= &BigInt::from(7));
            }
        }
    }

    #[test]
    fn general_n1_nonzero() {
        for seed in 0..20 {
            let b = gen_general(&GenSpec::new(1, seed)).unwrap();
            assert!(!b.matrix().at(1, 1).is_zero());
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(GenSpec::new(0, 1).validate().is_err());
        assert!(GenSpec::new(2, 1).with_density(q(3, 2)).validate().is_err());
        assert!(GenSpec::new(2, 1)
            .with_max_row_sum(q(0, 1))
            .validate()
            .is_err());
        assert!(GenSpec::new(2, 1)
            .with_max_row_sum(q(5, 4))
            .validate()
            .is_err());
        assert!(GenSpec::new(2, 1)
            .with_denominator_bound(0)
            .validate()
            .is_err());
    }
}
