//! Dense linear algebra over exact rationals and `f64` for substochastic
//! matrices and the minor/adjugate identities that hold for them.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs: file formats, reports and the command line live
//! in the `submat-cli` companion crate.
//!
//! Indices in the public API are 1-based, so `l` and `m` range over
//! `1..=n` as in the usual matrix notation. Storage is 0-based.
//!
//! Modules:
//!
//! * [`scalar`]: the [`Scalar`] contract with an exact [`Rational`] backend
//!   and an `f64` backend.
//! * [`matrix`]: [`DenseMatrix`], deletions `B(i|j)`, the reduced row and
//!   column vectors `b_{l·}` / `b_{·l}`, the selector `f_ml`, determinants,
//!   minors, adjugates and inverses.
//! * [`substochastic`]: certified substochastic matrices, fundamental
//!   matrices and the diagonal-maximality property of `(I - Pᵀ)⁻¹`.
//! * [`identities`]: two-sided evaluation of the adjugate and Schur
//!   complement identities with residual reports.
//! * [`generators`]: seeded, platform-independent random instances.
//! * [`montecarlo`]: random-walk estimates of expected visit counts.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod generators;
pub mod identities;
pub mod matrix;
pub mod montecarlo;
pub mod rng;
pub mod scalar;
pub mod substochastic;

pub use error::{Error, Result};
pub use generators::{gen_general, gen_substochastic, GenSpec};
pub use identities::{GeneralMatrix, IdentityId, IdentityReport};
pub use matrix::{DeletedVector, DenseMatrix, Orientation};
pub use montecarlo::{crosscheck_fundamental, simulate_visits, CrosscheckReport, WalkStatistics};
pub use rng::SplitMix64;
pub use scalar::{Rational, Scalar, Sign, Tolerance};
pub use substochastic::{Certification, MaximalityReport, SubstochasticMatrix};
