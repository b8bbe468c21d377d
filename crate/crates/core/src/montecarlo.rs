//! Random-walk estimates of expected visit counts.
//!
//! For a certified substochastic `P`, entry `(i, j)` of `(I - P)⁻¹` is the
//! expected number of visits to `j` by the walk started at `i` that moves
//! from `a` to `b` with probability `p_ab` and stops with probability
//! `1 - Σ_b p_ab`. Walks are simulated independently, trial `t` drawing
//! from the stream `derive_seed(seed, t)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::{derive_seed, SplitMix64};
use crate::scalar::Scalar;
use crate::substochastic::SubstochasticMatrix;

/// Per-trial step cap. Trials that reach it are stopped and counted.
pub const STEP_CAP: u64 = 1_000_000;

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkStatistics {
    /// 1-based.
    pub start_state: usize,
    pub trials: u64,
    pub mean_visits: Vec<f64>,
    /// 95% normal-approximation half-widths of `mean_visits`.
    pub ci_halfwidth: Vec<f64>,
    pub seed: u64,
    pub cap_exceeded: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckFlag {
    pub start: usize,
    pub state: usize,
    pub estimate: f64,
    pub exact: f64,
    pub halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub sigma: f64,
    /// `(I - P)⁻¹` rendered to `f64`.
    pub exact: DenseMatrix<f64>,
    /// One entry per start state, in order.
    pub rows: Vec<WalkStatistics>,
    pub flags: Vec<CrosscheckFlag>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Row-wise cumulative transition probabilities. Sums are formed in the
/// matrix's own backend and rounded once.
fn cumulative_rows<T: Scalar>(p: &DenseMatrix<T>) -> Vec<Vec<f64>> {
    p.row_iter()
        .map(|row| {
            let mut acc = T::zero();
            row.iter()
                .map(|x| {
                    acc = acc.clone() + x.clone();
                    acc.to_f64()
                })
                .collect()
        })
        .collect()
}

pub fn simulate_visits<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    start: usize,
    trials: u64,
    seed: u64,
) -> Result<WalkStatistics> {
    let n = p.order();
    if !(1..=n).contains(&start) {
        return Err(Error::IndexOutOfRange {
            index: start,
            dim: n,
        });
    }
    if trials == 0 {
        return Err(Error::PreconditionViolated("trials must be at least 1"));
    }
    let cum = cumulative_rows(p.matrix());
    let mut sum = alloc::vec![0.0f64; n];
    let mut sum_sq = alloc::vec![0.0f64; n];
    let mut visits = alloc::vec![0u64; n];
    let mut cap_exceeded = 0;
    for t in 0..trials {
        let mut rng = SplitMix64::new(derive_seed(seed, t));
        visits.iter_mut().for_each(|v| *v = 0);
        let mut state = start - 1;
        let mut steps = 0u64;
        loop {
            visits[state] += 1;
            steps += 1;
            if steps >= STEP_CAP {
                cap_exceeded += 1;
                break;
            }
            let u = rng.next_f64();
            match cum[state].iter().position(|&c| u < c) {
                Some(next) => state = next,
                None => break,
            }
        }
        for (j, &v) in visits.iter().enumerate() {
            let v = v as f64;
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    let count = trials as f64;
    let mean_visits: Vec<f64> = sum.iter().map(|s| s / count).collect();
    let ci_halfwidth = mean_visits
        .iter()
        .zip(&sum_sq)
        .map(|(mean, sq)| {
            if trials < 2 {
                return 0.0;
            }
            let var = libm::fmax((sq - count * mean * mean) / (count - 1.0), 0.0);
            Z_95 * libm::sqrt(var / count)
        })
        .collect();
    Ok(WalkStatistics {
        start_state: start,
        trials,
        mean_visits,
        ci_halfwidth,
        seed,
        cap_exceeded,
    })
}

/// Simulates from every start state (start `i` uses seed
/// `derive_seed(seed, i)`) and flags entries farther than
/// `sigma × half-width` from `(I - P)⁻¹`.
pub fn crosscheck_fundamental<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    trials: u64,
    seed: u64,
    sigma: f64,
) -> Result<CrosscheckReport> {
    let exact = p.fundamental_matrix(false)?.map(Scalar::to_f64);
    let mut rows = Vec::with_capacity(p.order());
    let mut flags = Vec::new();
    for start in 1..=p.order() {
        let stats = simulate_visits(p, start, trials, derive_seed(seed, start as u64))?;
        for state in 1..=p.order() {
            let estimate = stats.mean_visits[state - 1];
            let halfwidth = stats.ci_halfwidth[state - 1];
            let truth = *exact.at(start, state);
            if libm::fabs(estimate - truth) > sigma * halfwidth {
                flags.push(CrosscheckFlag {
                    start,
                    state,
                    estimate,
                    exact: truth,
                    halfwidth,
                });
            }
        }
        rows.push(stats);
    }
    Ok(CrosscheckReport {
        sigma,
        exact,
        rows,
        flags,
    })
}
