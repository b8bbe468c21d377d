mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use submat::identities::{
    eq13_expansion, eq13_sides, eq17_residual, eq20_expansion, eq20_sides, eq21_residual,
    lemma1_sides, lemma2_sides, schur_denominator, thm2_first, thm2_first_expansion, thm2_second,
    thm2_second_expansion, verify_all, Subject,
};
use submat::substochastic::validate_substochastic;
use submat::{
    gen_general, gen_substochastic, DenseMatrix, GenSpec, GeneralMatrix, Rational, Tolerance,
};

const TOL: Tolerance = Tolerance::new(1e-9, 1e-12);

type Rows = Vec<Vec<Rational>>;

/// `b_{l·} X b_{·l}` style products written out with explicit index loops
/// (0-based `l`), with `X` given as nested rows of size `n - 1`.
fn reduced(v_row: usize, rows: &Rows, skip: usize, col: bool) -> Vec<Rational> {
    (0..rows.len())
        .filter(|&k| k != skip)
        .map(|k| {
            if col {
                rows[k][v_row].clone()
            } else {
                rows[v_row][k].clone()
            }
        })
        .collect()
}

fn mat_vec(x: &Rows, v: &[Rational]) -> Vec<Rational> {
    x.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .fold(Rational::zero(), |a, (p, q)| a + p * q)
        })
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Position of original index `pick` (0-based) after deleting `del`.
fn shifted(pick: usize, del: usize) -> usize {
    if pick < del {
        pick
    } else {
        pick - 1
    }
}

/// Schur denominator from Laplace inverses (0-based `l`).
fn oracle_den(b: &Rows, l: usize) -> Rational {
    let inv = laplace_inverse(&brute_delete(b, l, l));
    &b[l][l]
        - dot(
            &reduced(l, b, l, false),
            &mat_vec(&inv, &reduced(l, b, l, true)),
        )
}

/// `f_{pick,del} B(del|del)⁻¹ b_{·del}` (0-based).
fn oracle_sel(b: &Rows, pick: usize, del: usize) -> Rational {
    let inv = laplace_inverse(&brute_delete(b, del, del));
    mat_vec(&inv, &reduced(del, b, del, true))[shifted(pick, del)].clone()
}

fn oracle_eq13(b: &Rows, m: usize) -> (Rational, Rational) {
    let den = oracle_den(b, m);
    let lhs = (&b[m][m] - &den) / &den;
    let mut rhs = Rational::zero();
    for l in (0..b.len()).filter(|&l| l != m) {
        rhs += &b[l][m] * oracle_sel(b, m, l) / oracle_den(b, l);
    }
    (lhs, rhs)
}

fn oracle_eq20(b: &Rows, l: usize, m: usize) -> (Rational, Rational) {
    let lhs = -(&b[m][m] * oracle_sel(b, l, m)) / oracle_den(b, m);
    let mut rhs = -(&b[l][m]) / oracle_den(b, l);
    for k in (0..b.len()).filter(|&k| k != l && k != m) {
        rhs += &b[k][m] * oracle_sel(b, l, k) / oracle_den(b, k);
    }
    (lhs, rhs)
}

fn general_strategy(
    n: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = GeneralMatrix<Rational>> {
    square(n).prop_filter_map("certificate", |b| GeneralMatrix::certify(b).ok())
}

fn ints(rows: &[&[i64]]) -> GeneralMatrix<Rational> {
    GeneralMatrix::certify(
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x, 1)).collect())
                .collect(),
        )
        .unwrap(),
    )
    .unwrap()
}

#[test]
fn tridiagonal_matches_cofactor_oracle() {
    let b = ints(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
    let rows = to_rows(b.matrix());
    let r = eq13_sides(&b, 1, &TOL).unwrap();
    assert_eq!((r.lhs.clone(), r.rhs.clone()), oracle_eq13(&rows, 0));
    assert!(r.passed);
    let r = eq20_sides(&b, 1, 2, &TOL).unwrap();
    assert_eq!((r.lhs.clone(), r.rhs.clone()), oracle_eq20(&rows, 0, 1));
    assert!(r.passed);
    let r = eq21_residual(&b, 3, 1, &TOL).unwrap();
    assert!(r.passed && r.residual == Rational::zero());
}

#[test]
fn two_by_two_eq20_hand_value() {
    // -b_22 b_12 / (b_11 b_22 - b_12 b_21) = -8 / -2
    let b = ints(&[&[1, 2], &[3, 4]]);
    let r = eq20_sides(&b, 1, 2, &TOL).unwrap();
    assert_eq!(r.lhs, q(4, 1));
    assert_eq!(r.rhs, q(4, 1));
    assert_eq!(oracle_eq20(&to_rows(b.matrix()), 0, 1), (q(4, 1), q(4, 1)));
}

#[test]
fn eq17_two_by_two() {
    let b = ints(&[&[2, 1], &[1, 2]]);
    let r = eq17_residual(&b, 1, &TOL).unwrap();
    // b_12 b_21 / det B = 1/3 on both sides
    assert_eq!((r.lhs, r.rhs), (q(1, 3), q(1, 3)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lemma1_against_laplace(b in general_strategy(2..=5)) {
        let rows = to_rows(b.matrix());
        let n = b.order();
        for m in 1..=n {
            for l in (1..=n).filter(|&l| l != m) {
                let r = lemma1_sides(&b, m, l, &TOL).unwrap();
                let minor = laplace_minor(&rows, l, m);
                let expected = if (m + l + 1) % 2 == 0 { minor } else { -minor };
                prop_assert_eq!(&r.rhs, &expected);
                prop_assert!(r.passed && r.residual == Rational::zero());
            }
        }
    }

    #[test]
    fn lemma2_and_schur_denominators(b in general_strategy(2..=6)) {
        let rows = to_rows(b.matrix());
        let det = laplace_det(&rows);
        for l in 1..=b.order() {
            let r = lemma2_sides(&b, l, &TOL).unwrap();
            prop_assert_eq!(&r.lhs, &det);
            prop_assert_eq!(&r.rhs, &det);
            let s = schur_denominator(&b, l).unwrap();
            prop_assert_eq!(s * laplace_minor(&rows, l, l), det.clone());
        }
    }

    #[test]
    fn quotient_identities_against_oracle(b in general_strategy(2..=4)) {
        let rows = to_rows(b.matrix());
        let n = b.order();
        for m in 1..=n {
            let r = eq13_sides(&b, m, &TOL).unwrap();
            prop_assert_eq!((r.lhs.clone(), r.rhs.clone()), oracle_eq13(&rows, m - 1));
            prop_assert!(r.passed);
            let cleared = eq17_residual(&b, m, &TOL).unwrap();
            prop_assert_eq!(cleared.passed, r.passed);
            prop_assert_eq!(&cleared.lhs, &r.lhs);
            for l in (1..=n).filter(|&l| l != m) {
                let r = eq20_sides(&b, l, m, &TOL).unwrap();
                prop_assert_eq!((r.lhs.clone(), r.rhs.clone()), oracle_eq20(&rows, l - 1, m - 1));
                prop_assert!(r.passed);
                let cleared = eq21_residual(&b, l, m, &TOL).unwrap();
                prop_assert_eq!(cleared.passed, r.passed);
            }
        }
    }

    #[test]
    fn p_notation_coheres_with_b(p in substochastic_candidate(2..=5)) {
        let Ok(p) = validate_substochastic(p) else { return Ok(()) };
        let b = GeneralMatrix::certify(p.i_minus_p()).unwrap();
        let n = p.order();
        for m in 1..=n {
            let direct = thm2_first_expansion(&p, m).unwrap();
            prop_assert_eq!(&direct, &eq13_expansion(&b, m).unwrap());
            let r = thm2_first(&p, m, &TOL).unwrap();
            prop_assert!(r.passed && r.residual == Rational::zero());
            for l in (1..=n).filter(|&l| l != m) {
                let direct = thm2_second_expansion(&p, l, m).unwrap();
                prop_assert_eq!(&direct, &eq20_expansion(&b, l, m).unwrap());
                let r = thm2_second(&p, l, m, &TOL).unwrap();
                prop_assert!(r.passed && r.residual == Rational::zero());
            }
        }
    }
}

#[test]
fn sweep_on_generated_instances() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize % 5);
        let b = gen_general(&GenSpec::new(n, seed)).unwrap();
        let entries = verify_all(Subject::General(&b), &TOL);
        assert_eq!(entries.len(), 3 * n * (n - 1) + 3 * n);
        for e in entries {
            let r = e.unwrap();
            assert!(r.passed && r.residual == Rational::zero(), "{r:?}");
        }
        let p = gen_substochastic(&GenSpec::new(n, seed)).unwrap();
        for e in verify_all(Subject::Substochastic(&p), &TOL) {
            assert!(e.unwrap().passed);
        }
    }
}

#[test]
fn float_agrees_with_exact_on_well_conditioned_instances() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 5);
        let exact = gen_general(&GenSpec::new(n, seed)).unwrap();
        let fb = exact.matrix().map(submat::Scalar::to_f64);
        let well = (1..=n).all(|l| fb.minor(l, l).unwrap().abs() >= 1e-3);
        if !well {
            continue;
        }
        let fb = GeneralMatrix::certify(fb).unwrap();
        for e in verify_all(Subject::General(&fb), &TOL) {
            let r = e.unwrap();
            assert!(r.passed, "seed {seed}: {r:?}");
        }
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn identity_matrix_reports_zero() {
    let id = GeneralMatrix::certify(DenseMatrix::<Rational>::identity(4)).unwrap();
    for e in verify_all(Subject::General(&id), &TOL) {
        let r = e.unwrap();
        assert!(r.passed);
        assert!(r.residual == Rational::zero());
        if r.id == submat::IdentityId::Lemma2 {
            assert_eq!(r.lhs, Rational::one());
        }
    }
}
