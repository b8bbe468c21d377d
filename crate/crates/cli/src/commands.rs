//! Subcommand implementations. Each returns the report and the exit code.

use std::path::Path;

use submat::identities::{verify_selected, Subject};
use submat::rng::derive_seed;
use submat::substochastic::{spectral_radius_estimate, validate_substochastic};
use submat::{
    crosscheck_fundamental, gen_general, gen_substochastic, Certification, DenseMatrix, GenSpec,
    GeneralMatrix, IdentityId, Rational, Scalar, SplitMix64, SubstochasticMatrix, Tolerance,
};

use crate::error::{exit, CliError};
use crate::format::{self, matrix_value, MatrixFile};
use crate::report::{
    CertificationInfo, Counterexample, FalsifySummary, IdentityRow, InputInfo, MaximalityRow,
    MinorDifference, RunReport, ToleranceInfo, WalkRow, Witness,
};
use crate::{
    Backend, CheckArgs, Cli, Command, FalsifyArgs, GenArgs, IdentityChoice, InputArgs, Kind, Mode,
    SimulateArgs, SpecArgs, VerifyArgs,
};

/// Power-iteration steps for the spectral-radius diagnostic.
const POWER_ITERATIONS: usize = 2000;

pub fn dispatch(cli: &Cli, echo: String) -> Result<(RunReport, i32), CliError> {
    match &cli.command {
        Command::Check(a) => check(a, echo),
        Command::Verify(a) => verify(a, echo),
        Command::Falsify(a) => falsify(a, echo),
        Command::Simulate(a) => simulate(a, echo),
        Command::Gen(a) => gen(a, echo),
    }
}

fn load(input: &InputArgs) -> Result<(MatrixFile, InputInfo), CliError> {
    let (file, bytes) = format::load(&input.path, input.format)?;
    let info = InputInfo::new(file.format.name(), file.n(), &bytes);
    Ok((file, info))
}

fn exit_for(report: &RunReport) -> i32 {
    if report.overall_pass {
        exit::PASS
    } else {
        exit::FAIL
    }
}

fn certification_method(c: Certification) -> String {
    match c {
        Certification::RowSumStrict => "row_sum_strict",
        Certification::MMatrixCertified => "m_matrix",
    }
    .to_string()
}

fn strings<T: Scalar>(m: &DenseMatrix<T>) -> Vec<Vec<String>> {
    m.row_iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn check(a: &CheckArgs, echo: String) -> Result<(RunReport, i32), CliError> {
    let (file, info) = load(&a.input)?;
    let mut report = RunReport::new(echo, "exact");
    report.input = Some(info);
    let estimate = if file
        .entries
        .as_slice()
        .iter()
        .all(|x| x.sign() != submat::Sign::Negative)
    {
        spectral_radius_estimate(&file.entries, POWER_ITERATIONS, a.seed).ok()
    } else {
        None
    };
    report.certification = Some(match validate_substochastic(file.entries) {
        Ok(p) => CertificationInfo {
            certified: true,
            method: Some(certification_method(p.certification())),
            det_i_minus_pt: p.det_i_minus_pt().ok().map(|d| d.to_string()),
            spectral_radius_estimate: estimate,
            error: None,
        },
        Err(e) => CertificationInfo {
            certified: false,
            method: None,
            det_i_minus_pt: None,
            spectral_radius_estimate: estimate,
            error: Some(format!("{e:?}: {e}")),
        },
    });
    report.settle();
    let code = exit_for(&report);
    Ok((report, code))
}

/// The identities a choice selects, with whether `thm1` is included.
fn selection(choice: IdentityChoice) -> (bool, Vec<IdentityId>) {
    use IdentityId::*;
    match choice {
        IdentityChoice::Thm1 => (true, vec![]),
        IdentityChoice::Thm2 => (false, vec![Thm2First, Thm2Second]),
        IdentityChoice::Eq13 => (false, vec![Eq13]),
        IdentityChoice::Eq17 => (false, vec![Eq17]),
        IdentityChoice::Eq20 => (false, vec![Eq20]),
        IdentityChoice::Eq21 => (false, vec![Eq21]),
        IdentityChoice::Lemma1 => (false, vec![Lemma1]),
        IdentityChoice::Lemma2 => (false, vec![Lemma2]),
        IdentityChoice::All => (true, IdentityId::ALL.to_vec()),
    }
}

fn index_filter(keep: Option<usize>, index: Option<usize>) -> bool {
    match (keep, index) {
        (Some(k), Some(i)) => k == i,
        _ => true,
    }
}

/// `thm1` evaluation: positivity, diagonal maximality and the minor
/// differences over the selected `(m, l)`.
fn thm1_row<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    fm: Option<usize>,
    fl: Option<usize>,
) -> MaximalityRow {
    let mut errors = Vec::new();
    let det = match p.det_i_minus_pt() {
        Ok(d) => Some(d.to_string()),
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    };
    let (holds, witness, matrix, nonneg) = match p.check_diagonal_maximality() {
        Ok(r) => {
            let witness = r.witness.map(|w| Witness {
                row: w.row,
                col: w.col,
                diagonal: w.diagonal.to_string(),
                offending: w.offending.to_string(),
            });
            (r.holds, witness, strings(&r.matrix), true)
        }
        Err(e) => {
            errors.push(e.to_string());
            (false, None, Vec::new(), false)
        }
    };
    let n = p.order();
    let mut diffs = Vec::new();
    for m in (1..=n).filter(|&m| index_filter(fm, Some(m))) {
        for l in (1..=n).filter(|&l| l != m && index_filter(fl, Some(l))) {
            let (value, nonnegative) = match p.minor_sum_nonneg(m, l) {
                Ok(v) => (v.to_string(), true),
                Err(e) => (e.to_string(), false),
            };
            diffs.push(MinorDifference {
                m,
                l,
                value,
                nonnegative,
            });
        }
    }
    let passed = errors.is_empty() && holds && diffs.iter().all(|d| d.nonnegative);
    MaximalityRow {
        holds,
        witness,
        det_i_minus_pt: det,
        fundamental_nonnegative: nonneg,
        matrix,
        minor_differences: diffs,
        passed,
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

fn verify(a: &VerifyArgs, echo: String) -> Result<(RunReport, i32), CliError> {
    let (file, info) = load(&a.input)?;
    let n = file.n();
    for idx in [a.m, a.l].into_iter().flatten() {
        if !(1..=n).contains(&idx) {
            return Err(CliError::Usage(format!("index {idx} outside 1..={n}")));
        }
    }
    let mut report = RunReport::new(echo, a.backend.name());
    report.input = Some(info);
    let tol = Tolerance::relative(a.tol);
    report.tolerance = Some(ToleranceInfo {
        rel: tol.rel,
        abs_floor: tol.abs_floor,
    });
    match a.backend {
        Backend::Exact => verify_with(&mut report, file.entries, a, &tol)?,
        Backend::Float => verify_with(&mut report, file.entries.map(Scalar::to_f64), a, &tol)?,
    }
    report.settle();
    let code = exit_for(&report);
    Ok((report, code))
}

fn certify_general<T: Scalar>(
    b: DenseMatrix<T>,
    strict: bool,
) -> Result<GeneralMatrix<T>, CliError> {
    let g = if strict {
        GeneralMatrix::certify_strict(b)
    } else {
        GeneralMatrix::certify(b)
    };
    g.map_err(CliError::Certification)
}

fn verify_with<T: Scalar>(
    report: &mut RunReport,
    b: DenseMatrix<T>,
    a: &VerifyArgs,
    tol: &Tolerance,
) -> Result<(), CliError> {
    let (thm1, ids) = selection(a.identity);
    let needs_sub = thm1 || ids.iter().any(|i| i.needs_substochastic());
    let explicit_sub = matches!(a.identity, IdentityChoice::Thm1 | IdentityChoice::Thm2);
    if a.mode == Mode::General && explicit_sub {
        return Err(CliError::Usage(
            "thm1 and thm2 apply to substochastic input; drop --mode general".into(),
        ));
    }
    let substochastic = match a.mode {
        Mode::General => None,
        Mode::Substochastic => {
            Some(validate_substochastic(b.clone()).map_err(CliError::Certification)?)
        }
        Mode::Auto if needs_sub => match validate_substochastic(b.clone()) {
            Ok(p) => Some(p),
            Err(e) if explicit_sub => return Err(CliError::Certification(e)),
            Err(_) => None,
        },
        Mode::Auto => None,
    };
    let entries = match &substochastic {
        Some(p) => {
            report.certification = Some(CertificationInfo {
                certified: true,
                method: Some(certification_method(p.certification())),
                det_i_minus_pt: None,
                spectral_radius_estimate: None,
                error: None,
            });
            if thm1 {
                report.maximality_reports.push(thm1_row(p, a.m, a.l));
            }
            verify_selected(Subject::Substochastic(p), &ids, tol)
        }
        None => {
            let g = certify_general(b, a.strict)?;
            report.certification = Some(CertificationInfo {
                certified: true,
                method: Some(
                    if a.strict {
                        "general_strict"
                    } else {
                        "general"
                    }
                    .to_string(),
                ),
                det_i_minus_pt: None,
                spectral_radius_estimate: None,
                error: None,
            });
            verify_selected(Subject::General(&g), &ids, tol)
        }
    };
    report.identity_reports = entries
        .iter()
        .map(IdentityRow::from_entry)
        .filter(|r| index_filter(a.m, r.m) && index_filter(a.l, r.l))
        .collect();
    Ok(())
}

fn gen_spec(n: usize, seed: u64, s: &SpecArgs) -> GenSpec {
    GenSpec::new(n, seed)
        .with_density(s.density.clone())
        .with_max_row_sum(s.max_row_sum.clone())
        .with_denominator_bound(s.denominator_bound)
}

fn falsify(a: &FalsifyArgs, echo: String) -> Result<(RunReport, i32), CliError> {
    let (lo, hi) = a.n;
    if lo < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    gen_spec(lo, a.seed, &a.spec)
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let tol = Tolerance::relative(a.tol);
    let mut report = RunReport::new(echo, a.backend.name());
    report.tolerance = Some(ToleranceInfo {
        rel: tol.rel,
        abs_floor: tol.abs_floor,
    });
    let (thm1, ids) = selection(a.identity);
    let sub_ids: Vec<IdentityId> = ids
        .iter()
        .copied()
        .filter(|i| i.needs_substochastic())
        .collect();
    let general_ids: Vec<IdentityId> = ids
        .iter()
        .copied()
        .filter(|i| !i.needs_substochastic())
        .collect();
    let mut summary = FalsifySummary {
        identity: format!("{:?}", a.identity).to_lowercase(),
        n_min: lo,
        n_max: hi,
        count: a.count,
        seed: a.seed,
        instances: 0,
        checks: 0,
        skipped: 0,
    };
    for i in 0..a.count {
        let instance_seed = derive_seed(a.seed, i as u64);
        let n = SplitMix64::new(instance_seed).range_inclusive(lo as u64, hi as u64) as usize;
        let spec = gen_spec(n, instance_seed, &a.spec);
        let mut found = Vec::new();
        if thm1 || !sub_ids.is_empty() {
            let p = gen_substochastic(&spec)?;
            summary.instances += 1;
            let hits = match a.backend {
                Backend::Exact => {
                    search_substochastic(&p, thm1, &sub_ids, &tol, &mut summary.checks)
                }
                Backend::Float => search_substochastic(
                    &p.convert::<f64>(),
                    thm1,
                    &sub_ids,
                    &tol,
                    &mut summary.checks,
                ),
            };
            for (id, m, l, detail) in hits {
                found.push((id, m, l, detail, p.matrix().clone()));
            }
        }
        if !general_ids.is_empty() {
            let g = gen_general(&spec)?;
            summary.instances += 1;
            let result = match a.backend {
                Backend::Exact => Some(search_general(&g, &general_ids, &tol, &mut summary.checks)),
                Backend::Float => match GeneralMatrix::certify(g.matrix().map(Scalar::to_f64)) {
                    Ok(gf) => Some(search_general(&gf, &general_ids, &tol, &mut summary.checks)),
                    Err(_) => None,
                },
            };
            match result {
                Some(hits) => found.extend(
                    hits.into_iter()
                        .map(|(id, m, l, d)| (id, m, l, d, g.matrix().clone())),
                ),
                None => summary.skipped += 1,
            }
        }
        for (identity, m, l, detail, matrix) in found {
            report.counterexamples.push(Counterexample {
                instance: i,
                instance_seed,
                identity,
                m,
                l,
                detail,
                matrix: matrix_value(&matrix),
            });
        }
    }
    report.falsify = Some(summary);
    report.settle();
    let code = exit_for(&report);
    Ok((report, code))
}

type Hit = (String, Option<usize>, Option<usize>, String);

fn search_substochastic<T: Scalar>(
    p: &SubstochasticMatrix<T>,
    thm1: bool,
    ids: &[IdentityId],
    tol: &Tolerance,
    checks: &mut usize,
) -> Vec<Hit> {
    let mut hits = Vec::new();
    if thm1 {
        let row = thm1_row(p, None, None);
        *checks += 1 + row.minor_differences.len();
        if !row.passed {
            let detail = row.error.clone().unwrap_or_else(|| match &row.witness {
                Some(w) => format!(
                    "c[{}][{}] = {} exceeds diagonal {}",
                    w.row, w.col, w.offending, w.diagonal
                ),
                None => "negative minor difference".into(),
            });
            hits.push(("thm1".to_string(), None, None, detail));
        }
    }
    if !ids.is_empty() {
        hits.extend(sweep_hits(
            verify_selected(Subject::Substochastic(p), ids, tol),
            checks,
        ));
    }
    hits
}

fn search_general<T: Scalar>(
    g: &GeneralMatrix<T>,
    ids: &[IdentityId],
    tol: &Tolerance,
    checks: &mut usize,
) -> Vec<Hit> {
    sweep_hits(verify_selected(Subject::General(g), ids, tol), checks)
}

fn sweep_hits<T: Scalar>(
    entries: Vec<submat::identities::SweepEntry<T>>,
    checks: &mut usize,
) -> Vec<Hit> {
    *checks += entries.len();
    entries
        .iter()
        .map(IdentityRow::from_entry)
        .filter(|r| !r.passed)
        .map(|r| {
            let detail = r.error.clone().unwrap_or_else(|| {
                format!(
                    "lhs {} rhs {} residual {}",
                    r.lhs.as_deref().unwrap_or("-"),
                    r.rhs.as_deref().unwrap_or("-"),
                    r.residual.as_deref().unwrap_or("-")
                )
            });
            (r.identity.to_string(), r.m, r.l, detail)
        })
        .collect()
}

fn simulate(a: &SimulateArgs, echo: String) -> Result<(RunReport, i32), CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    if a.sigma.is_nan() || a.sigma <= 0.0 {
        return Err(CliError::Usage("--sigma must be positive".into()));
    }
    let (file, info) = load(&a.input)?;
    let p = validate_substochastic(file.entries).map_err(CliError::Certification)?;
    let mut report = RunReport::new(echo, a.backend.name());
    report.input = Some(info);
    report.certification = Some(CertificationInfo {
        certified: true,
        method: Some(certification_method(p.certification())),
        det_i_minus_pt: None,
        spectral_radius_estimate: None,
        error: None,
    });
    let cross = match a.backend {
        Backend::Exact => crosscheck_fundamental(&p, a.trials, a.seed, a.sigma)?,
        Backend::Float => crosscheck_fundamental(&p.convert::<f64>(), a.trials, a.seed, a.sigma)?,
    };
    report.walk_statistics = cross
        .rows
        .iter()
        .map(|stats| {
            let exact = cross
                .exact
                .row_iter()
                .nth(stats.start_state - 1)
                .unwrap_or(&[])
                .to_vec();
            WalkRow::new(stats, exact, &cross.flags)
        })
        .collect();
    report.settle();
    let code = exit_for(&report);
    Ok((report, code))
}

fn gen(a: &GenArgs, echo: String) -> Result<(RunReport, i32), CliError> {
    let spec = gen_spec(a.n, a.seed, &a.spec);
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let matrix: DenseMatrix<Rational> = match a.kind {
        Kind::Substochastic => gen_substochastic(&spec)?.into_matrix(),
        Kind::General => gen_general(&spec)?.into_matrix(),
    };
    let text = format::to_json_exact(&matrix);
    let mut report = RunReport::new(echo, "exact");
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            report.output = Some(path.display().to_string());
        }
        None => report.output = Some(text),
    }
    report.settle();
    Ok((report, exit::PASS))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
