//! The run report shared by every subcommand.
//!
//! Every field is always serialized (absent values as `null` or `[]`) so the
//! JSON schema does not depend on the command. Scalars are strings: exact
//! values as `p/q`, float values in shortest round-trip form.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use submat::identities::{IdentityFailure, SweepEntry};
use submat::montecarlo::CrosscheckFlag;
use submat::{IdentityReport, Scalar, WalkStatistics};

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub format: &'static str,
    pub n: usize,
    pub sha256: String,
}

impl InputInfo {
    pub fn new(format: &'static str, n: usize, bytes: &[u8]) -> Self {
        InputInfo {
            format,
            n,
            sha256: sha256_hex(bytes),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceInfo {
    pub rel: f64,
    pub abs_floor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationInfo {
    pub certified: bool,
    /// `row_sum_strict`, `m_matrix`, `general` or `general_strict`.
    pub method: Option<String>,
    pub det_i_minus_pt: Option<String>,
    pub spectral_radius_estimate: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub identity: &'static str,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub residual: Option<String>,
    pub passed: bool,
    pub error: Option<String>,
}

impl IdentityRow {
    pub fn from_report<T: Scalar>(r: &IdentityReport<T>) -> Self {
        IdentityRow {
            identity: r.id.name(),
            m: r.m,
            l: r.l,
            lhs: Some(r.lhs.to_string()),
            rhs: Some(r.rhs.to_string()),
            residual: Some(r.residual.to_string()),
            passed: r.passed,
            error: None,
        }
    }

    pub fn from_failure(f: &IdentityFailure) -> Self {
        IdentityRow {
            identity: f.id.name(),
            m: f.m,
            l: f.l,
            lhs: None,
            rhs: None,
            residual: None,
            passed: false,
            error: Some(f.error.to_string()),
        }
    }

    pub fn from_entry<T: Scalar>(e: &SweepEntry<T>) -> Self {
        match e {
            Ok(r) => Self::from_report(r),
            Err(f) => Self::from_failure(f),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub diagonal: String,
    pub offending: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinorDifference {
    pub m: usize,
    pub l: usize,
    pub value: String,
    pub nonnegative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityRow {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub det_i_minus_pt: Option<String>,
    pub fundamental_nonnegative: bool,
    /// `(I - Pᵀ)⁻¹`, row by row.
    pub matrix: Vec<Vec<String>>,
    pub minor_differences: Vec<MinorDifference>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkRow {
    pub start_state: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean_visits: Vec<f64>,
    pub ci_halfwidth: Vec<f64>,
    pub exact: Vec<f64>,
    pub cap_exceeded: u64,
    pub flagged_states: Vec<usize>,
    pub passed: bool,
}

impl WalkRow {
    pub fn new(stats: &WalkStatistics, exact: Vec<f64>, flags: &[CrosscheckFlag]) -> Self {
        let flagged_states: Vec<usize> = flags
            .iter()
            .filter(|f| f.start == stats.start_state)
            .map(|f| f.state)
            .collect();
        WalkRow {
            start_state: stats.start_state,
            trials: stats.trials,
            seed: stats.seed,
            mean_visits: stats.mean_visits.clone(),
            ci_halfwidth: stats.ci_halfwidth.clone(),
            exact,
            cap_exceeded: stats.cap_exceeded,
            passed: flagged_states.is_empty() && stats.cap_exceeded == 0,
            flagged_states,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FalsifySummary {
    pub identity: String,
    pub n_min: usize,
    pub n_max: usize,
    pub count: usize,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub instance_seed: u64,
    pub identity: String,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub detail: String,
    /// The instance in matrix-file form.
    pub matrix: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: Option<InputInfo>,
    pub backend: &'static str,
    pub tolerance: Option<ToleranceInfo>,
    pub certification: Option<CertificationInfo>,
    pub identity_reports: Vec<IdentityRow>,
    pub maximality_reports: Vec<MaximalityRow>,
    pub walk_statistics: Vec<WalkRow>,
    pub falsify: Option<FalsifySummary>,
    pub counterexamples: Vec<Counterexample>,
    pub output: Option<String>,
    pub overall_pass: bool,
    /// Only filled in with `--timing`, so reports stay reproducible.
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: String, backend: &'static str) -> Self {
        RunReport {
            command,
            input: None,
            backend,
            tolerance: None,
            certification: None,
            identity_reports: Vec::new(),
            maximality_reports: Vec::new(),
            walk_statistics: Vec::new(),
            falsify: None,
            counterexamples: Vec::new(),
            output: None,
            overall_pass: false,
            wall_time_ms: None,
        }
    }

    /// Sets `overall_pass` from the contained reports.
    pub fn settle(&mut self) {
        self.overall_pass = self.certification.as_ref().is_none_or(|c| c.certified)
            && self.identity_reports.iter().all(|r| r.passed)
            && self.maximality_reports.iter().all(|r| r.passed)
            && self.walk_statistics.iter().all(|r| r.passed)
            && self.counterexamples.is_empty();
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("serializable");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(s, "input: {} n={} sha256={}", i.format, i.n, i.sha256);
        }
        let _ = writeln!(s, "backend: {}", self.backend);
        if let Some(t) = &self.tolerance {
            let _ = writeln!(s, "tolerance: rel={} abs_floor={}", t.rel, t.abs_floor);
        }
        if let Some(c) = &self.certification {
            let status = if c.certified {
                "certified"
            } else {
                "NOT certified"
            };
            let _ = write!(s, "certification: {status}");
            if let Some(m) = &c.method {
                let _ = write!(s, " ({m})");
            }
            let _ = writeln!(s);
            if let Some(e) = &c.error {
                let _ = writeln!(s, "  error: {e}");
            }
            if let Some(d) = &c.det_i_minus_pt {
                let _ = writeln!(s, "  det(I - P^T) = {d}");
            }
            if let Some(r) = c.spectral_radius_estimate {
                let _ = writeln!(s, "  spectral radius estimate = {r:.6}");
            }
        }
        for r in &self.maximality_reports {
            let _ = writeln!(s, "thm1: {}", pass_word(r.passed));
            if let Some(e) = &r.error {
                let _ = writeln!(s, "  error: {e}");
            }
            if let Some(d) = &r.det_i_minus_pt {
                let _ = writeln!(s, "  det(I - P^T) = {d}");
            }
            let _ = writeln!(
                s,
                "  (I - P^T)^-1 nonnegative: {}",
                r.fundamental_nonnegative
            );
            let _ = writeln!(s, "  diagonal maximality: {}", r.holds);
            if let Some(w) = &r.witness {
                let _ = writeln!(
                    s,
                    "  witness: c[{}][{}] = {} exceeds diagonal {}",
                    w.row, w.col, w.offending, w.diagonal
                );
            }
            for row in &r.matrix {
                let _ = writeln!(s, "    {}", row.join("  "));
            }
            let negative = r
                .minor_differences
                .iter()
                .filter(|d| !d.nonnegative)
                .count();
            let _ = writeln!(
                s,
                "  minor differences: {} checked, {negative} negative",
                r.minor_differences.len()
            );
        }
        if !self.identity_reports.is_empty() {
            let _ = writeln!(
                s,
                "{:<12} {:>3} {:>3}  {:<6} {:>24} {:>24} {:>24}",
                "identity", "m", "l", "result", "lhs", "rhs", "residual"
            );
            for r in &self.identity_reports {
                let idx = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
                let dash = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
                let _ = write!(
                    s,
                    "{:<12} {:>3} {:>3}  {:<6} {:>24} {:>24} {:>24}",
                    r.identity,
                    idx(r.m),
                    idx(r.l),
                    pass_word(r.passed),
                    dash(&r.lhs),
                    dash(&r.rhs),
                    dash(&r.residual)
                );
                if let Some(e) = &r.error {
                    let _ = write!(s, "  error: {e}");
                }
                let _ = writeln!(s);
            }
        }
        for w in &self.walk_statistics {
            let _ = writeln!(
                s,
                "start {} ({} trials, seed {}, cap exceeded {}): {}",
                w.start_state,
                w.trials,
                w.seed,
                w.cap_exceeded,
                pass_word(w.passed)
            );
            for j in 0..w.mean_visits.len() {
                let flag = if w.flagged_states.contains(&(j + 1)) {
                    "  FLAG"
                } else {
                    ""
                };
                let _ = writeln!(
                    s,
                    "  state {}: estimate {:.6} ± {:.6}, exact {:.6}{flag}",
                    j + 1,
                    w.mean_visits[j],
                    w.ci_halfwidth[j],
                    w.exact[j]
                );
            }
        }
        if let Some(f) = &self.falsify {
            let _ = writeln!(
                s,
                "falsify {}: n {}..{}, {} instances, {} checks, {} skipped, seed {}",
                f.identity, f.n_min, f.n_max, f.instances, f.checks, f.skipped, f.seed
            );
            let _ = writeln!(s, "counterexamples: {}", self.counterexamples.len());
            for c in &self.counterexamples {
                let _ = writeln!(
                    s,
                    "  instance {} (seed {}) {} m={:?} l={:?}: {}",
                    c.instance, c.instance_seed, c.identity, c.m, c.l, c.detail
                );
                let _ = writeln!(s, "    {}", c.matrix);
            }
        }
        if let Some(o) = &self.output {
            let _ = writeln!(s, "wrote {o}");
        }
        if let Some(t) = self.wall_time_ms {
            let _ = writeln!(s, "wall time: {t:.1} ms");
        }
        let _ = writeln!(s, "overall: {}", pass_word(self.overall_pass));
        s
    }
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
