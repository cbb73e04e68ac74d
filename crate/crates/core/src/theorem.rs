//! Verifiers for the three headline results and the supporting lemmas.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;


use crate::corpus::{standard_corpus, Case, CaseKind};
use crate::current::Current;
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::lelong::{lelong_estimate_with, Engine, LelongEstimate, Schedule};
use crate::lemmas::{
    ia_lattice, ib_lattice, ineq1_lattice, ineq2_lattice, interval_kernel_lattice,
    poisson_ratio_lattice, LatticeOutcome,
};
use crate::mass::{
    closed_form_limit_positive, ia, ib, lower_bound_nonperiodic, mass_closed_form, QuadratureConfig,
};

/// The claim a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// The Lelong number is strictly positive.
    PositiveLelong,
    /// The Lelong number is zero.
    ZeroLelong,
    /// The Lelong number is infinite.
    Divergence,
    /// A quantitative lemma holds on its lattice.
    LemmaBound,
}

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The claim held at the declared tolerances.
    Pass,
    /// It did not.
    Fail,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One verification outcome.
///
/// `observed` layouts, by claim:
/// - `PositiveLelong`: `[bracket_lower, limit_estimate, closed_form_limit, lower_bound, violations]`
///   (entries that do not apply are NaN)
/// - `ZeroLelong`: `[nu_first, nu_last, tail_fraction, violations]`
/// - `Divergence`: `[slope, r_squared, growth]`
/// - `LemmaBound`: `[checked, violations, skipped, worst_margin]`
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Case or lemma identifier.
    pub case_id: String,
    /// Eigenvalue (NaN for lemma reports).
    pub lambda: f64,
    /// Claim checked.
    pub claim: Claim,
    /// Measured quantities.
    pub observed: Vec<f64>,
    /// Outcome.
    pub verdict: Verdict,
    /// Tolerances and notes.
    pub details: String,
}

/// Tolerances and schedules for the verifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Quadrature tolerances.
    pub quadrature: QuadratureConfig,
    /// Schedule for zero-Lelong checks.
    pub schedule: Schedule,
    /// Longer schedule for positive-Lelong and divergence checks. Currents
    /// with `λ < 1` converge slowly, and their linear growth only dominates
    /// once every atom has crossed into the innermost region.
    pub long_schedule: Schedule,
    /// Fundamental window index.
    pub k0: i64,
    /// Relative agreement with the closed-form limit (periodic currents).
    pub limit_rel_tol: f64,
    /// Slack on the interval lower bound (Poisson currents).
    pub lower_bound_slack: f64,
    /// Interval scale for the lower bound.
    pub lower_bound_k: i64,
    /// `ν(r_last) < zero_fraction·ν(r_first)` for zero-Lelong currents.
    pub zero_fraction: f64,
    /// Closed-form tail must fall below this fraction of `‖T‖_{D²}`.
    pub tail_fraction: f64,
    /// `R²` threshold of the divergence fit.
    pub divergence_r2: f64,
    /// Growth factor `ν_last/ν_first` of the divergence check.
    pub divergence_growth: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            schedule: Schedule::default(),
            long_schedule: Schedule::halving(40),
            k0: 0,
            limit_rel_tol: 1e-4,
            lower_bound_slack: 0.05,
            lower_bound_k: 2,
            zero_fraction: 0.05,
            tail_fraction: 0.01,
            divergence_r2: crate::lelong::DIVERGENCE_R2,
            divergence_growth: crate::lelong::DIVERGENCE_GROWTH,
        }
    }
}

impl VerifyConfig {
    fn tolerance_text(&self, claim: Claim) -> String {
        match claim {
            Claim::PositiveLelong => format!(
                "limit_rel_tol={:e} lower_bound_slack={}",
                self.limit_rel_tol, self.lower_bound_slack
            ),
            Claim::ZeroLelong => format!(
                "zero_fraction={} tail_fraction={}",
                self.zero_fraction, self.tail_fraction
            ),
            Claim::Divergence => format!(
                "r_squared>{} growth>{}",
                self.divergence_r2, self.divergence_growth
            ),
            Claim::LemmaBound => String::from("violations=0"),
        }
    }
}

/// Recompute a verdict from its observed values and the tolerances.
pub fn verdict_from(claim: Claim, observed: &[f64], cfg: &VerifyConfig) -> Verdict {
    let at = |i: usize| observed.get(i).copied().unwrap_or(f64::NAN);
    Verdict::of(match claim {
        Claim::PositiveLelong => {
            let (lower, est, closed, lb) = (at(0), at(1), at(2), at(3));
            let closed_ok = closed.is_nan() || (est - closed).abs() <= cfg.limit_rel_tol * closed.abs();
            let lb_ok = lb.is_nan() || lower >= lb * (1.0 - cfg.lower_bound_slack);
            lower > 0.0 && closed_ok && lb_ok
        }
        Claim::ZeroLelong => at(1) < cfg.zero_fraction * at(0) && at(2) < cfg.tail_fraction,
        Claim::Divergence => {
            at(0) > 0.0 && at(1) > cfg.divergence_r2 && at(2) > cfg.divergence_growth
        }
        Claim::LemmaBound => at(0) > 0.0 && at(1) == 0.0,
    })
}

fn report(id: &str, lambda: f64, claim: Claim, observed: Vec<f64>, cfg: &VerifyConfig, notes: String) -> VerificationReport {
    VerificationReport {
        case_id: String::from(id),
        lambda,
        claim,
        verdict: verdict_from(claim, &observed, cfg),
        observed,
        details: format!("{}; {}", cfg.tolerance_text(claim), notes),
    }
}

fn violation_count(e: &LelongEstimate) -> f64 {
    e.violations.iter().filter(|&&v| v).count() as f64
}

/// Lelong number is strictly positive for `λ > 0`.
pub fn verify_positive_lambda(current: &Current, cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_positive_lambda_with(&Sequential, "positive", current, cfg).map(|(r, _)| r)
}

/// [`verify_positive_lambda`] with an executor; also returns the estimate.
pub fn verify_positive_lambda_with<E: Executor>(
    exec: &E,
    id: &str,
    current: &Current,
    cfg: &VerifyConfig,
) -> Result<(VerificationReport, LelongEstimate)> {
    let l = current.lambda().value();
    if l <= 0.0 {
        return Err(Error::Unsupported("positive-Lelong check needs lambda > 0".into()));
    }
    if !current.has_bounded_growth() {
        return Err(Error::Unsupported(
            "positive-Lelong check needs b0 = 0 and c_lin = 0".into(),
        ));
    }
    let est = lelong_estimate_with(
        exec,
        current,
        &cfg.long_schedule,
        cfg.k0,
        Engine::Quadrature,
        &cfg.quadrature,
    )?;
    let periodic = current.is_fourier() && current.is_periodic().is_some();
    let (closed, lb, note) = if periodic {
        (closed_form_limit_positive(current)?, f64::NAN, "periodic: closed-form limit")
    } else {
        (
            f64::NAN,
            lower_bound_nonperiodic(current, cfg.lower_bound_k, &cfg.quadrature)?,
            "non-periodic: interval lower bound",
        )
    };
    let observed = alloc::vec![
        est.limit_bracket.0,
        est.limit_estimate,
        closed,
        lb,
        violation_count(&est),
    ];
    let rep = report(id, l, Claim::PositiveLelong, observed, cfg, String::from(note));
    Ok((rep, est))
}

/// Closed-form tail `Σ_adm w(a0·I_a(1) + b0·e^{−1/(λ(1−λ))}·I_b(1))` relative
/// to `‖T‖_{D²}`, halving `r` from `r` until it drops below `fraction` or no
/// atom is admissible. Returns `(tail_fraction, radius)`.
fn negative_tail(current: &Current, r: f64, fraction: f64) -> Result<(f64, f64)> {
    let l = current.lambda().value();
    let total = mass_closed_form(current, 1.0)?;
    let factor = (-1.0 / (l * (1.0 - l))).exp();
    let mut r = r;
    for _ in 0..256 {
        let threshold = r.powf(1.0 - l);
        let mut tail = 0.0;
        for a in current.atoms() {
            let m = a.modulus();
            if m >= threshold {
                continue;
            }
            let crate::harmonic::HarmonicSpec::Fourier(f) = &a.harmonic else {
                return Err(Error::Unsupported("tail check needs Fourier strip specs".into()));
            };
            let mut t = f.a0 * ia(l, m, 1.0)?;
            if f.b0 != 0.0 {
                t += f.b0 * factor * ib(l, m, 1.0)?;
            }
            tail += a.weight * t;
        }
        let frac = TAU * tail / total;
        if frac < fraction {
            return Ok((frac, r));
        }
        r *= 0.5;
    }
    Ok((f64::INFINITY, r))
}

/// Lelong number is zero for periodic currents with `λ < 0`.
pub fn verify_negative_periodic(current: &Current, cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_negative_periodic_with(&Sequential, "negative", current, cfg).map(|(r, _)| r)
}

/// [`verify_negative_periodic`] with an executor; also returns the estimate.
pub fn verify_negative_periodic_with<E: Executor>(
    exec: &E,
    id: &str,
    current: &Current,
    cfg: &VerifyConfig,
) -> Result<(VerificationReport, LelongEstimate)> {
    let l = current.lambda().value();
    if l >= 0.0 {
        return Err(Error::Unsupported("zero-Lelong check needs lambda < 0".into()));
    }
    if current.is_periodic().is_none() {
        return Err(Error::Unsupported("zero-Lelong check needs a periodic current".into()));
    }
    let est = lelong_estimate_with(exec, current, &cfg.schedule, cfg.k0, Engine::Quadrature, &cfg.quadrature)?;
    let last_r = est.rs[est.rs.len() - 1];
    let (frac, r_tail) = negative_tail(current, last_r, cfg.tail_fraction)?;
    let observed = alloc::vec![est.nus[0], est.limit_estimate, frac, violation_count(&est)];
    let note = format!("closed-form tail settled at r={r_tail:e}");
    Ok((report(id, l, Claim::ZeroLelong, observed, cfg, note), est))
}

/// Lelong number is infinite when some atom grows linearly in `v`.
pub fn verify_b0_divergence(current: &Current, cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_b0_divergence_with(&Sequential, "divergence", current, cfg).map(|(r, _)| r)
}

/// [`verify_b0_divergence`] with an executor; also returns the estimate.
pub fn verify_b0_divergence_with<E: Executor>(
    exec: &E,
    id: &str,
    current: &Current,
    cfg: &VerifyConfig,
) -> Result<(VerificationReport, LelongEstimate)> {
    let l = current.lambda().value();
    if l <= 0.0 {
        return Err(Error::Unsupported("divergence check needs lambda > 0".into()));
    }
    if current.has_bounded_growth() {
        return Err(Error::Unsupported(
            "divergence check needs some b0 > 0 or c_lin > 0".into(),
        ));
    }
    let est = lelong_estimate_with(exec, current, &cfg.long_schedule, cfg.k0, Engine::Quadrature, &cfg.quadrature)?;
    let observed = alloc::vec![est.fit.slope, est.fit.r_squared, est.growth()];
    let note = format!("fit intercept {:.6}", est.fit.intercept);
    Ok((report(id, l, Claim::Divergence, observed, cfg, note), est))
}

fn lemma_report(id: &str, o: LatticeOutcome, cfg: &VerifyConfig) -> VerificationReport {
    let observed = alloc::vec![
        o.checked as f64,
        o.violations as f64,
        o.skipped as f64,
        o.worst_margin
    ];
    let note = format!("{} checked, {} skipped", o.checked, o.skipped);
    report(id, f64::NAN, Claim::LemmaBound, observed, cfg, note)
}

/// One report per lemma lattice.
pub fn verify_lemma_bounds(cfg: &VerifyConfig) -> Vec<VerificationReport> {
    alloc::vec![
        lemma_report("lemma-poisson-ratios", poisson_ratio_lattice(), cfg),
        lemma_report("lemma-ia-bound", ia_lattice(), cfg),
        lemma_report("lemma-ib-bound", ib_lattice(), cfg),
        lemma_report("lemma-interval-kernel", interval_kernel_lattice(), cfg),
        lemma_report("lemma-ineq1", ineq1_lattice(), cfg),
        lemma_report("lemma-ineq2", ineq2_lattice(), cfg),
    ]
}

/// A verifier's report together with the schedule it ran, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRun {
    /// The report.
    pub report: VerificationReport,
    /// The Lelong schedule behind it.
    pub estimate: LelongEstimate,
}

/// Run the verifier matching a case's kind.
pub fn run_case<E: Executor>(exec: &E, case: &Case, cfg: &VerifyConfig) -> Result<CaseRun> {
    let (report, estimate) = match case.kind {
        CaseKind::Positive => verify_positive_lambda_with(exec, &case.id, &case.current, cfg)?,
        CaseKind::Negative => verify_negative_periodic_with(exec, &case.id, &case.current, cfg)?,
        CaseKind::Divergent => verify_b0_divergence_with(exec, &case.id, &case.current, cfg)?,
    };
    Ok(CaseRun { report, estimate })
}

/// Generate the corpus from `seed` and run every applicable verifier,
/// followed by the lemma lattices. Order follows corpus enumeration.
pub fn run_corpus(seed: u64, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    run_corpus_with(&Sequential, seed, cfg)
}

/// [`run_corpus`] with an executor.
pub fn run_corpus_with<E: Executor>(exec: &E, seed: u64, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for case in standard_corpus(seed)? {
        out.push(run_case(exec, &case, cfg)?.report);
    }
    out.extend(verify_lemma_bounds(cfg));
    Ok(out)
}
