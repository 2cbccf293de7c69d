//! Seeded numerical checks of the identities, Turán-type inequalities and
//! bound statements.
//!
//! Nonnegativity is judged relative to the sum of absolute term magnitudes
//! at each sample point. A sample that falls below tolerance is recomputed in
//! double-double arithmetic from the recurrence upward before it is reported,
//! so that rounding near zeros of `p_k` is not mistaken for a violation.

use crate::bounds::conditions::Hypotheses;
use crate::bounds::{self, ConditionId, Coverage, FailedHypothesis, Side, Verdict};
use crate::error::{Error, Result};
use crate::evalkernel::{
    self, delta_turan_expr, eval_window, ldexp, turan_m_expr, turan_s_expr, Dd, Scalar,
    ScaledWindow, Tracked, TuranValue,
};
use crate::families::{RecurrenceForm, RecurrenceSpec, Sequence};
use crate::zerofinder::{self, Enclosure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::ops::RangeInclusive;

/// Identities must hold to this relative residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Nonnegative quantities may dip to `-NONNEG_TOLERANCE` times their scale.
pub const NONNEG_TOLERANCE: f64 = 1e-12;
/// Orders `m` checked for the higher-order Turán expressions.
pub const PATRICK_ORDERS: RangeInclusive<usize> = 1..=3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subject {
    TurNonneg,
    FirstoIdentity,
    Eqtur2Identity,
    DeltaPIdentity,
    Turan2Nonneg,
    VxNonneg,
    PatrNonneg,
    MarikNonneg,
    BoundContainment,
    Perturbation,
    SzwarcTur11,
    SzwarcTur12,
}

impl Subject {
    pub const ALL: [Subject; 12] = [
        Subject::TurNonneg,
        Subject::FirstoIdentity,
        Subject::Eqtur2Identity,
        Subject::DeltaPIdentity,
        Subject::Turan2Nonneg,
        Subject::VxNonneg,
        Subject::PatrNonneg,
        Subject::MarikNonneg,
        Subject::BoundContainment,
        Subject::Perturbation,
        Subject::SzwarcTur11,
        Subject::SzwarcTur12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subject::TurNonneg => "tur-nonneg",
            Subject::FirstoIdentity => "firsto-identity",
            Subject::Eqtur2Identity => "eqtur2-identity",
            Subject::DeltaPIdentity => "deltaP-identity",
            Subject::Turan2Nonneg => "turan2-nonneg",
            Subject::VxNonneg => "vx-nonneg",
            Subject::PatrNonneg => "patr-nonneg",
            Subject::MarikNonneg => "marik-nonneg",
            Subject::BoundContainment => "bound-containment",
            Subject::Perturbation => "perturbation",
            Subject::SzwarcTur11 => "szwarc-tur11",
            Subject::SzwarcTur12 => "szwarc-tur12",
        }
    }

    pub fn parse(s: &str) -> Option<Subject> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }

    pub fn is_identity(self) -> bool {
        matches!(
            self,
            Subject::FirstoIdentity | Subject::Eqtur2Identity | Subject::DeltaPIdentity
        )
    }

    pub fn is_nonneg(self) -> bool {
        matches!(
            self,
            Subject::TurNonneg
                | Subject::Turan2Nonneg
                | Subject::VxNonneg
                | Subject::PatrNonneg
                | Subject::MarikNonneg
                | Subject::SzwarcTur11
                | Subject::SzwarcTur12
        )
    }

    /// Largest coefficient index needed at degree `k` (for truncated tables).
    fn reach(self, k: usize) -> usize {
        match self {
            Subject::TurNonneg | Subject::SzwarcTur11 | Subject::SzwarcTur12 => k,
            Subject::FirstoIdentity | Subject::Turan2Nonneg | Subject::VxNonneg | Subject::MarikNonneg => k + 1,
            Subject::Eqtur2Identity | Subject::DeltaPIdentity => k + 2,
            Subject::PatrNonneg => k + PATRICK_ORDERS.end() - 1,
            Subject::BoundContainment => k.saturating_sub(1),
            Subject::Perturbation => k + 1,
        }
    }

    fn min_degree(self) -> usize {
        match self {
            Subject::Turan2Nonneg => 2,
            Subject::Eqtur2Identity | Subject::DeltaPIdentity | Subject::VxNonneg | Subject::MarikNonneg => 1,
            _ => 0,
        }
    }

    fn required_form(self) -> Option<RecurrenceForm> {
        match self {
            Subject::SzwarcTur11 => Some(RecurrenceForm::UnitIntervalSymmetric),
            Subject::SzwarcTur12 => Some(RecurrenceForm::HalfLine),
            Subject::PatrNonneg | Subject::MarikNonneg | Subject::BoundContainment => None,
            _ => Some(RecurrenceForm::SymmetricMonic),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a report carries pass/fail semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Hypotheses hold for every degree checked.
    Checked,
    /// Some hypotheses fail; only samples at degrees where they hold can
    /// produce violations.
    Observational,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Checked => "checked",
            Mode::Observational => "observational",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub k: usize,
    pub x: f64,
    /// Relative value, residual or margin, depending on the subject.
    pub value: f64,
    /// Whether the hypotheses held at this degree.
    pub hypotheses_hold: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub subject: Subject,
    pub family: String,
    pub mode: Mode,
    pub sample_count: usize,
    pub max_relative_residual: f64,
    /// Smallest relative value (nonnegativity) or relative margin
    /// (containment, perturbation).
    pub min_value: Option<f64>,
    pub first_counterexample: Option<Counterexample>,
    /// Counterexamples at degrees whose hypotheses hold.
    pub violations: usize,
    /// Samples not evaluated because a precondition failed.
    pub skipped: usize,
    /// Candidates below tolerance in `f64` that the double-double pass cleared.
    pub cleared_by_recheck: usize,
    /// First degree at which the hypotheses fail, with the reason.
    pub failed_hypothesis: Option<(usize, FailedHypothesis)>,
    pub warnings: Vec<String>,
}

impl VerificationReport {
    fn new(subject: Subject, spec: &RecurrenceSpec) -> Self {
        VerificationReport {
            subject,
            family: spec.label().to_string(),
            mode: Mode::Checked,
            sample_count: 0,
            max_relative_residual: 0.0,
            min_value: None,
            first_counterexample: None,
            violations: 0,
            skipped: 0,
            cleared_by_recheck: 0,
            failed_hypothesis: None,
            warnings: Vec::new(),
        }
    }

    /// No violation under hypotheses, and identities within tolerance.
    pub fn passed(&self) -> bool {
        self.violations == 0
            && (!self.subject.is_identity() || self.max_relative_residual < IDENTITY_TOLERANCE)
    }

    fn record_min(&mut self, v: f64) {
        self.min_value = Some(self.min_value.map_or(v, |m| m.min(v)));
    }

    fn record_counterexample(&mut self, c: Counterexample) {
        if c.hypotheses_hold {
            self.violations += 1;
        }
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(c);
        }
    }

    fn note_hypotheses(&mut self, k: usize, h: &Hypotheses) -> bool {
        if h.verdict == Verdict::Fails {
            self.mode = Mode::Observational;
            if self.failed_hypothesis.is_none() {
                let failed = h.failed.clone().unwrap_or(FailedHypothesis {
                    condition: "unknown".into(),
                    index: None,
                    detail: String::new(),
                });
                self.warnings
                    .push(format!("hypotheses fail from k = {k} ({}): observational only", failed.condition));
                self.failed_hypothesis = Some((k, failed));
            }
            false
        } else {
            true
        }
    }

    fn finish(mut self) -> Self {
        if self.skipped > 0 {
            self.warnings.push(format!("{} samples skipped on failed preconditions", self.skipped));
        }
        self
    }
}

fn check_form(spec: &RecurrenceSpec, subject: Subject) -> Result<()> {
    if let Some(expected) = subject.required_form() {
        if spec.form() != expected {
            return Err(Error::FormMismatch {
                what: subject.as_str(),
                expected,
                found: spec.form(),
            });
        }
    }
    Ok(())
}

/// Restricts `k_range` to degrees the subject can evaluate on this spec.
fn effective_range(
    spec: &RecurrenceSpec,
    subject: Subject,
    k_range: &RangeInclusive<usize>,
    report: &mut VerificationReport,
) -> Option<RangeInclusive<usize>> {
    let lo = (*k_range.start()).max(subject.min_degree());
    let mut hi = *k_range.end();
    if let Some(cap) = spec.max_index() {
        match (lo..=hi).rev().find(|&k| subject.reach(k) <= cap) {
            Some(h) if h < hi => {
                report.warnings.push(format!(
                    "coefficients known up to index {cap}; degrees above {h} not evaluated"
                ));
                hi = h;
            }
            Some(_) => {}
            None => {
                report.warnings.push("no degree in range can be evaluated".into());
                return None;
            }
        }
    }
    (lo <= hi).then_some(lo..=hi)
}

/// `|res| / (scale of p_0² + term magnitude)` for a quadratic expression on a
/// window with the given exponent.
fn relative_residual(r: Tracked, exponent: i64) -> f64 {
    r.value.abs() / (ldexp(1.0, -2 * exponent) + r.magnitude)
}

/// `μ_k` of the ΔP identity, or `None` when its radicands are negative.
pub fn delta_p_mu(spec: &RecurrenceSpec, k: usize) -> Result<Option<f64>> {
    let (c0, c1, c2) = (spec.c(k)?, spec.c(k + 1)?, spec.c(k + 2)?);
    let (a, b) = (c1 - c0, 2.0 * c2 - 3.0 * c1 + c0);
    if a < 0.0 || b < 0.0 {
        return Ok(None);
    }
    let s = a.sqrt() - b.sqrt();
    Ok(Some(2.0 * a + 0.5 * s * s))
}

/// `LHS - RHS` of an identity at degree `k`, on a window covering
/// `k-2..=k+3` (or `k-1..=k+2` for the first-order identity).
pub fn identity_residual<S: Scalar>(
    subject: Subject,
    spec: &RecurrenceSpec,
    w: &ScaledWindow<S>,
    k: usize,
    x: f64,
    mu: f64,
) -> Result<S> {
    let c = |j: usize| -> Result<S> { Ok(S::from_f64(spec.c(j)?)) };
    let n = |v: f64| S::from_f64(v);
    let ki = k as isize;
    let pk = w.p(ki);
    match subject {
        Subject::FirstoIdentity => {
            let tk = turan_m_expr(w.slice(ki - 1, 3), 1);
            let tk1 = turan_m_expr(w.slice(ki, 3), 1);
            let (ck, ck1) = (c(k)?, c(k + 1)?);
            Ok(tk1 - ck * tk - (ck1 - ck) * pk * pk)
        }
        Subject::Eqtur2Identity => {
            let t2k = turan_m_expr(w.slice(ki - 2, 5), 2);
            let t2k1 = turan_m_expr(w.slice(ki - 1, 5), 2);
            let tk = turan_m_expr(w.slice(ki - 1, 3), 1);
            let (cm, c0, c1, c2) = (c(k - 1)?, c(k)?, c(k + 1)?, c(k + 2)?);
            let coef_t = c2 + n(3.0) * c0 - n(4.0) * cm;
            let coef_p = cm - n(3.0) * c0 + n(3.0) * c1 - c2;
            Ok(t2k1 - cm * t2k - coef_t * tk - coef_p * pk * pk)
        }
        Subject::DeltaPIdentity => {
            let dk = delta_turan_expr(w, spec, k)?;
            let dk1 = delta_turan_expr(w, spec, k + 1)?;
            let tk = turan_m_expr(w.slice(ki - 1, 3), 1);
            let (c0, c1, c2) = (c(k)?, c(k + 1)?, c(k + 2)?);
            let (mu, xs) = (n(mu), n(x));
            let pm = w.p(ki - 1);
            let g = n(2.0) * c0 * c0 * (n(2.0) * c2 - n(2.0) * c0 - mu) * pm * pm
                - n(2.0) * xs * c0 * (n(3.0) * c2 - n(2.0) * c1 - c0 - mu) * pm * pk
                + (xs * xs * (n(2.0) * c2 - n(3.0) * c1 + c0) + n(4.0) * c1 * (c1 - c0) - n(2.0) * c0 * mu)
                    * pk
                    * pk;
            Ok(dk1 - c0 * dk - n(2.0) * c0 * mu * tk - g)
        }
        _ => Err(Error::InvalidParameter(format!("{subject} is not an identity"))),
    }
}

fn identity_window<S: Scalar>(subject: Subject, spec: &RecurrenceSpec, k: usize, x: f64) -> Result<ScaledWindow<S>> {
    match subject {
        Subject::FirstoIdentity => eval_window(spec, x, k as isize - 1, k + 2),
        _ => eval_window(spec, x, k as isize - 2, k + 3),
    }
}

/// Checks an identity at `sample_count` seeded points per degree, drawn
/// uniformly from `[-2√c_k - 1, 2√c_k + 1]`.
pub fn verify_identity(
    spec: &RecurrenceSpec,
    subject: Subject,
    k_range: RangeInclusive<usize>,
    sample_count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if !subject.is_identity() {
        return Err(Error::InvalidParameter(format!("{subject} is not an identity")));
    }
    check_form(spec, subject)?;
    let mut report = VerificationReport::new(subject, spec);
    let range = effective_range(spec, subject, &k_range, &mut report);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in range.into_iter().flatten() {
        let radius = 2.0 * spec.c(k)?.sqrt() + 1.0;
        let mu = if subject == Subject::DeltaPIdentity {
            match delta_p_mu(spec, k)? {
                Some(mu) => mu,
                None => {
                    report.skipped += sample_count;
                    continue;
                }
            }
        } else {
            0.0
        };
        for _ in 0..sample_count {
            let x = rng.gen_range(-radius..=radius);
            let w = identity_window::<Tracked>(subject, spec, k, x)?;
            let r = identity_residual(subject, spec, &w, k, x, mu)?;
            let rel = relative_residual(r, w.exponent);
            report.sample_count += 1;
            report.max_relative_residual = report.max_relative_residual.max(rel);
            if !(rel < IDENTITY_TOLERANCE) {
                let wd = identity_window::<Dd>(subject, spec, k, x)?;
                let rd = identity_residual(subject, spec, &wd, k, x, mu)?;
                let rel_dd = rd.to_f64().abs() / (ldexp(1.0, -2 * wd.exponent) + r.magnitude);
                if rel_dd < IDENTITY_TOLERANCE {
                    report.cleared_by_recheck += 1;
                } else {
                    report.record_counterexample(Counterexample {
                        k,
                        x,
                        value: rel_dd,
                        hypotheses_hold: true,
                        detail: format!("relative residual {rel_dd:e}"),
                    });
                }
            }
        }
    }
    Ok(report.finish())
}

/// Where the generating function of `p_k(x)` (suitably normalised) is known
/// to be Laguerre–Pólya: rescaled Hermite on the line, Chebyshev on
/// `[-1, 1]`, normalised Laguerre on `[0, ∞)`.
pub fn laguerre_polya_domain(spec: &RecurrenceSpec) -> Option<(f64, f64)> {
    match spec.form() {
        RecurrenceForm::SymmetricMonic => match spec.c_sequence() {
            Sequence::Linear { slope, intercept } if *slope > 0.0 && *intercept == 0.0 => {
                Some((f64::NEG_INFINITY, f64::INFINITY))
            }
            Sequence::PowerLaw { delta, .. } if *delta == 0.5 => Some((f64::NEG_INFINITY, f64::INFINITY)),
            _ => None,
        },
        RecurrenceForm::UnitIntervalSymmetric => match spec.c_sequence() {
            Sequence::Constant { value } if *value == 0.5 => Some((-1.0, 1.0)),
            _ => None,
        },
        RecurrenceForm::HalfLine => match (spec.b_sequence(), spec.c_sequence()) {
            (
                Some(Sequence::Linear { slope: bs, intercept: bi }),
                Sequence::Linear { slope: cs, intercept: ci },
            ) if *bs == 1.0 && *cs == 1.0 && *ci == 0.0 && *bi > 0.0 => Some((0.0, f64::INFINITY)),
            _ => None,
        },
        RecurrenceForm::GeneralMonic => None,
    }
}

fn nonneg_hypotheses(spec: &RecurrenceSpec, subject: Subject, k: usize) -> Hypotheses {
    let mut h = Hypotheses::new();
    match subject {
        Subject::TurNonneg => h.require(spec, ConditionId::Nondecreasing, 1, k),
        Subject::Turan2Nonneg => {
            h.require(spec, ConditionId::Nondecreasing, 1, k + 1);
            h.require(spec, ConditionId::Cond1, 1, k - 1);
        }
        Subject::VxNonneg => bounds::second_order_hypotheses(spec, k, &mut h),
        Subject::SzwarcTur11 | Subject::SzwarcTur12 => {
            let (a, b) = if subject == Subject::SzwarcTur11 {
                (ConditionId::SzwarcIa, ConditionId::SzwarcIb)
            } else {
                (ConditionId::SzwarcIia, ConditionId::SzwarcIib)
            };
            let mut first = Hypotheses::new();
            first.require(spec, a, 1, k);
            if first.verdict == Verdict::Holds {
                return first;
            }
            h.require(spec, b, 1, k);
            if h.verdict != Verdict::Holds {
                return first;
            }
        }
        Subject::PatrNonneg | Subject::MarikNonneg if laguerre_polya_domain(spec).is_none() => {
            h.reject("laguerre-polya", "generating function not known to be Laguerre-Polya");
        }
        _ => {}
    }
    h
}

/// Sampling interval for a nonnegativity subject at degree `k`.
fn sample_interval(spec: &RecurrenceSpec, subject: Subject, k: usize) -> Result<(f64, f64)> {
    let natural = match spec.form() {
        RecurrenceForm::UnitIntervalSymmetric => (-1.0, 1.0),
        RecurrenceForm::HalfLine => {
            let (_, hi) = zerofinder::jacobi_matrix(spec, k + 1)?.gershgorin();
            (0.0, hi)
        }
        _ => {
            let cmax = (1..=k.max(1)).map(|j| spec.c(j)).try_fold(0.0f64, |m, c| c.map(|c| m.max(c)))?;
            let r = 2.0 * cmax.sqrt() * 1.05 + 0.1;
            (-r, r)
        }
    };
    if matches!(subject, Subject::PatrNonneg | Subject::MarikNonneg) {
        if let Some((lo, hi)) = laguerre_polya_domain(spec) {
            return Ok((natural.0.max(lo), natural.1.min(hi)));
        }
    }
    Ok(natural)
}

/// Half Chebyshev-spaced nodes (dense at the ends), half seeded uniform.
fn sample_points(lo: f64, hi: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n_cheb = count / 2;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut xs: Vec<f64> = (0..n_cheb)
        .map(|i| mid + half * (std::f64::consts::PI * (i as f64 + 0.5) / n_cheb as f64).cos())
        .collect();
    xs.extend((n_cheb..count).map(|_| rng.gen_range(lo..=hi)));
    xs
}

/// The quantities evaluated for one subject at one point: each carries its
/// `f64` value and a double-double recheck of the underlying unnormalised
/// expression.
struct NonnegSample {
    label: String,
    value: TuranValue,
}

fn nonneg_values(spec: &RecurrenceSpec, subject: Subject, k: usize, x: f64) -> Result<Vec<NonnegSample>> {
    let one = |label: &str, value: TuranValue| vec![NonnegSample { label: label.into(), value }];
    Ok(match subject {
        Subject::TurNonneg | Subject::SzwarcTur11 | Subject::SzwarcTur12 => one("T_k", evalkernel::turan_t(spec, k, x)?),
        Subject::Turan2Nonneg => match evalkernel::turan_t2_form(spec, k, x) {
            Err(Error::ZeroOfP { .. }) => one("T_k^(2)", evalkernel::turan_t2(spec, k, x)?),
            v => one("T_k^(2) form", v?),
        },
        Subject::VxNonneg => one("T_k(dP) form", evalkernel::turan_delta_form(spec, k, x)?),
        Subject::PatrNonneg => PATRICK_ORDERS
            .filter(|&m| k >= m)
            .map(|m| {
                Ok(NonnegSample {
                    label: format!("T_k^({m})"),
                    value: evalkernel::turan_tm_at(spec, k, m, x)?,
                })
            })
            .collect::<Result<_>>()?,
        Subject::MarikNonneg => one("S_k", evalkernel::turan_s_at(spec, k, x)?),
        _ => return Err(Error::InvalidParameter(format!("{subject} is not a nonnegativity subject"))),
    })
}

/// Double-double value of the unnormalised expression behind `sample`,
/// relative to `magnitude` (the `f64` term scale of the same expression).
fn recheck(spec: &RecurrenceSpec, subject: Subject, k: usize, x: f64, label: &str) -> Result<f64> {
    let ki = k as isize;
    let (value, magnitude) = match subject {
        Subject::TurNonneg | Subject::SzwarcTur11 | Subject::SzwarcTur12 => {
            let wd = eval_window::<Dd>(spec, x, ki - 1, k + 1)?;
            let wt = eval_window::<Tracked>(spec, x, ki - 1, k + 1)?;
            (turan_m_expr(wd.slice(ki - 1, 3), 1).to_f64(), turan_m_expr(wt.slice(ki - 1, 3), 1).magnitude)
        }
        Subject::Turan2Nonneg => {
            let wd = eval_window::<Dd>(spec, x, ki - 2, k + 2)?;
            let wt = eval_window::<Tracked>(spec, x, ki - 2, k + 2)?;
            (turan_m_expr(wd.slice(ki - 2, 5), 2).to_f64(), turan_m_expr(wt.slice(ki - 2, 5), 2).magnitude)
        }
        Subject::VxNonneg => {
            let wd = eval_window::<Dd>(spec, x, ki - 2, k + 2)?;
            let wt = eval_window::<Tracked>(spec, x, ki - 2, k + 2)?;
            (delta_turan_expr(&wd, spec, k)?.to_f64(), delta_turan_expr(&wt, spec, k)?.magnitude)
        }
        Subject::PatrNonneg => {
            let m: usize = label
                .trim_start_matches("T_k^(")
                .trim_end_matches(')')
                .parse()
                .map_err(|_| Error::InvalidParameter(label.into()))?;
            let first = ki - m as isize;
            let wd = eval_window::<Dd>(spec, x, first, k + m)?;
            let wt = eval_window::<Tracked>(spec, x, first, k + m)?;
            (
                turan_m_expr(wd.slice(first, 2 * m + 1), m).to_f64(),
                turan_m_expr(wt.slice(first, 2 * m + 1), m).magnitude,
            )
        }
        Subject::MarikNonneg => {
            let wd = eval_window::<Dd>(spec, x, ki - 1, k + 2)?;
            let wt = eval_window::<Tracked>(spec, x, ki - 1, k + 2)?;
            (turan_s_expr(wd.slice(ki - 1, 4)).to_f64(), turan_s_expr(wt.slice(ki - 1, 4)).magnitude)
        }
        _ => unreachable!("not a nonnegativity subject"),
    };
    Ok(if magnitude == 0.0 { 0.0 } else { value / magnitude })
}

/// Evaluates a Turán-type quantity on `x_grid` points per degree and reports
/// its smallest relative value.
pub fn verify_nonneg(
    spec: &RecurrenceSpec,
    subject: Subject,
    k_range: RangeInclusive<usize>,
    x_grid: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if !subject.is_nonneg() {
        return Err(Error::InvalidParameter(format!("{subject} is not a nonnegativity subject")));
    }
    check_form(spec, subject)?;
    let mut report = VerificationReport::new(subject, spec);
    let range = effective_range(spec, subject, &k_range, &mut report);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in range.into_iter().flatten() {
        let hold = report.note_hypotheses(k, &nonneg_hypotheses(spec, subject, k));
        let (lo, hi) = sample_interval(spec, subject, k)?;
        for x in sample_points(lo, hi, x_grid, &mut rng) {
            for s in nonneg_values(spec, subject, k, x)? {
                report.sample_count += 1;
                let mut rel = s.value.relative();
                if rel < -NONNEG_TOLERANCE {
                    let rel_dd = recheck(spec, subject, k, x, &s.label)?;
                    if rel_dd >= -NONNEG_TOLERANCE {
                        report.cleared_by_recheck += 1;
                    } else {
                        report.record_counterexample(Counterexample {
                            k,
                            x,
                            value: rel_dd,
                            hypotheses_hold: hold,
                            detail: format!("{} relative value {rel_dd:e}", s.label),
                        });
                    }
                    rel = rel_dd;
                }
                report.record_min(rel);
            }
        }
    }
    Ok(report.finish())
}

/// 1-based indices of the zeros that decide whether a bound holds.
fn covered_indices(side: Side, covers: Coverage, k: usize) -> Vec<usize> {
    match (side, covers) {
        (Side::Upper, Coverage::AllZeros) | (Side::Upper, Coverage::LargestZero) => vec![k],
        (Side::Upper, Coverage::InnerZeros) if k >= 3 => vec![k - 1, 2],
        (Side::Lower, Coverage::AllZeros) => vec![1],
        (Side::Lower, Coverage::FromSecond) if k >= 2 => vec![2],
        (Side::Lower, Coverage::LargestZero) => vec![k],
        _ => vec![],
    }
}

/// One bound (or certificate) compared with the zero it claims to bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentOutcome {
    pub name: String,
    pub side: Side,
    pub value: f64,
    /// 1-based index of the zero.
    pub zero_index: usize,
    pub zero: Enclosure,
    /// Distance to the far end of the enclosure, positive when contained.
    pub margin: f64,
    pub violated: bool,
}

/// All bounds at degree `k` together with their containment outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentCheck {
    pub k: usize,
    pub bounds: Vec<bounds::BoundResult>,
    pub largest: Enclosure,
    pub certificate: f64,
    pub outcomes: Vec<ContainmentOutcome>,
}

impl ContainmentCheck {
    pub fn violations(&self) -> impl Iterator<Item = &ContainmentOutcome> {
        self.outcomes.iter().filter(|o| o.violated)
    }
}

/// Compares every non-failing bound at degree `k >= 1` with bisection
/// enclosures at `tol`. Bounds whose hypotheses hold must be strict; boundary
/// cases may meet the zero. The Rayleigh certificate may not exceed `x_kk`
/// by more than `NONNEG_TOLERANCE` relative.
pub fn containment_at(spec: &RecurrenceSpec, k: usize, tol: f64) -> Result<ContainmentCheck> {
    if k < 1 {
        return Err(Error::Degree { k, min: 1 });
    }
    let mut cache: Vec<Option<Enclosure>> = vec![None; k + 1];
    let mut zero = |i: usize| -> Result<Enclosure> {
        if let Some(e) = cache[i] {
            return Ok(e);
        }
        let e = zerofinder::zero_at(spec, k, i, tol)?;
        cache[i] = Some(e);
        Ok(e)
    };
    let largest = zero(k)?;
    let all = bounds::all_bounds(spec, k);
    let mut outcomes = Vec::new();
    for b in &all {
        if b.applicability == Verdict::Fails || !b.value.is_finite() {
            continue;
        }
        let strict = b.applicability == Verdict::Holds;
        for i in covered_indices(b.side, b.covers, k) {
            let e = zero(i)?;
            // Inner zeros of a symmetric family are bounded in absolute value.
            let e = if b.covers == Coverage::InnerZeros && e.mid() < 0.0 {
                Enclosure { lo: -e.hi, hi: -e.lo }
            } else {
                e
            };
            let margin = match b.side {
                Side::Upper => b.value - e.lo,
                Side::Lower => e.hi - b.value,
            };
            outcomes.push(ContainmentOutcome {
                name: b.name.as_str().to_string(),
                side: b.side,
                value: b.value,
                zero_index: i,
                zero: e,
                margin,
                violated: if strict { margin <= 0.0 } else { margin < 0.0 },
            });
        }
    }
    let certificate = zerofinder::rayleigh_lower(spec, k, None)?.value;
    let margin = largest.hi + NONNEG_TOLERANCE * (1.0 + largest.hi.abs()) - certificate;
    outcomes.push(ContainmentOutcome {
        name: "rayleigh_lower".into(),
        side: Side::Lower,
        value: certificate,
        zero_index: k,
        zero: largest,
        margin,
        violated: margin < 0.0,
    });
    Ok(ContainmentCheck {
        k,
        bounds: all,
        largest,
        certificate,
        outcomes,
    })
}

/// [`containment_at`] over a range of degrees.
pub fn verify_bound_containment(
    spec: &RecurrenceSpec,
    k_range: RangeInclusive<usize>,
    tol: f64,
) -> Result<VerificationReport> {
    let subject = Subject::BoundContainment;
    let mut report = VerificationReport::new(subject, spec);
    let range = effective_range(spec, subject, &k_range, &mut report);
    for k in range.into_iter().flatten() {
        if k == 0 {
            continue;
        }
        for o in containment_at(spec, k, tol)?.outcomes {
            report.sample_count += 1;
            report.record_min(o.margin / (1.0 + o.zero.hi.abs()));
            if o.violated {
                report.record_counterexample(Counterexample {
                    k,
                    x: o.zero.mid(),
                    value: o.margin,
                    hypotheses_hold: true,
                    detail: format!(
                        "{} {} {} vs zero {} in [{}, {}]",
                        o.name,
                        o.side.as_str(),
                        o.value,
                        o.zero_index,
                        o.zero.lo,
                        o.zero.hi
                    ),
                });
            }
        }
    }
    Ok(report.finish())
}

/// The family with `c_j` replaced by `c_j (1 + ε_j)²`, `ε_j = eps[j - 1]`, for
/// `j = 1..=eps.len()`.
pub fn perturbed(spec: &RecurrenceSpec, eps: &[f64]) -> Result<RecurrenceSpec> {
    if spec.form() != RecurrenceForm::SymmetricMonic {
        return Err(Error::FormMismatch {
            what: "perturbation",
            expected: RecurrenceForm::SymmetricMonic,
            found: spec.form(),
        });
    }
    let mut values = vec![0.0];
    for (j, e) in eps.iter().enumerate() {
        let f = 1.0 + e;
        values.push(spec.c(j + 1)? * f * f);
    }
    Ok(RecurrenceSpec::symmetric(Sequence::Table { values }).with_label(format!("{}+perturbed", spec.label())))
}

/// Draws `|ε_j| < epsilon` uniformly, perturbs `c_j` to `c_j(1 + ε_j)²` and
/// checks `x*_kk ∈ ((1-ε)x_kk, (1+ε)x_kk)`.
pub fn verify_perturbation(
    spec: &RecurrenceSpec,
    k: usize,
    epsilon: f64,
    draws: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    check_form(spec, Subject::Perturbation)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if k < 1 {
        return Err(Error::Degree { k, min: 1 });
    }
    let mut report = VerificationReport::new(Subject::Perturbation, spec);
    let (_, base) = zerofinder::extreme_zeros(spec, k, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let eps: Vec<f64> = (1..k)
            .map(|_| loop {
                let e = rng.gen_range(-epsilon..epsilon);
                if e != -epsilon {
                    break e;
                }
            })
            .collect();
        let p = perturbed(spec, &eps)?;
        let (_, top) = zerofinder::extreme_zeros(&p, k, tol)?;
        let ratio = top.mid() / base.mid();
        report.sample_count += 1;
        report.max_relative_residual = report.max_relative_residual.max((ratio - 1.0).abs());
        report.record_min((epsilon - (ratio - 1.0).abs()) / epsilon);
        let below = top.hi <= (1.0 - epsilon) * base.lo;
        let above = top.lo >= (1.0 + epsilon) * base.hi;
        if below || above {
            report.record_counterexample(Counterexample {
                k,
                x: top.mid(),
                value: ratio - 1.0,
                hypotheses_hold: true,
                detail: format!("perturbed largest zero {} vs {}", top.mid(), base.mid()),
            });
        }
    }
    Ok(report.finish())
}
