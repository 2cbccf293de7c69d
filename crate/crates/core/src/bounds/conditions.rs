//! Pointwise checkers for the coefficient conditions behind each bound.

use crate::error::{Error, Result};
use crate::families::{RecurrenceForm, RecurrenceSpec};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    /// `c_{j-1} <= c_j`.
    Nondecreasing,
    /// `c_{j-1} - 3c_j + 3c_{j+1} - c_{j+2} >= 0`.
    Cond1,
    /// `2c_{j+2} - 3c_{j+1} + c_j >= 0`.
    Condi,
    /// `(c_{j+1}-c_j)(√(c_{j+1}-c_j) + √(2c_{j+2}-3c_{j+1}+c_j)) >= √c_j |c_{j+2}-2c_{j+1}+c_j|`.
    Condii,
    /// `d_j / (2(1+d_j)) < d_{j+1} < d_j(1 + 2√d_j + 2d_j)/(1+d_j)`, growth convention.
    Condnew,
    /// Unit interval: `c_j` nondecreasing and `c_j <= 1/2`.
    SzwarcIa,
    /// Unit interval: `c_j` nonincreasing and `c_j >= 1/2`.
    SzwarcIb,
    /// Half line: `b, c` nondecreasing, `c_j <= b_j`, `c_j - c_{j-1} >= b_j - b_{j-1}`.
    SzwarcIia,
    /// Half line: `b, c` nondecreasing, `c_j >= b_j`, `c_j - c_{j-1} <= b_j - b_{j-1}`.
    SzwarcIib,
    /// `(3/4)c_j < c_{j-1} <= c_j`.
    Tt2Ratio,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::Nondecreasing,
        ConditionId::Cond1,
        ConditionId::Condi,
        ConditionId::Condii,
        ConditionId::Condnew,
        ConditionId::SzwarcIa,
        ConditionId::SzwarcIb,
        ConditionId::SzwarcIia,
        ConditionId::SzwarcIib,
        ConditionId::Tt2Ratio,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::Nondecreasing => "nondecreasing",
            ConditionId::Cond1 => "cond1",
            ConditionId::Condi => "condi",
            ConditionId::Condii => "condii",
            ConditionId::Condnew => "condnew",
            ConditionId::SzwarcIa => "szwarc-ia",
            ConditionId::SzwarcIb => "szwarc-ib",
            ConditionId::SzwarcIia => "szwarc-iia",
            ConditionId::SzwarcIib => "szwarc-iib",
            ConditionId::Tt2Ratio => "tt2-ratio",
        }
    }

    pub fn parse(s: &str) -> Option<ConditionId> {
        Self::ALL.into_iter().find(|id| id.as_str() == s)
    }

    /// Smallest index at which the condition is evaluated.
    pub fn first_index(self) -> usize {
        match self {
            ConditionId::Condi | ConditionId::Condii => 0,
            ConditionId::Tt2Ratio => 3,
            _ => 1,
        }
    }

    /// Smallest index at which the condition is well defined. Reports start
    /// at [`Self::first_index`]; hypotheses may ask for earlier indices.
    fn min_index(self) -> usize {
        match self {
            ConditionId::Condi | ConditionId::Condii => 0,
            _ => 1,
        }
    }

    /// Largest coefficient index read when checking index `j`.
    pub fn reach(self, j: usize) -> usize {
        match self {
            ConditionId::Cond1 | ConditionId::Condi | ConditionId::Condii => j + 2,
            ConditionId::Condnew => j + 1,
            _ => j,
        }
    }

    /// Forms the condition is defined for.
    pub fn applies_to(self, form: RecurrenceForm) -> bool {
        match self {
            ConditionId::SzwarcIa | ConditionId::SzwarcIb => form == RecurrenceForm::UnitIntervalSymmetric,
            ConditionId::SzwarcIia | ConditionId::SzwarcIib => form == RecurrenceForm::HalfLine,
            ConditionId::Nondecreasing => true,
            _ => form == RecurrenceForm::SymmetricMonic,
        }
    }

    fn required_form(self) -> RecurrenceForm {
        match self {
            ConditionId::SzwarcIa | ConditionId::SzwarcIb => RecurrenceForm::UnitIntervalSymmetric,
            ConditionId::SzwarcIia | ConditionId::SzwarcIib => RecurrenceForm::HalfLine,
            _ => RecurrenceForm::SymmetricMonic,
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a hypothesis check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    /// Equality within rounding where the statement asks for a strict
    /// inequality, or an equality case of a non-strict one worth surfacing.
    Boundary,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Boundary => "boundary",
            Verdict::Fails => "fails",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Le,
    Lt,
    Ge,
}

/// One inequality `lhs (relation) rhs` evaluated at a single index.
#[derive(Debug, Clone, Copy)]
struct Check {
    lhs: f64,
    rhs: f64,
    relation: Relation,
    /// Sum of absolute values of the terms, for the equality tolerance.
    scale: f64,
    /// Report equality cases.
    flag_equality: bool,
}

impl Check {
    fn new(lhs: f64, relation: Relation, rhs: f64, scale: f64, flag_equality: bool) -> Self {
        Check {
            lhs,
            rhs,
            relation,
            scale,
            flag_equality,
        }
    }

    fn outcome(&self) -> CheckOutcome {
        if self.lhs.is_nan() || self.rhs.is_nan() {
            return CheckOutcome::Fail;
        }
        let slack = match self.relation {
            Relation::Le | Relation::Lt => self.rhs - self.lhs,
            Relation::Ge => self.lhs - self.rhs,
        };
        if slack.is_infinite() {
            return if slack > 0.0 { CheckOutcome::Pass } else { CheckOutcome::Fail };
        }
        let tol = 8.0 * f64::EPSILON * self.scale;
        if slack.abs() <= tol || (self.lhs.is_infinite() && self.lhs == self.rhs) {
            CheckOutcome::Equal
        } else if slack > 0.0 {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CheckOutcome {
    Pass,
    Equal,
    Fail,
}

/// Where a condition was first violated or met with equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexDetail {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum IndexOutcome {
    Pass,
    /// Equality in a non-strict inequality that the condition flags.
    FlaggedEqual(IndexDetail),
    /// Equality where strict inequality is required.
    StrictEqual(IndexDetail),
    Fail(IndexDetail),
}

impl IndexOutcome {
    pub(crate) fn satisfied(&self) -> bool {
        matches!(self, IndexOutcome::Pass | IndexOutcome::FlaggedEqual(_))
    }
}

fn combine(index: usize, checks: &[Check]) -> IndexOutcome {
    let detail = |c: &Check| IndexDetail {
        index,
        lhs: c.lhs,
        rhs: c.rhs,
    };
    let mut flagged = None;
    let mut strict = None;
    for c in checks {
        match c.outcome() {
            CheckOutcome::Fail => return IndexOutcome::Fail(detail(c)),
            CheckOutcome::Equal if c.relation == Relation::Lt => {
                strict.get_or_insert(detail(c));
            }
            CheckOutcome::Equal if c.flag_equality => {
                flagged.get_or_insert(detail(c));
            }
            _ => {}
        }
    }
    match (strict, flagged) {
        (Some(d), _) => IndexOutcome::StrictEqual(d),
        (None, Some(d)) => IndexOutcome::FlaggedEqual(d),
        (None, None) => IndexOutcome::Pass,
    }
}

fn nondecreasing_check(prev: f64, curr: f64) -> Check {
    Check::new(prev, Relation::Le, curr, prev.abs() + curr.abs(), false)
}

/// Evaluates condition `id` at index `j`.
pub(crate) fn evaluate(spec: &RecurrenceSpec, id: ConditionId, j: usize) -> Result<IndexOutcome> {
    let c = |i: usize| spec.c(i);
    let checks: Vec<Check> = match id {
        ConditionId::Nondecreasing => {
            if j == 0 {
                vec![]
            } else {
                vec![nondecreasing_check(c(j - 1)?, c(j)?)]
            }
        }
        ConditionId::Cond1 => {
            let (c0, c1, c2, c3) = (c(j - 1)?, c(j)?, c(j + 1)?, c(j + 2)?);
            let lhs = c0 - 3.0 * c1 + 3.0 * c2 - c3;
            let scale = c0.abs() + 3.0 * c1.abs() + 3.0 * c2.abs() + c3.abs();
            vec![Check::new(lhs, Relation::Ge, 0.0, scale, true)]
        }
        ConditionId::Condi => {
            let (c0, c1, c2) = (c(j)?, c(j + 1)?, c(j + 2)?);
            let lhs = 2.0 * c2 - 3.0 * c1 + c0;
            let scale = 2.0 * c2.abs() + 3.0 * c1.abs() + c0.abs();
            vec![Check::new(lhs, Relation::Ge, 0.0, scale, true)]
        }
        ConditionId::Condii => {
            let (c0, c1, c2) = (c(j)?, c(j + 1)?, c(j + 2)?);
            let a = c1 - c0;
            let b = 2.0 * c2 - 3.0 * c1 + c0;
            let lhs = if a < 0.0 || b < 0.0 {
                f64::NAN
            } else {
                a * (a.sqrt() + b.sqrt())
            };
            let rhs = c0.sqrt() * (c2 - 2.0 * c1 + c0).abs();
            let scale = lhs.abs() + c0.sqrt() * (c2.abs() + 2.0 * c1.abs() + c0.abs());
            vec![Check::new(lhs, Relation::Ge, rhs, scale, true)]
        }
        ConditionId::Condnew => {
            let growth = |i: usize| -> Result<f64> {
                let prev = c(i - 1)?;
                Ok(if prev == 0.0 { f64::INFINITY } else { c(i)? / prev - 1.0 })
            };
            let (d, dn) = (growth(j)?, growth(j + 1)?);
            let (lower, upper) = condnew_window(d);
            let low = Check::new(lower, Relation::Lt, dn, 2.0 * (lower.abs() + dn.abs()), true);
            let high = Check::new(dn, Relation::Lt, upper, 2.0 * (upper.abs() + dn.abs()), true);
            // d_j > 0 is part of the hypothesis.
            let positive = Check::new(0.0, Relation::Lt, d, d.abs(), true);
            vec![positive, low, high]
        }
        ConditionId::SzwarcIa | ConditionId::SzwarcIb => {
            let cj = c(j)?;
            let mut v = vec![];
            if j >= 2 {
                let prev = c(j - 1)?;
                v.push(if id == ConditionId::SzwarcIa {
                    nondecreasing_check(prev, cj)
                } else {
                    Check::new(prev, Relation::Ge, cj, prev + cj, false)
                });
            }
            v.push(if id == ConditionId::SzwarcIa {
                Check::new(cj, Relation::Le, 0.5, cj + 0.5, false)
            } else {
                Check::new(cj, Relation::Ge, 0.5, cj + 0.5, false)
            });
            v
        }
        ConditionId::SzwarcIia | ConditionId::SzwarcIib => {
            let b_seq = |i: usize| -> Result<f64> { Ok(spec.coefficient(i)?.b) };
            let (cp, cj, bp, bj) = (c(j - 1)?, c(j)?, b_seq(j - 1)?, b_seq(j)?);
            let dc = cj - cp;
            let db = bj - bp;
            let scale = cj.abs() + cp.abs() + bj.abs() + bp.abs();
            let mut v = vec![nondecreasing_check(cp, cj), nondecreasing_check(bp, bj)];
            if id == ConditionId::SzwarcIia {
                v.push(Check::new(cj, Relation::Le, bj, scale, false));
                v.push(Check::new(dc, Relation::Ge, db, scale, false));
            } else {
                v.push(Check::new(cj, Relation::Ge, bj, scale, false));
                v.push(Check::new(dc, Relation::Le, db, scale, false));
            }
            v
        }
        ConditionId::Tt2Ratio => {
            let (prev, cj) = (c(j - 1)?, c(j)?);
            vec![
                Check::new(0.75 * cj, Relation::Lt, prev, 0.75 * cj + prev, true),
                nondecreasing_check(prev, cj),
            ]
        }
    };
    Ok(combine(j, &checks))
}

/// Open window for `d_{j+1}` given `d_j` (growth convention).
///
/// At `d_j = ∞` (the index right after `c_0 = 0`) the window is `(1/2, ∞)`.
pub fn condnew_window(d: f64) -> (f64, f64) {
    if d.is_infinite() {
        return (0.5, f64::INFINITY);
    }
    let lower = d / (2.0 * (1.0 + d));
    let upper = d * (1.0 + 2.0 * d.sqrt() + 2.0 * d) / (1.0 + d);
    (lower, upper)
}

/// Result of scanning a condition over a range of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub first_index: usize,
    pub k_max: usize,
    /// Largest `m` with every index in `first_index..=m` satisfied.
    pub holds_up_to: Option<usize>,
    pub first_violation: Option<IndexDetail>,
    /// First index where equality (within rounding) was met.
    pub first_equality: Option<IndexDetail>,
    /// The equality occurred in a strict inequality.
    pub strict_equality: bool,
    /// The scan stopped early because tabulated coefficients ran out.
    pub truncated_at: Option<usize>,
}

impl ConditionReport {
    pub fn verdict(&self) -> Verdict {
        if self.first_violation.is_some() {
            Verdict::Fails
        } else if self.first_equality.is_some() {
            Verdict::Boundary
        } else {
            Verdict::Holds
        }
    }
}

/// Evaluates `id` at every index from its first index up to `k_max`.
pub fn check_condition(spec: &RecurrenceSpec, id: ConditionId, k_max: usize) -> Result<ConditionReport> {
    if !id.applies_to(spec.form()) {
        return Err(Error::FormMismatch {
            what: id.as_str(),
            expected: id.required_form(),
            found: spec.form(),
        });
    }
    let first = id.first_index();
    let mut report = ConditionReport {
        id,
        first_index: first,
        k_max,
        holds_up_to: None,
        first_violation: None,
        first_equality: None,
        strict_equality: false,
        truncated_at: None,
    };
    let mut unbroken = true;
    for j in first..=k_max {
        let outcome = match evaluate(spec, id, j) {
            Ok(o) => o,
            Err(Error::CapacityExceeded { .. }) => {
                report.truncated_at = Some(j);
                break;
            }
            Err(e) => return Err(e),
        };
        match outcome {
            IndexOutcome::Pass => {}
            IndexOutcome::FlaggedEqual(d) => {
                report.first_equality.get_or_insert(d);
            }
            IndexOutcome::StrictEqual(d) => {
                if report.first_equality.is_none() {
                    report.first_equality = Some(d);
                    report.strict_equality = true;
                }
            }
            IndexOutcome::Fail(d) => {
                report.first_violation.get_or_insert(d);
            }
        }
        if unbroken && outcome.satisfied() {
            report.holds_up_to = Some(j);
        } else {
            unbroken = false;
        }
    }
    Ok(report)
}

/// Aggregated verdict of several condition ranges, as used by the bounds.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Hypotheses {
    pub verdict: Verdict,
    pub failed: Option<FailedHypothesis>,
}

/// The first hypothesis that did not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedHypothesis {
    pub condition: String,
    pub index: Option<usize>,
    pub detail: String,
}

impl Hypotheses {
    pub fn new() -> Self {
        Hypotheses {
            verdict: Verdict::Holds,
            failed: None,
        }
    }

    fn fail(&mut self, verdict: Verdict, condition: &str, index: Option<usize>, detail: String) {
        let rank = |v: Verdict| match v {
            Verdict::Holds => 0,
            Verdict::Boundary => 1,
            Verdict::Fails => 2,
        };
        if rank(verdict) > rank(self.verdict) {
            self.verdict = verdict;
            self.failed = Some(FailedHypothesis {
                condition: condition.to_string(),
                index,
                detail,
            });
        }
    }

    /// Marks the bound inapplicable for a reason outside the condition list.
    pub fn reject(&mut self, condition: &str, detail: impl Into<String>) {
        self.fail(Verdict::Fails, condition, None, detail.into());
    }

    /// Requires `id` at every index in `from..=to`.
    pub fn require(&mut self, spec: &RecurrenceSpec, id: ConditionId, from: usize, to: usize) {
        if self.verdict == Verdict::Fails {
            return;
        }
        for j in from.max(id.min_index())..=to {
            match evaluate(spec, id, j) {
                Ok(IndexOutcome::Pass) | Ok(IndexOutcome::FlaggedEqual(_)) => {}
                Ok(IndexOutcome::StrictEqual(d)) => self.fail(
                    Verdict::Boundary,
                    id.as_str(),
                    Some(j),
                    format!("equality {} = {} where strict inequality is required", d.lhs, d.rhs),
                ),
                Ok(IndexOutcome::Fail(d)) => {
                    self.fail(
                        Verdict::Fails,
                        id.as_str(),
                        Some(j),
                        format!("lhs {} vs rhs {}", d.lhs, d.rhs),
                    );
                    return;
                }
                Err(e) => {
                    self.fail(Verdict::Fails, id.as_str(), Some(j), e.to_string());
                    return;
                }
            }
        }
    }
}
