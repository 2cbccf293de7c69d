//! Closed-form bounds on the extreme zeros, each paired with its hypotheses.
//!
//! Every bound function returns a [`BoundResult`]; a failed hypothesis makes
//! the result inapplicable rather than producing an error, so sweeps can chart
//! where each statement applies.
//!
//! Hypothesis index ranges are the ones the underlying induction actually
//! uses for degree `k`:
//!
//! | bound | hypotheses |
//! |---|---|
//! | first order `2√c_{k-1}` | `c` nondecreasing through `k-1` |
//! | `2√c_{k-2}` | nondecreasing through `k-1`, `(3/4)c_{k-1} < c_{k-2}` |
//! | sextic `F` root | nondecreasing through `k+1`, `cond1` at `1..=k-1` |
//! | second order (both forms) | nondecreasing through `k+1`, `condi`/`condii` at `0..=k-1` |

pub mod conditions;

pub use crate::families::DConvention;
pub use conditions::{
    check_condition, condnew_window, ConditionId, ConditionReport, FailedHypothesis, IndexDetail,
    Verdict,
};

use crate::families::{RecurrenceForm, RecurrenceSpec};
use crate::roots::{bisect, largest_cubic_root};
use conditions::Hypotheses;
use std::fmt;

/// Smallest zero of the Airy function, in absolute value, in the scaling
/// `Ai(-3^{-1/3} i_1) = 0`: `3^{1/3} · 2.338107410459767...`.
pub const AIRY_I1: f64 = 3.372134408068166;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

/// Which zeros a bound makes a statement about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coverage {
    /// Upper: every zero lies below the value (and, for symmetric families,
    /// above its negative). Lower: every zero lies above the value.
    AllZeros,
    /// Only `x_kk`.
    LargestZero,
    /// `|x_ik| < value` for `i = 2..k-1`.
    InnerZeros,
    /// Lower bound on `x_{2,k}` (the smallest zero may lie below it).
    FromSecond,
}

impl Coverage {
    pub fn as_str(self) -> &'static str {
        match self {
            Coverage::AllZeros => "all",
            Coverage::LargestZero => "largest",
            Coverage::InnerZeros => "inner",
            Coverage::FromSecond => "from-second",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundName {
    FirstOrder,
    TrivialLower,
    Tt2,
    FiniteInterval,
    HalfLineLower,
    HalfLineUpper,
    Vir1,
    Thmain,
    Condsimpl,
    Mnt,
    MarikHermite,
    MarikHermiteRefined,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::FirstOrder => "first_order",
            BoundName::TrivialLower => "lower_trivial",
            BoundName::Tt2 => "tt2",
            BoundName::FiniteInterval => "finite_interval",
            BoundName::HalfLineLower => "half_line_lower",
            BoundName::HalfLineUpper => "half_line_upper",
            BoundName::Vir1 => "vir1",
            BoundName::Thmain => "thmain",
            BoundName::Condsimpl => "condsimpl",
            BoundName::Mnt => "mnt",
            BoundName::MarikHermite => "marik_hermite",
            BoundName::MarikHermiteRefined => "marik_hermite_refined",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub name: BoundName,
    pub side: Side,
    pub covers: Coverage,
    pub k: usize,
    /// NaN when the formula could not be evaluated.
    pub value: f64,
    pub applicability: Verdict,
    pub failed_hypothesis: Option<FailedHypothesis>,
    /// The relative-increment convention used, if any.
    pub convention: Option<DConvention>,
    /// The same value from an independent computation route.
    pub cross_check: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(name: BoundName, side: Side, covers: Coverage, k: usize) -> Self {
        BoundResult {
            name,
            side,
            covers,
            k,
            value: f64::NAN,
            applicability: Verdict::Holds,
            failed_hypothesis: None,
            convention: None,
            cross_check: None,
            notes: Vec::new(),
        }
    }

    fn with_hypotheses(mut self, h: Hypotheses) -> Self {
        self.applicability = h.verdict;
        self.failed_hypothesis = h.failed;
        self
    }

    /// All hypotheses hold and the value is finite.
    pub fn is_applicable(&self) -> bool {
        self.applicability == Verdict::Holds && self.value.is_finite()
    }
}

fn symmetric_only(spec: &RecurrenceSpec, h: &mut Hypotheses) -> bool {
    if spec.form() != RecurrenceForm::SymmetricMonic {
        h.reject("form", format!("requires a symmetric-monic family, got {}", spec.form().as_str()));
        return false;
    }
    true
}

fn min_degree(k: usize, min: usize, h: &mut Hypotheses) -> bool {
    if k < min {
        h.reject("degree", format!("requires k >= {min}"));
        return false;
    }
    true
}

/// Evaluates `f`, turning coefficient errors into a failed hypothesis.
fn value_or_reject(h: &mut Hypotheses, f: impl FnOnce() -> crate::Result<f64>) -> f64 {
    match f() {
        Ok(v) => v,
        Err(e) => {
            h.reject("coefficients", e.to_string());
            f64::NAN
        }
    }
}

/// `x_kk < 2√c_{k-1}` for nondecreasing `c`.
pub fn bound_first_order(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::FirstOrder, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 2, &mut h) {
        r.value = value_or_reject(&mut h, || Ok(2.0 * spec.c(k - 1)?.sqrt()));
        h.require(spec, ConditionId::Nondecreasing, 1, k - 1);
    }
    r.with_hypotheses(h)
}

/// `x_kk > √c_{k-1}` from the extremal representation; no hypotheses.
///
/// At `k = 2` the zero is exactly `√c_1`, so the strict statement is reported
/// as a boundary case.
pub fn bound_trivial_lower(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::TrivialLower, Side::Lower, Coverage::LargestZero, k);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 2, &mut h) {
        r.value = value_or_reject(&mut h, || Ok(spec.c(k - 1)?.sqrt()));
    }
    let mut r = r.with_hypotheses(h);
    if k == 2 && r.applicability == Verdict::Holds {
        r.applicability = Verdict::Boundary;
        r.notes.push("equality: x_22 = sqrt(c_1)".into());
    }
    r
}

/// `x_kk < 2√c_{k-2}` when consecutive coefficients are close.
pub fn bound_tt2(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::Tt2, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 3, &mut h) {
        r.value = value_or_reject(&mut h, || Ok(2.0 * spec.c(k - 2)?.sqrt()));
        h.require(spec, ConditionId::Nondecreasing, 1, k - 1);
        // The transversal must stay continuous on |x| <= 2√c_{k-1}, which
        // needs the ratio condition one index below k.
        h.require(spec, ConditionId::Tt2Ratio, k - 1, k - 1);
        r.notes.push(format!("ratio hypothesis checked at index {}", k - 1));
    }
    r.with_hypotheses(h)
}

/// `|x_ik| < 2√(b_k c_k)` for symmetric families on `[-1, 1]`.
pub fn bound_finite_interval(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::FiniteInterval, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if spec.form() != RecurrenceForm::UnitIntervalSymmetric {
        h.reject("form", "requires a unit-interval family");
        return r.with_hypotheses(h);
    }
    if !min_degree(k, 1, &mut h) {
        return r.with_hypotheses(h);
    }
    r.value = value_or_reject(&mut h, || {
        let co = spec.coefficient(k)?;
        Ok(2.0 * (co.b * co.c).sqrt())
    });
    let mut ia = h.clone();
    ia.require(spec, ConditionId::SzwarcIa, 1, k);
    if ia.verdict == Verdict::Holds {
        return r.with_hypotheses(ia);
    }
    let mut ib = h;
    ib.require(spec, ConditionId::SzwarcIb, 1, k);
    if ib.verdict == Verdict::Holds {
        r.covers = Coverage::InnerZeros;
        return r.with_hypotheses(ib);
    }
    r.with_hypotheses(ia)
}

/// Lower and upper bounds for families on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineBounds {
    pub lower: BoundResult,
    pub upper: BoundResult,
}

/// `(√b_k - √c_k)² < x < (√b_k + √c_k)²`; the lower bound covers `x_{1,k}`
/// only in the `c_k >= b_k` case.
pub fn bound_half_line(spec: &RecurrenceSpec, k: usize) -> HalfLineBounds {
    let mut lower = BoundResult::new(BoundName::HalfLineLower, Side::Lower, Coverage::FromSecond, k);
    let mut upper = BoundResult::new(BoundName::HalfLineUpper, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if spec.form() != RecurrenceForm::HalfLine {
        h.reject("form", "requires a half-line family");
    } else if min_degree(k, 1, &mut h) {
        match spec.coefficient(k) {
            Ok(co) => {
                let (sb, sc) = (co.b.sqrt(), co.c.sqrt());
                lower.value = (sb - sc) * (sb - sc);
                upper.value = (sb + sc) * (sb + sc);
            }
            Err(e) => h.reject("coefficients", e.to_string()),
        }
        let mut iia = h.clone();
        iia.require(spec, ConditionId::SzwarcIia, 1, k);
        if iia.verdict == Verdict::Holds {
            h = iia;
        } else {
            let mut iib = h.clone();
            iib.require(spec, ConditionId::SzwarcIib, 1, k);
            if iib.verdict == Verdict::Holds {
                lower.covers = Coverage::AllZeros;
                h = iib;
            } else {
                h = iia;
            }
        }
    }
    HalfLineBounds {
        lower: lower.with_hypotheses(h.clone()),
        upper: upper.with_hypotheses(h),
    }
}

/// Largest root in `(0, 4a]` of the cubic in `y = x²`
/// `y³ - 2(4a+b+c)y² + (16a² + (b+c)² + 4a(5b+2c))y - 16ab(3a+c)`,
/// returned as `√y`; here `a, b, c = c_{k-1}, c_k, c_{k+1}`.
pub fn vir1_value(a: f64, b: f64, c: f64) -> Option<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return None;
    }
    // Work in z = y / a so that the bracket is (0, 4].
    let (bb, cc) = (b / a, c / a);
    let p2 = -2.0 * (4.0 + bb + cc);
    let p1 = 16.0 + (bb + cc) * (bb + cc) + 4.0 * (5.0 * bb + 2.0 * cc);
    let p0 = -16.0 * bb * (3.0 + cc);
    largest_cubic_root(p2, p1, p0, 0.0, 4.0).map(|z| (a * z).sqrt())
}

/// The same root by plain bisection on the sextic in `x` over `[0, 2√a]`.
fn vir1_by_bisection(a: f64, b: f64, c: f64) -> f64 {
    let f = |x: f64| {
        let y = x * x;
        ((y - 2.0 * (4.0 * a + b + c)) * y + (16.0 * a * a + (b + c) * (b + c) + 4.0 * a * (5.0 * b + 2.0 * c))) * y
            - 16.0 * b * a * (3.0 * a + c)
    };
    bisect(f, 0.0, 2.0 * a.sqrt())
}

/// Largest real root of the sextic `F` built from `c_{k-1}, c_k, c_{k+1}`.
pub fn bound_vir1(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::Vir1, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 2, &mut h) {
        h.require(spec, ConditionId::Nondecreasing, 1, k + 1);
        h.require(spec, ConditionId::Cond1, 1, k - 1);
        match (spec.c(k - 1), spec.c(k), spec.c(k + 1)) {
            (Ok(a), Ok(b), Ok(c)) => match vir1_value(a, b, c) {
                Some(v) => {
                    r.value = v;
                    r.cross_check = Some(vir1_by_bisection(a, b, c));
                }
                None => h.reject("root", "no root of F in (0, 4c_{k-1}]"),
            },
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => h.reject("coefficients", e.to_string()),
        }
    }
    r.with_hypotheses(h)
}

/// `2√(c_k (1 - 6^{-4/3} d^{2/3} ((v+9)^{1/3} - (v-9)^{1/3})²))`, `v = √(6d+81)`.
pub fn thmain_value(ck: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 2.0 * ck.sqrt();
    }
    let v = (6.0 * d + 81.0).sqrt();
    let a = (v + 9.0).cbrt();
    // v - 9 = 6d / (v + 9) avoids cancellation for small d.
    let b = (6.0 * d / (v + 9.0)).cbrt();
    // a - b = (a³ - b³) / (a² + ab + b²) and a³ - b³ = 18.
    let diff = 18.0 / (a * a + a * b + b * b);
    let factor = 1.0 - 6f64.powf(-4.0 / 3.0) * d.powf(2.0 / 3.0) * diff * diff;
    2.0 * (ck * factor).sqrt()
}

/// Largest positive root of `x⁶ - 4(c'+2c)x⁴ + 4(c'+c)(c'+5c)x² - 64c²c'`
/// with `c = c_k`, `c' = c_{k+1}`.
pub fn thmain_cubic_value(ck: f64, ck1: f64) -> Option<f64> {
    // y = x² / (4c_k): y³ - (r+2)y² + (r+1)(r+5)y/4 - r, root in (0, 1].
    let r = ck1 / ck;
    largest_cubic_root(-(r + 2.0), (r + 1.0) * (r + 5.0) / 4.0, -r, 0.0, 1.0)
        .map(|y| 2.0 * (ck * y).sqrt())
}

/// `2√(c_k (1 - d^{2/3} / (2^{1/3} + d^{1/3})²))`.
pub fn condsimpl_value(ck: f64, d: f64) -> f64 {
    let t = d.cbrt();
    let denom = 2f64.cbrt() + t;
    2.0 * (ck * (1.0 - t * t / (denom * denom))).sqrt()
}

pub(crate) fn second_order_hypotheses(spec: &RecurrenceSpec, k: usize, h: &mut Hypotheses) {
    h.require(spec, ConditionId::Nondecreasing, 1, k + 1);
    h.require(spec, ConditionId::Condi, 0, k - 1);
    h.require(spec, ConditionId::Condii, 0, k - 1);
}

/// Second-order bound with `d = c_{k+1}/c_k - 1`.
pub fn bound_thmain(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::Thmain, Side::Upper, Coverage::AllZeros, k);
    r.convention = Some(DConvention::Growth);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 2, &mut h) {
        second_order_hypotheses(spec, k, &mut h);
        match (spec.c(k - 1), spec.c(k), spec.c(k + 1)) {
            (Ok(cm), Ok(ck), Ok(cp)) => {
                let d = cp / ck - 1.0;
                if d > 0.0 {
                    r.value = thmain_value(ck, d);
                    r.cross_check = thmain_cubic_value(ck, cp);
                } else if d == 0.0 {
                    r.value = 2.0 * ck.sqrt();
                    r.notes.push("degenerate: d = 0, equals first-order bound at index k".into());
                } else {
                    r.value = 2.0 * cm.sqrt();
                    r.notes.push("fallback: d < 0, first-order value reported".into());
                }
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => h.reject("coefficients", e.to_string()),
        }
    }
    r.with_hypotheses(h)
}

/// Simplified second-order bound with `d = (c_{k+1} - c_k)/c_{k+1}`.
pub fn bound_condsimpl(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::Condsimpl, Side::Upper, Coverage::AllZeros, k);
    r.convention = Some(DConvention::Ratio);
    let mut h = Hypotheses::new();
    if symmetric_only(spec, &mut h) && min_degree(k, 2, &mut h) {
        second_order_hypotheses(spec, k, &mut h);
        match (spec.c(k), spec.c(k + 1)) {
            (Ok(ck), Ok(cp)) => {
                let d = (cp - ck) / cp;
                if d >= 0.0 {
                    r.value = condsimpl_value(ck, d);
                    if d == 0.0 {
                        r.notes.push("degenerate: d = 0, equals first-order bound at index k".into());
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => h.reject("coefficients", e.to_string()),
        }
    }
    r.with_hypotheses(h)
}

/// `κ` in the power-law bound: `k` when `δ >= 1/2`, else `k + 1/2`.
pub fn mnt_kappa(delta: f64, k: usize) -> f64 {
    if delta >= 0.5 {
        k as f64
    } else {
        k as f64 + 0.5
    }
}

/// `2c √(1 - δ^{2/3} / (κ^{1/3} + δ^{1/3})²)`, the bound on `x_kk k^{-δ}`.
pub fn mnt_scaled(c: f64, delta: f64, k: usize) -> f64 {
    let t = delta.cbrt();
    let denom = mnt_kappa(delta, k).cbrt() + t;
    2.0 * c * (1.0 - t * t / (denom * denom)).sqrt()
}

/// Power-law bound for `c_k = c² k^{2δ}`, in the unscaled variable.
pub fn bound_mnt(c: f64, delta: f64, k: usize) -> BoundResult {
    let mut r = BoundResult::new(BoundName::Mnt, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if !(c > 0.0 && delta >= 0.0) {
        h.reject("parameters", format!("requires c > 0 and delta >= 0, got c = {c}, delta = {delta}"));
    } else if min_degree(k, 2, &mut h) {
        r.value = (k as f64).powf(delta) * mnt_scaled(c, delta, k);
        r.notes.push(if delta >= 0.5 {
            "kappa = k (delta >= 1/2)".into()
        } else {
            "kappa = k + 1/2".into()
        });
    }
    r.with_hypotheses(h)
}

/// [`bound_mnt`] for a spec that is exactly a power law.
pub fn bound_mnt_for(spec: &RecurrenceSpec, k: usize) -> BoundResult {
    match spec.power_law_params() {
        Some((c, delta)) => bound_mnt(c, delta, k),
        None => {
            let r = BoundResult::new(BoundName::Mnt, Side::Upper, Coverage::AllZeros, k);
            let mut h = Hypotheses::new();
            h.reject("family", "requires c_k = c^2 k^(2 delta)");
            r.with_hypotheses(h)
        }
    }
}

/// Two-term asymptotic reference for `x_kk` (not a bound), unscaled:
/// `k^δ (2c - c 3^{-1/3} (2δ)^{2/3} i_1 k^{-2/3})`.
pub fn reference_asymptotic_mnt(c: f64, delta: f64, k: usize) -> f64 {
    let kf = k as f64;
    let correction = c * 3f64.cbrt().recip() * (2.0 * delta).powf(2.0 / 3.0) * AIRY_I1 * kf.powf(-2.0 / 3.0);
    kf.powf(delta) * (2.0 * c - correction)
}

/// Closed form of the positive root of
/// `8k²(k+1) - (6k+1)(2k+1)x² + (6k+2)x⁴ - x⁶`.
pub fn marik_sextic_closed_form(k: usize) -> f64 {
    let kf = k as f64;
    let m = 2f64.powf(-1.0 / 6.0) * ((27.0 * kf + 2.0).sqrt() + (27.0 * kf).sqrt()).cbrt();
    let m2 = m * m;
    (m2 - 1.0) * (m2 - 1.0) * (m2 * m2 + 4.0 * m2 + 1.0).sqrt() / (3.0 * 3f64.sqrt() * m2 * m)
}

/// The same root found numerically from the cubic in `x²`.
pub fn marik_sextic_numeric(k: usize) -> Option<f64> {
    let kf = k as f64;
    // w = x² / k: w³ - (6 + 2/k)w² + (6 + 1/k)(2 + 1/k)w - 8(1 + 1/k); root in (0, 2].
    let inv = 1.0 / kf;
    largest_cubic_root(
        -(6.0 + 2.0 * inv),
        (6.0 + inv) * (2.0 + inv),
        -8.0 * (1.0 + inv),
        0.0,
        2.0,
    )
    .map(|w| (kf * w).sqrt())
}

/// `√((4k - 3k^{1/3} + 1)/2)`.
pub fn marik_refined_value(k: usize) -> f64 {
    let kf = k as f64;
    ((4.0 * kf - 3.0 * kf.cbrt() + 1.0) / 2.0).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarikBounds {
    pub sextic: BoundResult,
    pub refined: BoundResult,
}

/// Bounds for monic Hermite polynomials from the fourth-degree form `S_k`.
pub fn bound_marik_hermite(k: usize) -> MarikBounds {
    let mut sextic = BoundResult::new(BoundName::MarikHermite, Side::Upper, Coverage::AllZeros, k);
    let mut refined = BoundResult::new(BoundName::MarikHermiteRefined, Side::Upper, Coverage::AllZeros, k);
    let mut h = Hypotheses::new();
    if min_degree(k, 2, &mut h) {
        sextic.value = marik_sextic_closed_form(k);
        sextic.cross_check = marik_sextic_numeric(k);
        refined.value = marik_refined_value(k);
    }
    MarikBounds {
        sextic: sextic.with_hypotheses(h.clone()),
        refined: refined.with_hypotheses(h),
    }
}

/// Whether `spec` has `c_j = j/2` for every `j <= k + 1`.
pub fn is_hermite_monic(spec: &RecurrenceSpec, k: usize) -> bool {
    spec.form() == RecurrenceForm::SymmetricMonic
        && (0..=k + 1).all(|j| spec.c(j).map(|c| c == j as f64 / 2.0).unwrap_or(false))
}

/// [`bound_marik_hermite`] for a spec that must be monic Hermite.
pub fn bound_marik_hermite_for(spec: &RecurrenceSpec, k: usize) -> MarikBounds {
    let mut b = bound_marik_hermite(k);
    if !is_hermite_monic(spec, k) {
        let mut h = Hypotheses::new();
        h.reject("family", "formula specific to monic Hermite (c_k = k/2)");
        b.sextic = b.sextic.with_hypotheses(h.clone());
        b.refined = b.refined.with_hypotheses(h);
    }
    b
}

/// Every bound that makes sense for the family's form at degree `k`.
pub fn all_bounds(spec: &RecurrenceSpec, k: usize) -> Vec<BoundResult> {
    match spec.form() {
        RecurrenceForm::SymmetricMonic => {
            let marik = bound_marik_hermite_for(spec, k);
            vec![
                bound_first_order(spec, k),
                bound_trivial_lower(spec, k),
                bound_tt2(spec, k),
                bound_vir1(spec, k),
                bound_thmain(spec, k),
                bound_condsimpl(spec, k),
                bound_mnt_for(spec, k),
                marik.sextic,
                marik.refined,
            ]
        }
        RecurrenceForm::UnitIntervalSymmetric => vec![bound_finite_interval(spec, k)],
        RecurrenceForm::HalfLine => {
            let hl = bound_half_line(spec, k);
            vec![hl.lower, hl.upper]
        }
        RecurrenceForm::GeneralMonic => vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_builtin, Sequence};

    fn hermite() -> RecurrenceSpec {
        make_builtin("hermite-monic", &[]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn first_order_examples() {
        let r = bound_first_order(&hermite(), 6);
        assert!(r.is_applicable());
        assert!(close(r.value, 2.0 * 2.5f64.sqrt(), 1e-15));
        let c = RecurrenceSpec::symmetric(Sequence::Constant { value: 1.7 });
        for k in 2..20 {
            assert_eq!(bound_first_order(&c, k).value, 2.0 * 1.7f64.sqrt());
        }
        let dec = make_builtin("table", &[0.0, 3.0, 2.0, 1.0, 0.5]).unwrap();
        let r = bound_first_order(&dec, 4);
        assert_eq!(r.applicability, Verdict::Fails);
        assert_eq!(r.failed_hypothesis.unwrap().index, Some(2));
        let cheb = make_builtin("chebyshev", &[]).unwrap();
        assert_eq!(bound_first_order(&cheb, 4).applicability, Verdict::Fails);
    }

    #[test]
    fn trivial_lower_is_boundary_at_two() {
        let r = bound_trivial_lower(&hermite(), 2);
        assert_eq!(r.applicability, Verdict::Boundary);
        assert_eq!(bound_trivial_lower(&hermite(), 3).applicability, Verdict::Holds);
    }

    #[test]
    fn tt2_examples() {
        let p = make_builtin("probabilist-hermite", &[]).unwrap();
        let r = bound_tt2(&p, 10);
        assert!(r.is_applicable());
        assert_eq!(r.value, 2.0 * 8f64.sqrt());
        let g = make_builtin("geometric", &[2.0]).unwrap();
        for k in 3..20 {
            assert_eq!(bound_tt2(&g, k).applicability, Verdict::Fails);
        }
        // (3/4)c_4 = c_3 exactly: strict hypothesis at equality.
        assert_eq!(bound_tt2(&p, 5).applicability, Verdict::Boundary);
        assert!(bound_tt2(&p, 6).is_applicable());
    }

    #[test]
    fn finite_interval_routing() {
        let cheb = make_builtin("chebyshev", &[]).unwrap();
        for k in 1..30 {
            let r = bound_finite_interval(&cheb, k);
            assert!(r.is_applicable());
            assert_eq!(r.value, 1.0);
            assert_eq!(r.covers, Coverage::AllZeros);
        }
        let heavy = RecurrenceSpec::unit_interval(Sequence::Constant { value: 0.6 });
        let r = bound_finite_interval(&heavy, 8);
        assert!(r.is_applicable());
        assert_eq!(r.covers, Coverage::InnerZeros);
        assert!(close(r.value, 2.0 * (0.4f64 * 0.6).sqrt(), 1e-15));
    }

    #[test]
    fn half_line_examples() {
        let lag = make_builtin("laguerre-normalized", &[0.0]).unwrap();
        let b = bound_half_line(&lag, 2);
        assert!(close(b.lower.value, (3f64.sqrt() - 2f64.sqrt()).powi(2), 1e-15));
        assert!(close(b.upper.value, (3f64.sqrt() + 2f64.sqrt()).powi(2), 1e-15));
        assert_eq!(b.lower.covers, Coverage::FromSecond);
        assert!(b.upper.is_applicable());
        let lag5 = make_builtin("laguerre-normalized", &[5.0]).unwrap();
        assert!(bound_half_line(&lag5, 30).lower.is_applicable());
        let eq = RecurrenceSpec::half_line(
            Sequence::Linear { slope: 1.0, intercept: 1.0 },
            Sequence::Linear { slope: 1.0, intercept: 1.0 },
        );
        let b = bound_half_line(&eq, 4);
        assert_eq!(b.lower.value, 0.0);
    }

    #[test]
    fn vir1_root_finders_agree() {
        let p = make_builtin("probabilist-hermite", &[]).unwrap();
        let r = bound_vir1(&p, 5);
        assert!(r.is_applicable());
        assert!(close(r.value, r.cross_check.unwrap(), 1e-13));
        // Constant coefficients: F = (y - 4c)³, bound 2√c.
        assert!(close(vir1_value(2.0, 2.0, 2.0).unwrap(), 2.0 * 2f64.sqrt(), 1e-5));
    }

    #[test]
    fn thmain_limits_and_dual_paths() {
        // d -> 0: factor ≈ 1 - 4^{-1/3} d^{2/3}.
        let d = 1e-9;
        let v = thmain_value(1.0, d);
        let approx = 2.0 * (1.0 - 4f64.powf(-1.0 / 3.0) * d.powf(2.0 / 3.0)).sqrt();
        assert!((v - approx).abs() < 1e-9);
        assert!(v < 2.0);
        for &(ck, d) in &[(1.0, 1.0), (3.0, 0.5), (10.0, 0.01), (0.2, 7.0)] {
            let closed = thmain_value(ck, d);
            let cubic = thmain_cubic_value(ck, ck * (1.0 + d)).unwrap();
            assert!(close(closed, cubic, 1e-10), "ck = {ck}, d = {d}");
        }
        let g = make_builtin("geometric", &[2.0]).unwrap();
        let r = bound_thmain(&g, 7);
        assert!(r.is_applicable());
        assert!(close(r.value, r.cross_check.unwrap(), 1e-10));
        assert_eq!(r.convention, Some(DConvention::Growth));
    }

    #[test]
    fn thmain_dominated_by_condsimpl_formula() {
        for i in 1..=1000 {
            let d = i as f64 * 0.01;
            assert!(thmain_value(1.0, d) <= condsimpl_value(1.0, d) * (1.0 + 1e-15));
        }
    }

    #[test]
    fn condsimpl_examples() {
        assert_eq!(condsimpl_value(4.0, 0.0), 4.0);
        let r = bound_condsimpl(&hermite(), 6);
        assert!(r.is_applicable());
        let d: f64 = 1.0 / 7.0;
        let expected = 2.0 * (3.0 * (1.0 - d.powf(2.0 / 3.0) / (2f64.cbrt() + d.cbrt()).powi(2))).sqrt();
        assert!(close(r.value, expected, 1e-15));
        assert_eq!(r.convention, Some(DConvention::Ratio));
    }

    #[test]
    fn mnt_examples() {
        assert_eq!(bound_mnt(1.5, 0.0, 10).value, 3.0);
        let k = 9usize;
        let v = bound_mnt(1.0, 0.5, k).value;
        let expected = 2.0 * (k as f64).sqrt()
            * (1.0 - 0.5f64.powf(2.0 / 3.0) / ((k as f64).cbrt() + 0.5f64.cbrt()).powi(2)).sqrt();
        assert!(close(v, expected, 1e-15));
        // Same value through the simplified second-order formula with the
        // elementary lower bound on the growth increment.
        for &delta in &[0.25, 0.5, 1.0, 2.0] {
            for k in 2..60 {
                let ck = (k as f64).powf(2.0 * delta);
                let via_condsimpl = condsimpl_value(ck, 2.0 * delta / mnt_kappa(delta, k));
                assert!(close(bound_mnt(1.0, delta, k).value, via_condsimpl, 1e-12));
            }
        }
        assert_eq!(bound_mnt_for(&make_builtin("geometric", &[]).unwrap(), 5).applicability, Verdict::Fails);
        assert!(bound_mnt_for(&hermite(), 5).is_applicable());
    }

    #[test]
    fn reference_values() {
        assert_eq!(reference_asymptotic_mnt(1.3, 0.0, 50), 2.6);
        let k = 400usize;
        let c = 0.5f64.sqrt();
        let r = reference_asymptotic_mnt(c, 0.5, k);
        let hermite_form = (2.0 * k as f64).sqrt()
            - 0.5f64.sqrt() * 3f64.powf(-1.0 / 3.0) * AIRY_I1 * (k as f64).powf(-1.0 / 6.0);
        assert!(close(r, hermite_form, 1e-13));
        assert!((0.5f64.sqrt() * 3f64.powf(-1.0 / 3.0) * AIRY_I1 - 1.65).abs() < 0.01);
        // δ = 1, c = 1: the scaled correction is 3^{-1/3} 2^{2/3} i_1 k^{-2/3}.
        let k = 1_000_000usize;
        let scaled = reference_asymptotic_mnt(1.0, 1.0, k) / k as f64;
        let correction = 3f64.powf(-1.0 / 3.0) * 2f64.powf(2.0 / 3.0) * AIRY_I1 * 1e-4;
        assert!((2.0 - scaled - correction).abs() < 1e-12);
    }

    #[test]
    fn marik_forms() {
        for k in 2..=100 {
            let closed = marik_sextic_closed_form(k);
            let numeric = marik_sextic_numeric(k).unwrap();
            assert!(close(closed, numeric, 1e-10), "k = {k}");
        }
        let b = bound_marik_hermite_for(&hermite(), 6);
        assert!(b.sextic.is_applicable() && b.refined.is_applicable());
        let p = make_builtin("probabilist-hermite", &[]).unwrap();
        assert_eq!(bound_marik_hermite_for(&p, 6).sextic.applicability, Verdict::Fails);
    }

    #[test]
    fn homogeneity_under_scaling() {
        let lam: f64 = 1.7;
        let base = make_builtin("power-law", &[1.0, 1.0]).unwrap();
        let scaled = make_builtin("power-law", &[lam, 1.0]).unwrap();
        for k in 2..30 {
            for (a, b) in all_bounds(&base, k).iter().zip(all_bounds(&scaled, k).iter()) {
                if a.value.is_finite() && a.name != BoundName::MarikHermite && a.name != BoundName::MarikHermiteRefined {
                    assert!(close(b.value, lam * a.value, 1e-13), "{} k = {k}", a.name);
                }
            }
        }
    }
}
