//! Coefficient sources for three-term recurrences.
//!
//! Every family is stored in one of four normal forms:
//!
//! * [`RecurrenceForm::SymmetricMonic`]: `p_{k+1} = x p_k - c_k p_{k-1}`.
//! * [`RecurrenceForm::GeneralMonic`]: `b_k p_{k+1} = (x - a_k) p_k - c_k p_{k-1}`.
//! * [`RecurrenceForm::UnitIntervalSymmetric`]: the general form with `a_k = 0`
//!   and `b_k + c_k = 1`, i.e. `p_k(1) = 1`.
//! * [`RecurrenceForm::HalfLine`]: `x p_k = -b_k p_{k+1} + (b_k + c_k) p_k - c_k p_{k-1}`,
//!   normalised by `p_k(0) = 1`.
//!
//! In all forms `p_{-1} = 0`, `p_0 = 1` and `c_0 = 0`. Coefficients are
//! produced on demand and validated on access.

use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecurrenceForm {
    SymmetricMonic,
    GeneralMonic,
    UnitIntervalSymmetric,
    HalfLine,
}

impl RecurrenceForm {
    pub fn as_str(self) -> &'static str {
        match self {
            RecurrenceForm::SymmetricMonic => "symmetric-monic",
            RecurrenceForm::GeneralMonic => "general",
            RecurrenceForm::UnitIntervalSymmetric => "unit-interval",
            RecurrenceForm::HalfLine => "half-line",
        }
    }

    /// Whether zeros are symmetric about the origin.
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            RecurrenceForm::SymmetricMonic | RecurrenceForm::UnitIntervalSymmetric
        )
    }
}

/// A single real sequence indexed by `k >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Sequence {
    /// `s_k = value`.
    Constant { value: f64 },
    /// `s_k = slope * k + intercept`.
    Linear { slope: f64, intercept: f64 },
    /// `s_k = c^2 k^{2 delta}`.
    PowerLaw { c: f64, delta: f64 },
    /// `s_k = scale * ratio^{k-1}`.
    Geometric { scale: f64, ratio: f64 },
    /// Explicit values `s_0, s_1, ...`.
    Table { values: Vec<f64> },
}

impl Sequence {
    /// Raw value at `k`, `None` past the end of a table.
    pub fn at(&self, k: usize) -> Option<f64> {
        let kf = k as f64;
        Some(match *self {
            Sequence::Constant { value } => value,
            Sequence::Linear { slope, intercept } => slope * kf + intercept,
            Sequence::PowerLaw { c, delta } => c * c * pow_index(kf, 2.0 * delta),
            Sequence::Geometric { scale, ratio } => scale * ratio.powi(k as i32 - 1),
            Sequence::Table { ref values } => return values.get(k).copied(),
        })
    }

    /// Last valid index, `None` when unbounded.
    pub fn last_index(&self) -> Option<usize> {
        match self {
            Sequence::Table { values } => Some(values.len().saturating_sub(1)),
            _ => None,
        }
    }

    pub fn kind(&self) -> CoefficientKind {
        match self {
            Sequence::Constant { .. } => CoefficientKind::Constant,
            Sequence::Linear { .. } => CoefficientKind::Linear,
            Sequence::PowerLaw { .. } => CoefficientKind::PowerLaw,
            Sequence::Geometric { .. } => CoefficientKind::Geometric,
            Sequence::Table { .. } => CoefficientKind::Table,
        }
    }
}

// Integer exponents go through `powi` so that polynomial growth rates are exact.
fn pow_index(k: f64, exponent: f64) -> f64 {
    if exponent == exponent.trunc() && exponent.abs() < 64.0 {
        k.powi(exponent as i32)
    } else {
        k.powf(exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    Constant,
    Linear,
    PowerLaw,
    Geometric,
    Table,
    /// Separate sequences for `b_k` (and possibly `a_k`) alongside `c_k`.
    Composite,
}

/// One coefficient triple of the general recurrence
/// `b_k p_{k+1} = (x - a_k) p_k - c_k p_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// An immutable coefficient source in one of the normal forms.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSpec {
    form: RecurrenceForm,
    c: Sequence,
    b: Option<Sequence>,
    a: Option<Sequence>,
    label: String,
}

impl RecurrenceSpec {
    pub fn symmetric(c: Sequence) -> Self {
        Self::new(RecurrenceForm::SymmetricMonic, None, None, c)
    }

    pub fn unit_interval(c: Sequence) -> Self {
        Self::new(RecurrenceForm::UnitIntervalSymmetric, None, None, c)
    }

    pub fn half_line(b: Sequence, c: Sequence) -> Self {
        Self::new(RecurrenceForm::HalfLine, None, Some(b), c)
    }

    pub fn general(a: Option<Sequence>, b: Option<Sequence>, c: Sequence) -> Self {
        Self::new(RecurrenceForm::GeneralMonic, a, b, c)
    }

    fn new(form: RecurrenceForm, a: Option<Sequence>, b: Option<Sequence>, c: Sequence) -> Self {
        let label = match c.kind() {
            CoefficientKind::Table => "table".to_string(),
            _ => "custom".to_string(),
        };
        RecurrenceSpec { form, c, b, a, label }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> RecurrenceForm {
        self.form
    }

    pub fn kind(&self) -> CoefficientKind {
        if self.a.is_some() || self.b.is_some() {
            CoefficientKind::Composite
        } else {
            self.c.kind()
        }
    }

    pub fn c_sequence(&self) -> &Sequence {
        &self.c
    }

    pub fn b_sequence(&self) -> Option<&Sequence> {
        self.b.as_ref()
    }

    pub fn a_sequence(&self) -> Option<&Sequence> {
        self.a.as_ref()
    }

    /// Largest `k` for which [`coefficient`](Self::coefficient) can succeed.
    pub fn max_index(&self) -> Option<usize> {
        [Some(&self.c), self.b.as_ref(), self.a.as_ref()]
            .into_iter()
            .flatten()
            .filter_map(Sequence::last_index)
            .min()
    }

    /// Largest degree `k` for which `p_k` can be evaluated (needs `c_{k-1}`).
    pub fn max_degree(&self) -> Option<usize> {
        self.max_index().map(|i| i + 1)
    }

    /// Coefficient triple in the general form `b_k p_{k+1} = (x - a_k) p_k - c_k p_{k-1}`.
    ///
    /// For [`RecurrenceForm::HalfLine`] the triple describes the sign-flipped
    /// polynomials `(-1)^k p_k`, which have positive leading coefficients:
    /// `a_k = b_k + c_k`.
    pub fn coefficient(&self, k: usize) -> Result<Coefficients> {
        let c = self.c_at(k)?;
        let (a, b) = match self.form {
            RecurrenceForm::SymmetricMonic => (0.0, 1.0),
            RecurrenceForm::UnitIntervalSymmetric => (0.0, if k == 0 { 1.0 } else { 1.0 - c }),
            RecurrenceForm::HalfLine => {
                let b = self.seq_at(self.b.as_ref(), k, 1.0)?;
                (b + c, b)
            }
            RecurrenceForm::GeneralMonic => (
                self.seq_at(self.a.as_ref(), k, 0.0)?,
                self.seq_at(self.b.as_ref(), k, 1.0)?,
            ),
        };
        if !(b > 0.0) || !b.is_finite() {
            return Err(self.positivity('b', k, b));
        }
        if !a.is_finite() {
            return Err(self.positivity('a', k, a));
        }
        Ok(Coefficients { a, b, c })
    }

    /// `c_k` alone.
    pub fn c(&self, k: usize) -> Result<f64> {
        self.c_at(k)
    }

    fn c_at(&self, k: usize) -> Result<f64> {
        let raw = self.seq_at(Some(&self.c), k, 0.0)?;
        if k == 0 {
            // Closed forms are not required to vanish at 0; tables are.
            return match self.c {
                Sequence::Table { .. } if raw != 0.0 => Err(self.positivity('c', 0, raw)),
                _ => Ok(0.0),
            };
        }
        if !(raw > 0.0) || !raw.is_finite() {
            return Err(self.positivity('c', k, raw));
        }
        Ok(raw)
    }

    fn seq_at(&self, seq: Option<&Sequence>, k: usize, default: f64) -> Result<f64> {
        match seq {
            None => Ok(default),
            Some(s) => s.at(k).ok_or(Error::CapacityExceeded {
                index: k,
                last: s.last_index().unwrap_or(0),
            }),
        }
    }

    fn positivity(&self, name: char, index: usize, value: f64) -> Error {
        Error::Positivity {
            name,
            index,
            value,
            form: self.form,
        }
    }

    /// `(c, delta)` when `c_k = c^2 k^{2 delta}` holds exactly for `k >= 1`.
    pub fn power_law_params(&self) -> Option<(f64, f64)> {
        if self.form != RecurrenceForm::SymmetricMonic {
            return None;
        }
        match self.c {
            Sequence::PowerLaw { c, delta } => Some((c.abs(), delta)),
            Sequence::Linear { slope, intercept } if intercept == 0.0 && slope > 0.0 => {
                Some((slope.sqrt(), 0.5))
            }
            Sequence::Constant { value } if value > 0.0 => Some((value.sqrt(), 0.0)),
            _ => None,
        }
    }

    /// `c_k` for every `k` in `0..=k_max`.
    pub fn c_values(&self, k_max: usize) -> Result<Vec<f64>> {
        (0..=k_max).map(|k| self.c(k)).collect()
    }
}

pub const BUILTIN_NAMES: [&str; 7] = [
    "hermite-monic",
    "probabilist-hermite",
    "power-law",
    "geometric",
    "chebyshev",
    "laguerre-normalized",
    "table",
];

/// Builds one of the classical families.
///
/// Parameters by name (missing trailing values take the listed defaults):
/// `power-law [c = 1, delta = 1]`, `geometric [ratio = 2, scale = 1]`,
/// `laguerre-normalized [alpha = 0]`, `table [c_0, c_1, ...]`. The other
/// families take no parameters.
pub fn make_builtin(name: &str, params: &[f64]) -> Result<RecurrenceSpec> {
    let arity = |max: usize| -> Result<()> {
        if params.len() > max {
            Err(Error::InvalidParameter(format!(
                "{name} takes at most {max} parameter(s), got {}",
                params.len()
            )))
        } else {
            Ok(())
        }
    };
    let param = |i: usize, default: f64| params.get(i).copied().unwrap_or(default);
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{name}: parameters must be finite"
        )));
    }

    let spec = match name {
        "hermite-monic" => {
            arity(0)?;
            RecurrenceSpec::symmetric(Sequence::Linear {
                slope: 0.5,
                intercept: 0.0,
            })
            .with_label(name)
        }
        "probabilist-hermite" => {
            arity(0)?;
            RecurrenceSpec::symmetric(Sequence::Linear {
                slope: 1.0,
                intercept: 0.0,
            })
            .with_label(name)
        }
        "power-law" => {
            arity(2)?;
            let (c, delta) = (param(0, 1.0), param(1, 1.0));
            if !(c > 0.0) || !(delta >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "power-law needs c > 0 and delta >= 0, got c = {c}, delta = {delta}"
                )));
            }
            RecurrenceSpec::symmetric(Sequence::PowerLaw { c, delta })
                .with_label(format!("power-law(c={c};delta={delta})"))
        }
        "geometric" => {
            arity(2)?;
            let (ratio, scale) = (param(0, 2.0), param(1, 1.0));
            if !(ratio > 0.0) || !(scale > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "geometric needs a positive ratio and scale, got ratio = {ratio}, scale = {scale}"
                )));
            }
            RecurrenceSpec::symmetric(Sequence::Geometric { scale, ratio })
                .with_label(format!("geometric(ratio={ratio};scale={scale})"))
        }
        "chebyshev" => {
            arity(0)?;
            RecurrenceSpec::unit_interval(Sequence::Constant { value: 0.5 }).with_label(name)
        }
        "laguerre-normalized" => {
            arity(1)?;
            let alpha = param(0, 0.0);
            if !(alpha > -1.0) {
                return Err(Error::InvalidParameter(format!(
                    "laguerre-normalized needs alpha > -1, got {alpha}"
                )));
            }
            RecurrenceSpec::half_line(
                Sequence::Linear {
                    slope: 1.0,
                    intercept: alpha + 1.0,
                },
                Sequence::Linear {
                    slope: 1.0,
                    intercept: 0.0,
                },
            )
            .with_label(format!("laguerre-normalized(alpha={alpha})"))
        }
        "table" => {
            if params.is_empty() {
                return Err(Error::InvalidParameter("table needs at least c_0".into()));
            }
            RecurrenceSpec::symmetric(Sequence::Table {
                values: params.to_vec(),
            })
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    Ok(spec)
}

/// Which relative-increment convention a quantity uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DConvention {
    /// `d_k = (c_k - c_{k-1}) / c_k`.
    Ratio,
    /// `d_k = c_k / c_{k-1} - 1`.
    Growth,
}

impl DConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            DConvention::Ratio => "d_ratio",
            DConvention::Growth => "d_growth",
        }
    }
}

/// Relative increments of a nondecreasing `c_k`, for `1 <= k <= k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceProfile {
    c: Vec<f64>,
}

impl DifferenceProfile {
    pub fn k_max(&self) -> usize {
        self.c.len() - 1
    }

    /// `delta_k = c_k - c_{k-1}`.
    pub fn delta(&self, k: usize) -> f64 {
        self.check(k);
        self.c[k] - self.c[k - 1]
    }

    /// `(c_k - c_{k-1}) / c_k`; equals 1 at `k = 1`.
    pub fn d_ratio(&self, k: usize) -> f64 {
        self.check(k);
        (self.c[k] - self.c[k - 1]) / self.c[k]
    }

    /// `c_k / c_{k-1} - 1`; infinite at `k = 1`.
    pub fn d_growth(&self, k: usize) -> f64 {
        self.check(k);
        if self.c[k - 1] == 0.0 {
            f64::INFINITY
        } else {
            self.c[k] / self.c[k - 1] - 1.0
        }
    }

    pub fn d(&self, k: usize, convention: DConvention) -> f64 {
        match convention {
            DConvention::Ratio => self.d_ratio(k),
            DConvention::Growth => self.d_growth(k),
        }
    }

    pub fn d_ratio_seq(&self) -> Vec<f64> {
        (1..=self.k_max()).map(|k| self.d_ratio(k)).collect()
    }

    pub fn d_growth_seq(&self) -> Vec<f64> {
        (1..=self.k_max()).map(|k| self.d_growth(k)).collect()
    }

    fn check(&self, k: usize) {
        assert!(
            (1..=self.k_max()).contains(&k),
            "difference index {k} outside 1..={}",
            self.k_max()
        );
    }
}

pub fn difference_profile(spec: &RecurrenceSpec, k_max: usize) -> Result<DifferenceProfile> {
    if spec.form() != RecurrenceForm::SymmetricMonic {
        return Err(Error::FormMismatch {
            what: "difference_profile",
            expected: RecurrenceForm::SymmetricMonic,
            found: spec.form(),
        });
    }
    let c = spec.c_values(k_max.max(1))?;
    if let Some(k) = (2..c.len()).find(|&k| c[k] < c[k - 1]) {
        return Err(Error::Decreasing { index: k });
    }
    Ok(DifferenceProfile { c })
}

/// A symmetric table `c_0 = 0 < c_1 <= c_2 <= ...` of length `len` with
/// occasional flat steps.
pub fn random_nondecreasing_table<R: Rng + ?Sized>(rng: &mut R, len: usize) -> RecurrenceSpec {
    let mut values = vec![0.0, rng.gen_range(0.1..3.0)];
    while values.len() < len {
        let last = values[values.len() - 1];
        let step = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..2.0) };
        values.push(last + step);
    }
    values.truncate(len.max(2));
    RecurrenceSpec::symmetric(Sequence::Table { values }).with_label("random-nondecreasing")
}

/// A symmetric table whose growth increments `d_k = c_k/c_{k-1} - 1` move
/// inside the window that guarantees both second-order hypotheses:
/// `max(d/(2(1+d)), d(1-2√d+2d)/(1+d)) < d' < d(1+2√d+2d)/(1+d)`, capped at 1.
pub fn random_condnew_table<R: Rng + ?Sized>(rng: &mut R, len: usize) -> RecurrenceSpec {
    let c1 = rng.gen_range(0.5..2.0);
    let mut values = vec![0.0, c1];
    let mut d: f64 = rng.gen_range(0.55..1.0);
    while values.len() < len {
        let last = values[values.len() - 1];
        values.push(last * (1.0 + d));
        let s = d.sqrt();
        let lower = (d / (2.0 * (1.0 + d))).max(d * (1.0 - 2.0 * s + 2.0 * d) / (1.0 + d));
        let upper = (d * (1.0 + 2.0 * s + 2.0 * d) / (1.0 + d)).min(1.0);
        d = lower + rng.gen_range(0.05..0.95) * (upper - lower);
    }
    values.truncate(len.max(2));
    RecurrenceSpec::symmetric(Sequence::Table { values }).with_label("random-condnew")
}
