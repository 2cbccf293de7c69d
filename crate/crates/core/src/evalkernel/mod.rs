//! Overflow-safe evaluation of `p_k(x)` and of the Turán-type expressions.
//!
//! Values are carried as mantissas with a shared binary exponent. After every
//! recurrence step the pair `(p_{k-1}, p_k)` is multiplied by a power of two
//! whenever its larger entry leaves `[2^-64, 2^64]`, which never changes signs
//! and introduces no rounding.

mod compensated;
mod scalar;

pub use compensated::Dd;
pub use scalar::{exponent_of, ldexp, Scalar, Tracked};

use crate::error::{Error, Result};
use crate::families::{RecurrenceForm, RecurrenceSpec};
use scalar::binomial;

const RESCALE_HIGH: f64 = 18446744073709551616.0; // 2^64
const RESCALE_LOW: f64 = 1.0 / 18446744073709551616.0;

/// Scaled values of `p_{k-1}(x)` and `p_k(x)`.
///
/// `prev` and `curr` are in the family's native normalisation (for half-line
/// families `p_k(0) = 1`, so leading coefficients alternate in sign).
/// `sign_changes` is always counted on the positive-leading-coefficient
/// sequence, so it equals the number of zeros of `p_k` strictly greater than
/// `x` in every form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalState {
    pub x: f64,
    pub prev: f64,
    pub curr: f64,
    pub scale_exp: i64,
    pub k: usize,
    pub sign_changes: usize,
    /// `p_k(x) == 0` exactly.
    pub at_zero: bool,
}

impl EvalState {
    pub fn p_prev(&self) -> f64 {
        ldexp(self.prev, self.scale_exp)
    }

    pub fn p_curr(&self) -> f64 {
        ldexp(self.curr, self.scale_exp)
    }

    /// `t = p_{k-1}(x) / p_k(x)`.
    pub fn ratio_t(&self) -> Result<f64> {
        if self.curr == 0.0 {
            return Err(Error::ZeroOfP { k: self.k, x: self.x });
        }
        Ok(self.prev / self.curr)
    }

    /// The same values with mantissas multiplied by `2^shift`.
    pub fn rescaled(&self, shift: i64) -> EvalState {
        EvalState {
            prev: ldexp(self.prev, shift),
            curr: ldexp(self.curr, shift),
            scale_exp: self.scale_exp - shift,
            ..*self
        }
    }
}

/// Forward recurrence up to degree `k`.
///
/// Zero entries follow the interlacing convention: an intermediate
/// `p_i(x) = 0` takes the sign opposite to `p_{i-1}(x)`, while `p_k(x) = 0`
/// keeps the sign of `p_{k-1}(x)` and sets `at_zero`. With this rule
/// `sign_changes` counts zeros strictly greater than `x` even when `x` is a
/// zero of some `p_i`.
pub fn eval_sequence(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<EvalState> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("evaluation point {x} is not finite")));
    }
    let mut prev = 0.0;
    let mut curr = 1.0;
    let mut scale_exp = 0i64;
    let mut sign = 1i8;
    let mut sign_changes = 0usize;
    let mut at_zero = false;
    for j in 0..k {
        let co = spec.coefficient(j)?;
        let next = ((x - co.a) * curr - co.c * prev) / co.b;
        prev = curr;
        curr = next;
        let s = if curr > 0.0 {
            1
        } else if curr < 0.0 {
            -1
        } else if j + 1 < k {
            -sign
        } else {
            at_zero = true;
            sign
        };
        if s != sign {
            sign_changes += 1;
        }
        sign = s;
        let m = prev.abs().max(curr.abs());
        if !(RESCALE_LOW..=RESCALE_HIGH).contains(&m) {
            let shift = -exponent_of(m);
            prev = ldexp(prev, shift);
            curr = ldexp(curr, shift);
            scale_exp -= shift;
        }
    }
    if spec.form() == RecurrenceForm::HalfLine {
        if k % 2 == 1 {
            curr = -curr;
        } else {
            prev = -prev;
        }
    }
    Ok(EvalState {
        x,
        prev,
        curr,
        scale_exp,
        k,
        sign_changes,
        at_zero,
    })
}

/// `t = p_{k-1}(x) / p_k(x)`.
pub fn ratio_t(state: &EvalState) -> Result<f64> {
    state.ratio_t()
}

/// Consecutive values `p_first(x), ..., p_last(x)` sharing one exponent.
///
/// `first` may be `-1` (for `p_{-1} = 0`). The window is normalised so that
/// its largest entry has binary exponent 0; each entry is a fresh leaf for
/// [`Tracked`] magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledWindow<S> {
    pub first: isize,
    pub values: Vec<S>,
    pub exponent: i64,
}

impl<S: Scalar> ScaledWindow<S> {
    /// Scaled `p_i(x)`.
    pub fn p(&self, i: isize) -> S {
        self.values[(i - self.first) as usize]
    }

    pub fn slice(&self, from: isize, len: usize) -> &[S] {
        let start = (from - self.first) as usize;
        &self.values[start..start + len]
    }
}

pub fn eval_window<S: Scalar>(
    spec: &RecurrenceSpec,
    x: f64,
    first: isize,
    last: usize,
) -> Result<ScaledWindow<S>> {
    assert!(first >= -1 && first <= last as isize, "bad window {first}..={last}");
    let xs = S::from_f64(x);
    let mut values: Vec<S> = Vec::with_capacity((last as isize - first + 1) as usize);
    let mut prev = S::zero();
    let mut curr = S::from_f64(1.0);
    let mut exponent = 0i64;
    if first == -1 {
        values.push(prev);
    }
    if first <= 0 {
        values.push(curr);
    }
    for j in 0..last {
        let co = spec.coefficient(j)?;
        let next = ((xs - S::from_f64(co.a)) * curr - S::from_f64(co.c) * prev) / S::from_f64(co.b);
        prev = curr;
        curr = next;
        if (j + 1) as isize >= first {
            values.push(curr);
        }
        let m = prev.to_f64().abs().max(curr.to_f64().abs());
        if !(RESCALE_LOW..=RESCALE_HIGH).contains(&m) {
            let shift = -exponent_of(m);
            prev = prev.ldexp(shift);
            curr = curr.ldexp(shift);
            for v in values.iter_mut() {
                *v = v.ldexp(shift);
            }
            exponent -= shift;
        }
    }
    let m = values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    let shift = -exponent_of(m);
    let half_line = spec.form() == RecurrenceForm::HalfLine;
    for (offset, v) in values.iter_mut().enumerate() {
        let index = first + offset as isize;
        let mut w = v.ldexp(shift);
        if half_line && index.rem_euclid(2) == 1 {
            w = -w;
        }
        *v = w.leaf();
    }
    Ok(ScaledWindow {
        first,
        values,
        exponent: exponent - shift,
    })
}

/// `½ Σ_{j=0}^{2m} (-1)^{j+m} C(2m, j) u_j u_{2m-j}` on a window of length `2m+1`.
///
/// Terms are paired by symmetry; for `m = 1` this reduces to
/// `u_1 u_1 - u_0 u_2` operation for operation.
pub fn turan_m_expr<S: Scalar>(u: &[S], m: usize) -> S {
    debug_assert_eq!(u.len(), 2 * m + 1);
    let mut acc = S::from_f64(0.5 * binomial(2 * m, m)) * (u[m] * u[m]);
    for j in 0..m {
        let sign = if (j + m) & 1 == 0 { 1.0 } else { -1.0 };
        acc = acc + S::from_f64(sign * binomial(2 * m, j)) * (u[j] * u[2 * m - j]);
    }
    acc
}

/// `4(u_1² - u_0u_2)(u_2² - u_1u_3) - (u_1u_2 - u_0u_3)²` on a window of length 4.
pub fn turan_s_expr<S: Scalar>(u: &[S]) -> S {
    debug_assert_eq!(u.len(), 4);
    let t0 = u[1] * u[1] - u[0] * u[2];
    let t1 = u[2] * u[2] - u[1] * u[3];
    let cross = u[1] * u[2] - u[0] * u[3];
    S::from_f64(4.0) * t0 * t1 - cross * cross
}

/// `q_j = p_{j+1} - c_j p_{j-1}` from a window covering `j-1..=j+1`.
pub fn delta_p<S: Scalar>(w: &ScaledWindow<S>, spec: &RecurrenceSpec, j: usize) -> Result<S> {
    let j = j as isize;
    Ok(w.p(j + 1) - S::from_f64(spec.c(j as usize)?) * w.p(j - 1))
}

/// `T_k(ΔP) = q_k² - q_{k-1} q_{k+1}` from a window covering `k-2..=k+2`.
pub fn delta_turan_expr<S: Scalar>(w: &ScaledWindow<S>, spec: &RecurrenceSpec, k: usize) -> Result<S> {
    let qm = delta_p(w, spec, k - 1)?;
    let q0 = delta_p(w, spec, k)?;
    let qp = delta_p(w, spec, k + 1)?;
    Ok(q0 * q0 - qm * qp)
}

/// A Turán-type quantity with its cancellation scale.
///
/// The true value is `mantissa · 2^exponent`; `magnitude` is on the same
/// scale and bounds the sum of absolute values of the terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuranValue {
    pub mantissa: f64,
    pub exponent: i64,
    pub magnitude: f64,
    pub order: usize,
    /// Divided by `p_k(x)²` (a quadratic form in `t`).
    pub normalized: bool,
}

impl TuranValue {
    fn from_tracked(t: Tracked, exponent: i64, order: usize, normalized: bool) -> Self {
        TuranValue {
            mantissa: t.value,
            exponent,
            magnitude: t.magnitude,
            order,
            normalized,
        }
    }

    /// Plain value; may overflow to infinity.
    pub fn value(&self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }

    /// `mantissa / magnitude`, a value in `[-1, 1]`.
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.mantissa / self.magnitude
        }
    }

    /// Nonnegative up to `rel_tol` times the term magnitude.
    pub fn is_nonneg(&self, rel_tol: f64) -> bool {
        self.mantissa >= -rel_tol * self.magnitude
    }
}

fn require_symmetric(spec: &RecurrenceSpec, what: &'static str) -> Result<()> {
    if spec.form() != RecurrenceForm::SymmetricMonic {
        return Err(Error::FormMismatch {
            what,
            expected: RecurrenceForm::SymmetricMonic,
            found: spec.form(),
        });
    }
    Ok(())
}

fn require_degree(k: usize, min: usize) -> Result<()> {
    if k < min {
        return Err(Error::Degree { k, min });
    }
    Ok(())
}

/// `T_k = p_k² - p_{k-1} p_{k+1}` at matched scale.
pub fn turan_t(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    let w = eval_window::<Tracked>(spec, x, k as isize - 1, k + 1)?;
    let t = turan_m_expr(w.slice(k as isize - 1, 3), 1);
    Ok(TuranValue::from_tracked(t, 2 * w.exponent, 1, false))
}

/// `T^{(m)}` on an explicit window `u_{k-m}, ..., u_{k+m}`.
pub fn turan_tm(u: &[f64], m: usize) -> Result<TuranValue> {
    if u.len() != 2 * m + 1 {
        return Err(Error::WindowLength {
            expected: 2 * m + 1,
            got: u.len(),
        });
    }
    let u: Vec<Tracked> = u.iter().map(|&v| Tracked::new(v)).collect();
    Ok(TuranValue::from_tracked(turan_m_expr(&u, m), 0, m, false))
}

/// `S` on an explicit window `u_{k-1}, ..., u_{k+2}`.
pub fn turan_s(u: &[f64]) -> Result<TuranValue> {
    if u.len() != 4 {
        return Err(Error::WindowLength {
            expected: 4,
            got: u.len(),
        });
    }
    let u: Vec<Tracked> = u.iter().map(|&v| Tracked::new(v)).collect();
    Ok(TuranValue::from_tracked(turan_s_expr(&u), 0, 2, false))
}

/// `T_k^{(m)}` on the family's own values.
pub fn turan_tm_at(spec: &RecurrenceSpec, k: usize, m: usize, x: f64) -> Result<TuranValue> {
    let first = k as isize - m as isize;
    if first < -1 {
        return Err(Error::Degree { k, min: m.saturating_sub(1) });
    }
    let w = eval_window::<Tracked>(spec, x, first, k + m)?;
    let t = turan_m_expr(w.slice(first, 2 * m + 1), m);
    Ok(TuranValue::from_tracked(t, 2 * w.exponent, m, false))
}

/// `S_k` on the family's own values `p_{k-1}, ..., p_{k+2}`.
pub fn turan_s_at(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    let w = eval_window::<Tracked>(spec, x, k as isize - 1, k + 2)?;
    let s = turan_s_expr(w.slice(k as isize - 1, 4));
    Ok(TuranValue::from_tracked(s, 4 * w.exponent, 2, false))
}

/// Unnormalised `T_k^{(2)} = 3p_k² - 4p_{k-1}p_{k+1} + p_{k-2}p_{k+2}`, `k >= 1`.
pub fn turan_t2(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    require_degree(k, 1)?;
    turan_tm_at(spec, k, 2, x)
}

/// Unnormalised `T_k(ΔP)` with `q_k = p_{k+1} - c_k p_{k-1}`, `k >= 1`.
pub fn turan_delta(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    require_symmetric(spec, "turan_delta")?;
    require_degree(k, 1)?;
    let w = eval_window::<Tracked>(spec, x, k as isize - 2, k + 2)?;
    let t = delta_turan_expr(&w, spec, k)?;
    Ok(TuranValue::from_tracked(t, 2 * w.exponent, 1, false))
}

/// `p_k^{-2} T_k(ΔP) = c_k(4c_k - x²)t² - x(2c_{k+1} + 2c_k - x²)t + 4c_{k+1} - x²`.
///
/// When `p_k(x) = 0` exactly the unnormalised value from [`turan_delta`] is
/// returned instead (`normalized = false`).
pub fn turan_delta_form(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    require_symmetric(spec, "turan_delta_form")?;
    require_degree(k, 1)?;
    let state = eval_sequence(spec, k, x)?;
    if state.curr == 0.0 {
        return turan_delta(spec, k, x);
    }
    let t = Tracked::new(state.ratio_t()?);
    let ck = Tracked::new(spec.c(k)?);
    let ck1 = Tracked::new(spec.c(k + 1)?);
    let xs = Tracked::new(x);
    let x2 = xs * xs;
    let four = Tracked::new(4.0);
    let two = Tracked::new(2.0);
    let q = ck * (four * ck - x2) * t * t - xs * (two * ck1 + two * ck - x2) * t + four * ck1 - x2;
    Ok(TuranValue::from_tracked(q, 0, 1, true))
}

/// `c_{k-1} p_k^{-2} T_k^{(2)} =
/// c_k(4c_{k-1} - x²)t² - x(4c_{k-1} - c_k + c_{k+1} - x²)t + 3c_{k-1} + c_{k+1} - x²`.
pub fn turan_t2_form(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<TuranValue> {
    require_symmetric(spec, "turan_t2_form")?;
    require_degree(k, 2)?;
    let state = eval_sequence(spec, k, x)?;
    let t = Tracked::new(state.ratio_t()?);
    let cm = Tracked::new(spec.c(k - 1)?);
    let ck = Tracked::new(spec.c(k)?);
    let cp = Tracked::new(spec.c(k + 1)?);
    let xs = Tracked::new(x);
    let x2 = xs * xs;
    let four = Tracked::new(4.0);
    let three = Tracked::new(3.0);
    let q = ck * (four * cm - x2) * t * t - xs * (four * cm - ck + cp - x2) * t + three * cm + cp - x2;
    Ok(TuranValue::from_tracked(q, 0, 2, true))
}
