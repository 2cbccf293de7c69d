//! Ground-truth zeros of `p_k` and Rayleigh-quotient lower certificates.
//!
//! The zeros of `p_k` are the eigenvalues of the `k × k` Jacobi matrix with
//! diagonal `a_i` and off-diagonal `√(b_i c_{i+1})`. They are located by
//! bisection on the Sturm count, which is read off the scaled recurrence
//! itself ([`crate::evalkernel::eval_sequence`]).

use crate::error::{Error, Result};
use crate::evalkernel::{eval_sequence, eval_window, Dd, Scalar};
use crate::families::RecurrenceSpec;

/// Symmetric tridiagonal matrix whose eigenvalues are the zeros of `p_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub k: usize,
}

impl JacobiMatrix {
    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.k {
            let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let right = if i + 1 < self.k { self.offdiag[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// `v^T J v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.k);
        let diag: f64 = self.diag.iter().zip(v).map(|(d, x)| d * x * x).sum();
        let off: f64 = self
            .offdiag
            .iter()
            .enumerate()
            .map(|(i, b)| b * v[i] * v[i + 1])
            .sum();
        diag + 2.0 * off
    }

    /// `J v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < self.k {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

pub fn jacobi_matrix(spec: &RecurrenceSpec, k: usize) -> Result<JacobiMatrix> {
    if k == 0 {
        return Err(Error::Degree { k, min: 1 });
    }
    let mut diag = Vec::with_capacity(k);
    let mut offdiag = Vec::with_capacity(k - 1);
    for i in 0..k {
        let co = spec.coefficient(i)?;
        diag.push(co.a);
        if i + 1 < k {
            let product = co.b * spec.coefficient(i + 1)?.c;
            if !(product > 0.0) {
                return Err(Error::Positivity {
                    name: 'c',
                    index: i + 1,
                    value: product,
                    form: spec.form(),
                });
            }
            offdiag.push(product.sqrt());
        }
    }
    Ok(JacobiMatrix { diag, offdiag, k })
}

/// Number of zeros of `p_k` strictly greater than `x`.
pub fn sturm_count(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<usize> {
    Ok(eval_sequence(spec, k, x)?.sign_changes)
}

/// A bisection interval `(lo, hi]` known to contain one zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn mid(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Zeros `x_{1k} < ... < x_{kk}`: certified bisection brackets and
/// Newton-polished point values inside them.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<f64>,
    pub brackets: Vec<Enclosure>,
    pub k: usize,
}

impl ZeroSet {
    pub fn smallest(&self) -> f64 {
        self.zeros[0]
    }

    pub fn largest(&self) -> f64 {
        self.zeros[self.k - 1]
    }

    pub fn interval(&self, i: usize) -> Enclosure {
        self.brackets[i]
    }
}

/// Shared bisection state: every Sturm count narrows the brackets of all zeros.
struct Bisector<'a> {
    spec: &'a RecurrenceSpec,
    k: usize,
    tol: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> Bisector<'a> {
    fn new(spec: &'a RecurrenceSpec, k: usize, tol: f64) -> Result<Self> {
        if !(tol >= 1e-14) || !tol.is_finite() {
            return Err(Error::Tolerance(tol));
        }
        let (lo, hi) = jacobi_matrix(spec, k)?.gershgorin();
        let pad = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        let (lo, hi) = (lo - pad, hi + pad);
        if sturm_count(spec, k, lo)? != k || sturm_count(spec, k, hi)? != 0 {
            return Err(Error::Bracket(format!(
                "Sturm counts at the Gershgorin bracket [{lo}, {hi}] do not enclose all {k} zeros"
            )));
        }
        Ok(Bisector {
            spec,
            k,
            tol,
            lower: vec![lo; k],
            upper: vec![hi; k],
        })
    }

    /// Narrows the bracket of zero `i` (0-based, ascending) to tolerance.
    fn refine(&mut self, i: usize) -> Result<Enclosure> {
        loop {
            let (a, b) = (self.lower[i], self.upper[i]);
            let mid = a + 0.5 * (b - a);
            let scale = 1.0 + a.abs().min(b.abs());
            if b - a <= self.tol * scale || mid <= a || mid >= b {
                return Ok(Enclosure { lo: a, hi: b });
            }
            let above = sturm_count(self.spec, self.k, mid)?;
            // Zeros with 0-based index < k - above lie at or below mid.
            let split = self.k - above;
            for j in 0..split {
                if mid < self.upper[j] {
                    self.upper[j] = mid;
                }
            }
            for j in split..self.k {
                if mid > self.lower[j] {
                    self.lower[j] = mid;
                }
            }
        }
    }
}

/// All zeros of `p_k`, each enclosed to `|interval| <= tol (1 + |zero|)`.
pub fn zeros(spec: &RecurrenceSpec, k: usize, tol: f64) -> Result<ZeroSet> {
    let mut bis = Bisector::new(spec, k, tol)?;
    let mut brackets = Vec::with_capacity(k);
    for i in (0..k).rev() {
        brackets.push(bis.refine(i)?);
    }
    brackets.reverse();
    let zeros = brackets
        .iter()
        .map(|&e| polish(spec, k, e))
        .collect::<Result<_>>()?;
    Ok(ZeroSet { zeros, brackets, k })
}

/// `p_k(x) / p_k'(x)`, or `None` when the derivative vanishes.
fn newton_correction(spec: &RecurrenceSpec, k: usize, x: f64) -> Result<Option<f64>> {
    let (mut p0, mut p1) = (0.0f64, 1.0f64);
    let (mut d0, mut d1) = (0.0f64, 0.0f64);
    for j in 0..k {
        let co = spec.coefficient(j)?;
        let p2 = ((x - co.a) * p1 - co.c * p0) / co.b;
        let d2 = ((x - co.a) * d1 + p1 - co.c * d0) / co.b;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
        let m = p1.abs().max(d1.abs());
        if m > 1e150 || (m < 1e-150 && m > 0.0) {
            let s = m.recip();
            (p0, p1, d0, d1) = (p0 * s, p1 * s, d0 * s, d1 * s);
        }
    }
    Ok((d1 != 0.0 && d1.is_finite()).then(|| p1 / d1))
}

/// A point estimate of the zero in `e`: safeguarded Newton steps from the
/// midpoint, kept only while they stay inside the bracket.
pub fn polish(spec: &RecurrenceSpec, k: usize, e: Enclosure) -> Result<f64> {
    let mut x = e.mid();
    for _ in 0..4 {
        let Some(step) = newton_correction(spec, k, x)? else {
            break;
        };
        let next = x - step;
        if !(next >= e.lo && next <= e.hi) || next == x {
            break;
        }
        x = next;
    }
    // Newton in f64 can stall an ulp away; settle on the neighbour with the
    // smallest |p_k / p_{k-1}| in double-double arithmetic.
    let residual = |x: f64| -> Result<f64> {
        let w = eval_window::<Dd>(spec, x, k as isize - 1, k)?;
        Ok((w.p(k as isize) / w.p(k as isize - 1)).to_f64().abs())
    };
    let mut best = residual(x)?;
    for _ in 0..8 {
        let mut moved = false;
        for y in [adjacent(x, -1.0), adjacent(x, 1.0)] {
            if y >= e.lo && y <= e.hi {
                let r = residual(y)?;
                if r < best {
                    best = r;
                    x = y;
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
    Ok(x)
}

/// The next representable value from `x` towards `dir`.
fn adjacent(x: f64, dir: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1).copysign(dir);
    }
    let bits = x.to_bits();
    if (x > 0.0) == (dir > 0.0) {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

/// Enclosure of the `i`-th smallest zero (1-based).
pub fn zero_at(spec: &RecurrenceSpec, k: usize, i: usize, tol: f64) -> Result<Enclosure> {
    if i == 0 || i > k {
        return Err(Error::InvalidParameter(format!(
            "zero index {i} outside 1..={k}"
        )));
    }
    Bisector::new(spec, k, tol)?.refine(i - 1)
}

/// Enclosures of `x_{1k}` and `x_{kk}`.
pub fn extreme_zeros(spec: &RecurrenceSpec, k: usize, tol: f64) -> Result<(Enclosure, Enclosure)> {
    let mut bis = Bisector::new(spec, k, tol)?;
    let top = bis.refine(k - 1)?;
    let bottom = bis.refine(0)?;
    Ok((bottom, top))
}

/// A unit vector and its Rayleigh quotient, a lower bound on `x_kk`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayleighCertificate {
    pub vector: Vec<f64>,
    pub value: f64,
}

/// Rayleigh-quotient lower certificate for `x_kk`.
///
/// With no vector supplied, `3⌈log₂ k⌉ + 10` power-iteration steps on the
/// shifted Jacobi matrix are taken from the uniform vector. The value is a
/// lower bound on `x_kk` for any vector; convergence only affects sharpness.
pub fn rayleigh_lower(
    spec: &RecurrenceSpec,
    k: usize,
    vector: Option<&[f64]>,
) -> Result<RayleighCertificate> {
    let j = jacobi_matrix(spec, k)?;
    let v = match vector {
        Some(v) => {
            if v.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "certificate vector has length {}, expected {k}",
                    v.len()
                )));
            }
            normalized(v)?
        }
        None => power_iteration(&j),
    };
    let value = j.quadratic_form(&v);
    Ok(RayleighCertificate { vector: v, value })
}

fn normalized(v: &[f64]) -> Result<Vec<f64>> {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::ZeroVector);
    }
    let norm = v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt() * scale;
    Ok(v.iter().map(|x| x / norm).collect())
}

fn power_iteration(j: &JacobiMatrix) -> Vec<f64> {
    let k = j.k;
    let (lo, _) = j.gershgorin();
    let steps = 3 * (k as f64).log2().ceil() as usize + 10;
    let mut v = vec![1.0 / (k as f64).sqrt(); k];
    for _ in 0..steps {
        let w: Vec<f64> = j
            .apply(&v)
            .into_iter()
            .zip(&v)
            .map(|(jv, x)| jv - lo * x)
            .collect();
        match normalized(&w) {
            Ok(w) => v = w,
            Err(_) => break,
        }
    }
    v
}

/// Unit eigenvector of the Jacobi matrix for an (approximate) eigenvalue
/// `lambda`, from the orthonormal-polynomial recurrence.
pub fn eigenvector_at(spec: &RecurrenceSpec, k: usize, lambda: f64) -> Result<Vec<f64>> {
    let j = jacobi_matrix(spec, k)?;
    let mut v = Vec::with_capacity(k);
    v.push(1.0);
    for i in 0..k.saturating_sub(1) {
        let prev = if i > 0 { j.offdiag[i - 1] * v[i - 1] } else { 0.0 };
        let next = ((lambda - j.diag[i]) * v[i] - prev) / j.offdiag[i];
        v.push(next);
        if next.abs() > 1e150 {
            for x in v.iter_mut() {
                *x *= 1e-150;
            }
        }
    }
    normalized(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_builtin, Sequence};
    use proptest::prelude::*;

    fn hermite() -> RecurrenceSpec {
        make_builtin("hermite-monic", &[]).unwrap()
    }

    #[test]
    fn jacobi_examples() {
        let j = jacobi_matrix(&hermite(), 2).unwrap();
        assert_eq!(j.diag, vec![0.0, 0.0]);
        assert_eq!(j.offdiag, vec![0.5f64.sqrt()]);

        let j = jacobi_matrix(&make_builtin("chebyshev", &[]).unwrap(), 3).unwrap();
        assert_eq!(j.diag, vec![0.0; 3]);
        assert_eq!(j.offdiag, vec![0.5f64.sqrt(), 0.5]);

        let j = jacobi_matrix(&make_builtin("laguerre-normalized", &[0.0]).unwrap(), 2).unwrap();
        assert_eq!(j.diag, vec![1.0, 3.0]);
        assert_eq!(j.offdiag, vec![1.0]);
        assert!(matches!(jacobi_matrix(&hermite(), 0), Err(Error::Degree { .. })));
    }

    #[test]
    fn sturm_examples() {
        let h = hermite();
        assert_eq!(sturm_count(&h, 3, 1.0).unwrap(), 1);
        let (lo, hi) = jacobi_matrix(&h, 9).unwrap().gershgorin();
        assert_eq!(sturm_count(&h, 9, lo - 1e-9).unwrap(), 9);
        assert_eq!(sturm_count(&h, 9, hi + 1e-9).unwrap(), 0);
    }

    #[test]
    fn chebyshev_zeros_match_cosines() {
        let cheb = make_builtin("chebyshev", &[]).unwrap();
        let z = zeros(&cheb, 8, 1e-14).unwrap();
        for i in 1..=8 {
            let exact = ((2 * (9 - i) - 1) as f64 * std::f64::consts::PI / 16.0).cos();
            assert!((z.zeros[i - 1] - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_two_zeros() {
        for spec in [
            hermite(),
            make_builtin("power-law", &[1.3, 0.7]).unwrap(),
            make_builtin("geometric", &[3.0]).unwrap(),
        ] {
            let z = zeros(&spec, 2, 1e-14).unwrap();
            let r = spec.c(1).unwrap().sqrt();
            assert!((z.zeros[1] - r).abs() <= 2e-14 * (1.0 + r));
            assert!((z.zeros[0] + r).abs() <= 2e-14 * (1.0 + r));
        }
        let lag = make_builtin("laguerre-normalized", &[0.0]).unwrap();
        let z = zeros(&lag, 2, 1e-14).unwrap();
        assert!((z.zeros[0] - (2.0 - 2f64.sqrt())).abs() < 1e-13);
        assert!((z.zeros[1] - (2.0 + 2f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn hermite_six_largest_zero() {
        // Independent oracle: bisection on the explicit sextic
        // x⁶ - 7.5x⁴ + 11.25x² - 1.875 over [2, 3].
        let f = |x: f64| ((x * x - 7.5) * x * x + 11.25) * x * x - 1.875;
        let (mut a, mut b) = (2.0f64, 3.0f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let (_, top) = extreme_zeros(&hermite(), 6, 1e-14).unwrap();
        assert!((top.mid() - a).abs() < 1e-12);
        assert!((top.mid() - 2.350605).abs() < 1e-6);
    }

    #[test]
    fn enclosure_widths_respect_tolerance() {
        let spec = make_builtin("power-law", &[1.0, 2.0]).unwrap();
        for tol in [1e-14, 1e-10, 1e-6] {
            let z = zeros(&spec, 25, tol).unwrap();
            for i in 0..25 {
                let e = z.interval(i);
                assert!(e.hi - e.lo <= tol * (1.0 + z.zeros[i].abs()) * (1.0 + 1e-12));
                assert!(e.lo <= z.zeros[i] && z.zeros[i] <= e.hi);
            }
            assert!(z.zeros.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(matches!(zeros(&spec, 3, 1e-15), Err(Error::Tolerance(_))));
    }

    #[test]
    fn polished_points_reach_full_precision() {
        let z = zeros(&hermite(), 2, 1e-12).unwrap();
        assert!((z.largest() - 0.5f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
        assert!((z.smallest() + 0.5f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
        let cheb = make_builtin("chebyshev", &[]).unwrap();
        let z = zeros(&cheb, 16, 1e-10).unwrap();
        for (i, &x) in z.zeros.iter().enumerate() {
            let exact = -((2 * i + 1) as f64 * std::f64::consts::PI / 32.0).cos();
            assert!((x - exact).abs() <= 1e-15, "i = {i}: {x} vs {exact}");
        }
    }

    #[test]
    fn extremes_agree_with_full_solve() {
        for name in ["hermite-monic", "geometric", "chebyshev", "laguerre-normalized"] {
            let spec = make_builtin(name, &[]).unwrap();
            for k in [1usize, 2, 7, 30] {
                let tol = 1e-13;
                let z = zeros(&spec, k, tol).unwrap();
                let (lo, hi) = extreme_zeros(&spec, k, tol).unwrap();
                assert!((lo.mid() - z.smallest()).abs() <= 2.0 * tol * (1.0 + lo.mid().abs()));
                assert!((hi.mid() - z.largest()).abs() <= 2.0 * tol * (1.0 + hi.mid().abs()));
                if spec.form().is_symmetric() {
                    assert!((lo.mid() + hi.mid()).abs() <= 2.0 * tol * (1.0 + hi.mid().abs()));
                }
            }
        }
    }

    #[test]
    fn zeros_interlace() {
        for name in ["hermite-monic", "probabilist-hermite", "geometric", "chebyshev", "laguerre-normalized"] {
            let spec = make_builtin(name, &[]).unwrap();
            let mut previous = zeros(&spec, 1, 1e-14).unwrap();
            for k in 2..=40 {
                let z = zeros(&spec, k, 1e-14).unwrap();
                for i in 0..k - 1 {
                    assert!(z.zeros[i] < previous.zeros[i] && previous.zeros[i] < z.zeros[i + 1]);
                }
                previous = z;
            }
        }
    }

    #[test]
    fn zero_at_matches() {
        let spec = make_builtin("probabilist-hermite", &[]).unwrap();
        let z = zeros(&spec, 11, 1e-14).unwrap();
        for i in 1..=11 {
            let e = zero_at(&spec, 11, i, 1e-14).unwrap();
            assert!((e.mid() - z.zeros[i - 1]).abs() < 1e-12);
        }
        assert!(zero_at(&spec, 11, 0, 1e-12).is_err());
    }

    #[test]
    fn uniform_certificate_for_constant_coefficients() {
        let c = 2.25;
        let spec = RecurrenceSpec::symmetric(Sequence::Constant { value: c });
        for k in [2usize, 5, 17] {
            let cert = rayleigh_lower(&spec, k, Some(&vec![1.0; k])).unwrap();
            let expected = 2.0 * c.sqrt() * (k - 1) as f64 / k as f64;
            assert!((cert.value - expected).abs() < 1e-14);
        }
        assert_eq!(rayleigh_lower(&spec, 3, Some(&[0.0; 3])), Err(Error::ZeroVector));
    }

    #[test]
    fn converged_certificate_is_sharp() {
        let h = hermite();
        let (_, top) = extreme_zeros(&h, 20, 1e-14).unwrap();
        let v = eigenvector_at(&h, 20, top.mid()).unwrap();
        let cert = rayleigh_lower(&h, 20, Some(&v)).unwrap();
        assert!(top.mid() - cert.value < 1e-8);
        assert!(cert.value <= top.hi + 1e-12 * (1.0 + top.hi));
        let norm: f64 = cert.vector.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn certificate_scales_with_coefficients() {
        let eps = 0.01;
        let base = make_builtin("power-law", &[1.0, 0.75]).unwrap();
        let scaled = make_builtin("power-law", &[1.0 + eps, 0.75]).unwrap();
        let v: Vec<f64> = (0..12).map(|i| 1.0 + (i as f64 * 0.37).sin()).collect();
        let a = rayleigh_lower(&base, 12, Some(&v)).unwrap().value;
        let b = rayleigh_lower(&scaled, 12, Some(&v)).unwrap().value;
        assert!((b - (1.0 + eps) * a).abs() < 1e-13 * a);
    }

    proptest! {
        #[test]
        fn certificates_never_exceed_largest_zero(k in 1usize..60, delta in 0.0f64..2.0, seed in proptest::collection::vec(-1.0f64..1.0, 60)) {
            let spec = make_builtin("power-law", &[1.0, delta]).unwrap();
            let (_, top) = extreme_zeros(&spec, k, 1e-14).unwrap();
            let bound = top.hi + 1e-12 * (1.0 + top.hi.abs());
            let auto = rayleigh_lower(&spec, k, None).unwrap();
            prop_assert!(auto.value <= bound);
            if seed[..k].iter().any(|&x| x != 0.0) {
                let given = rayleigh_lower(&spec, k, Some(&seed[..k])).unwrap();
                prop_assert!(given.value <= bound);
            }
        }

        #[test]
        fn sturm_count_is_monotone(k in 1usize..40, xs in proptest::collection::vec(-12.0f64..12.0, 2..20)) {
            let spec = hermite();
            let mut xs = xs;
            xs.sort_by(f64::total_cmp);
            let counts: Vec<usize> = xs.iter().map(|&x| sturm_count(&spec, k, x).unwrap()).collect();
            prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
