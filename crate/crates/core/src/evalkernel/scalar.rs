//! Arithmetic back ends shared by the kernel expressions.
//!
//! Expressions such as `T_k^{(m)}` or the identity residuals are written once
//! against [`Scalar`] and evaluated either in plain `f64`, in [`Tracked`]
//! (value plus an absolute-magnitude bound used for relative tolerances) or in
//! double-double ([`super::Dd`]) for re-verification.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Size used for relative tolerances: for [`Tracked`] this is the sum of
    /// absolute values of all terms that went into the value.
    fn magnitude(self) -> f64;
    /// Multiply by `2^e` exactly (barring under/overflow).
    fn ldexp(self, e: i64) -> Self;

    /// Restart magnitude bookkeeping at this value (identity except for [`Tracked`]).
    fn leaf(self) -> Self {
        self
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn ldexp(self, e: i64) -> Self {
        ldexp(self, e)
    }
}

/// A value together with the sum of absolute values of its constituent terms.
///
/// Sums add magnitudes, products multiply them; the ratio
/// `|value| / magnitude` is therefore a cancellation-aware relative size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tracked {
    pub value: f64,
    pub magnitude: f64,
}

impl Tracked {
    pub fn new(value: f64) -> Self {
        Tracked {
            value,
            magnitude: value.abs(),
        }
    }
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, o: Tracked) -> Tracked {
        Tracked {
            value: self.value + o.value,
            magnitude: self.magnitude + o.magnitude,
        }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, o: Tracked) -> Tracked {
        Tracked {
            value: self.value - o.value,
            magnitude: self.magnitude + o.magnitude,
        }
    }
}

impl Mul for Tracked {
    type Output = Tracked;
    fn mul(self, o: Tracked) -> Tracked {
        Tracked {
            value: self.value * o.value,
            magnitude: self.magnitude * o.magnitude,
        }
    }
}

impl Div for Tracked {
    type Output = Tracked;
    fn div(self, o: Tracked) -> Tracked {
        Tracked {
            value: self.value / o.value,
            magnitude: self.magnitude / o.value.abs(),
        }
    }
}

impl Neg for Tracked {
    type Output = Tracked;
    fn neg(self) -> Tracked {
        Tracked {
            value: -self.value,
            magnitude: self.magnitude,
        }
    }
}

impl Scalar for Tracked {
    fn from_f64(v: f64) -> Self {
        Tracked::new(v)
    }
    fn to_f64(self) -> f64 {
        self.value
    }
    fn magnitude(self) -> f64 {
        self.magnitude
    }
    fn leaf(self) -> Self {
        Tracked::new(self.value)
    }
    fn ldexp(self, e: i64) -> Self {
        Tracked {
            value: ldexp(self.value, e),
            magnitude: ldexp(self.magnitude, e),
        }
    }
}

/// `v * 2^e`, exact unless the result leaves the normal range.
pub fn ldexp(mut v: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    while e > STEP {
        v *= pow2(STEP as i32);
        e -= STEP;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -STEP {
        v *= pow2(-STEP as i32);
        e += STEP;
        if v == 0.0 {
            return v;
        }
    }
    v * pow2(e as i32)
}

/// `2^e` for `-1022 <= e <= 1023`.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `floor(log2 |v|)` for finite nonzero `v`, subnormals included.
pub fn exponent_of(v: f64) -> i64 {
    debug_assert!(v != 0.0 && v.is_finite());
    let bits = v.abs().to_bits();
    let biased = (bits >> 52) as i64;
    if biased == 0 {
        // Subnormal: value = mantissa * 2^-1074.
        let mantissa = bits & ((1u64 << 52) - 1);
        63 - mantissa.leading_zeros() as i64 - 1074
    } else {
        biased - 1023
    }
}

pub(crate) fn binomial(n: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_and_ldexp_round_trip() {
        for &v in &[1.0, 3.5, -0.75, 1e300, 1e-300, 5e-324, f64::MIN_POSITIVE / 3.0] {
            let e = exponent_of(v);
            let m = ldexp(v, -e);
            assert!((1.0..2.0).contains(&m.abs()), "v = {v:e}, m = {m}");
            assert_eq!(ldexp(m, e), v);
        }
        assert_eq!(ldexp(1.0, 2000), f64::INFINITY);
        assert_eq!(ldexp(1.0, -2000), 0.0);
        assert_eq!(ldexp(ldexp(3.0, 1010), -1010), 3.0);
    }

    #[test]
    fn tracked_magnitude_accumulates() {
        let a = Tracked::new(3.0);
        let b = Tracked::new(-2.0);
        let r = a * a - b * b * Tracked::new(2.0);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.magnitude, 17.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(0, 0), 1.0);
    }
}
