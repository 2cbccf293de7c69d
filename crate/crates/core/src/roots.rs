//! Real roots of low-degree polynomials on a bracket.

/// `y³ + a y² + b y + c`.
pub(crate) fn cubic(a: f64, b: f64, c: f64, y: f64) -> f64 {
    ((y + a) * y + b) * y + c
}

/// Largest root of the monic cubic `y³ + a y² + b y + c` in `[lo, hi]`.
///
/// The bracket is split at the critical points of the cubic so that each
/// piece is monotone; the topmost piece with a sign change is then solved by
/// safeguarded Newton iteration.
pub(crate) fn largest_cubic_root(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> Option<f64> {
    let f = |y: f64| cubic(a, b, c, y);
    let df = |y: f64| (3.0 * y + 2.0 * a) * y + b;
    let mut cuts = vec![lo, hi];
    // 3y² + 2ay + b = 0.
    let disc = a * a - 3.0 * b;
    if disc > 0.0 {
        let s = disc.sqrt();
        // Stable pair of roots.
        let q = -(a + a.signum() * s);
        let (r1, r2) = if q != 0.0 { (q / 3.0, b / q) } else { (s / 3.0, -s / 3.0) };
        for r in [r1, r2] {
            if r > lo && r < hi {
                cuts.push(r);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    for w in cuts.windows(2).rev() {
        let (s, e) = (w[0], w[1]);
        let (fs, fe) = (f(s), f(e));
        if fe == 0.0 {
            return Some(e);
        }
        if fs == 0.0 {
            return Some(s);
        }
        if fs.signum() != fe.signum() {
            return Some(newton_bisect(f, df, s, e));
        }
    }
    None
}

/// Root of a monotone piece `[lo, hi]` with `f(lo)`, `f(hi)` of opposite sign.
pub(crate) fn newton_bisect(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let rising = f(b) > 0.0;
    let mut y = 0.5 * (a + b);
    for _ in 0..200 {
        let fy = f(y);
        if fy == 0.0 {
            return y;
        }
        if (fy > 0.0) == rising {
            b = y;
        } else {
            a = y;
        }
        let d = df(y);
        let newton = y - fy / d;
        let next = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if next == y || b - a <= 4.0 * f64::EPSILON * b.abs().max(a.abs()) {
            return next;
        }
        y = next;
    }
    y
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`, to full precision.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa_pos = f(a) > 0.0;
    loop {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == fa_pos {
            a = m;
        } else {
            b = m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_real_roots() {
        // (y - 1)(y - 2)(y - 5) = y³ - 8y² + 17y - 10.
        let r = largest_cubic_root(-8.0, 17.0, -10.0, 0.0, 10.0).unwrap();
        assert!((r - 5.0).abs() < 1e-14);
        let r = largest_cubic_root(-8.0, 17.0, -10.0, 0.0, 3.0).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
        assert!(largest_cubic_root(-8.0, 17.0, -10.0, 2.5, 4.5).is_none());
    }

    #[test]
    fn triple_root_at_bracket_end() {
        // (y - 4)³ = y³ - 12y² + 48y - 64.
        let r = largest_cubic_root(-12.0, 48.0, -64.0, 0.0, 4.0).unwrap();
        assert_eq!(r, 4.0);
    }

    #[test]
    fn bisection_agrees() {
        let f = |y: f64| cubic(-2.0, -1.0, 2.0, y);
        let df = |y: f64| 3.0 * y * y - 4.0 * y - 1.0;
        let a = bisect(f, 1.5, 3.0);
        let b = newton_bisect(f, df, 1.5, 3.0);
        assert!((a - 2.0).abs() < 1e-15 && (b - 2.0).abs() < 1e-15);
    }
}
