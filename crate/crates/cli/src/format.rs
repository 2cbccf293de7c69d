//! Fixed 17-significant-digit number formatting for CSV, text and JSON.

use serde_json::{Number, Value};

/// `v` with exactly 17 significant digits: positional notation for
/// exponents in `-5..17`, scientific otherwise. Non-finite values print as
/// `nan`, `inf` or `-inf`.
pub fn sig17(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent digits");
    if (-5..17).contains(&exp) {
        format!("{v:.prec$}", prec = (16 - exp) as usize)
    } else {
        sci
    }
}

/// A JSON number carrying the [`sig17`] text verbatim; `null` if not finite.
pub fn json_number(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    Value::Number(sig17(v).parse::<Number>().expect("sig17 output is valid JSON"))
}
