//! Family arguments: builtin names with optional parameters, inline JSON, or
//! a path to a JSON file.
//!
//! JSON schema (unknown fields are rejected):
//!
//! ```text
//! {"form": "symmetric-monic" | "unit-interval" | "half-line",
//!  "kind": "constant" | "linear" | "power" | "geometric" | "table",
//!  "params": {"c": r, "delta": r, "ratio": r, "alpha": r},
//!  "table": {"b": [...], "c": [...]},
//!  "c": [...]}
//! ```
//!
//! The top-level `"c"` is shorthand for `"table": {"c": [...]}`.

use crate::CliError;
use serde_json::{Map, Value};
use turan_core::families::{make_builtin, RecurrenceForm, RecurrenceSpec, Sequence, BUILTIN_NAMES};

/// Parses a family argument.
pub fn parse_family(arg: &str) -> Result<RecurrenceSpec, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return parse_json(trimmed);
    }
    if trimmed.ends_with(".json") || std::path::Path::new(trimmed).is_file() {
        let text = std::fs::read_to_string(trimmed)
            .map_err(|e| CliError::Input(format!("cannot read family file {trimmed}: {e}")))?;
        return parse_json(&text);
    }
    parse_named(trimmed)
}

/// Positional defaults for named builtins with parameters.
fn param_keys(name: &str) -> &'static [(&'static str, f64)] {
    match name {
        "power-law" => &[("c", 1.0), ("delta", 1.0)],
        "geometric" => &[("ratio", 2.0), ("scale", 1.0)],
        "laguerre-normalized" => &[("alpha", 0.0)],
        _ => &[],
    }
}

/// `name` or `name:key=value,...` (positional values are also accepted).
fn parse_named(arg: &str) -> Result<RecurrenceSpec, CliError> {
    let (name, rest) = match arg.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (arg, None),
    };
    if !BUILTIN_NAMES.contains(&name) {
        return Err(CliError::Input(format!(
            "unknown family '{name}' (builtins: {})",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let Some(rest) = rest.filter(|r| !r.is_empty()) else {
        return Ok(make_builtin(name, &[])?);
    };
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Input(format!("bad number '{s}' in family '{arg}'")))
    };
    let keys = param_keys(name);
    let mut positional = Vec::new();
    let mut named: Vec<Option<f64>> = vec![None; keys.len()];
    for token in rest.split(',') {
        match token.split_once('=') {
            Some((k, v)) => {
                let slot = keys
                    .iter()
                    .position(|(key, _)| *key == k.trim())
                    .ok_or_else(|| CliError::Input(format!("unknown parameter '{k}' for {name}")))?;
                named[slot] = Some(number(v)?);
            }
            None => positional.push(number(token)?),
        }
    }
    if name == "table" || named.iter().all(Option::is_none) {
        return Ok(make_builtin(name, &positional)?);
    }
    if !positional.is_empty() {
        return Err(CliError::Input(format!("mix of positional and named parameters in '{arg}'")));
    }
    let params: Vec<f64> = keys.iter().zip(named).map(|((_, d), v)| v.unwrap_or(*d)).collect();
    Ok(make_builtin(name, &params)?)
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object()
        .ok_or_else(|| CliError::Input(format!("{what} must be a JSON object")))
}

fn reject_unknown(map: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), CliError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::Input(format!("unknown field '{k}' in {what}"))),
        None => Ok(()),
    }
}

fn real(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Input(format!("{what} must be a finite number")))
}

fn reals(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Input(format!("{what} must be an array of numbers")))?
        .iter()
        .map(|x| real(x, what))
        .collect()
}

pub fn parse_json(text: &str) -> Result<RecurrenceSpec, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("family JSON: {e}")))?;
    let top = object(&v, "family")?;
    reject_unknown(top, &["form", "kind", "params", "table", "c"], "family")?;
    let form = match top.get("form").map(|f| f.as_str()) {
        None => RecurrenceForm::SymmetricMonic,
        Some(Some("symmetric-monic")) => RecurrenceForm::SymmetricMonic,
        Some(Some("unit-interval")) => RecurrenceForm::UnitIntervalSymmetric,
        Some(Some("half-line")) => RecurrenceForm::HalfLine,
        Some(other) => return Err(CliError::Input(format!("unknown form {other:?}"))),
    };
    let kind = top
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Input("family JSON needs a string 'kind'".into()))?;
    let empty = Map::new();
    let params = match top.get("params") {
        Some(p) => object(p, "params")?,
        None => &empty,
    };
    let allowed: &[&str] = match (kind, form) {
        ("constant", _) => &["c"],
        ("linear", RecurrenceForm::HalfLine) => &["c", "alpha"],
        ("linear", _) => &["c"],
        ("power", _) => &["c", "delta"],
        ("geometric", _) => &["c", "ratio"],
        ("table", _) => &[],
        _ => return Err(CliError::Input(format!("unknown kind '{kind}'"))),
    };
    reject_unknown(params, allowed, &format!("params of kind '{kind}'"))?;
    let param = |key: &str, default: Option<f64>| -> Result<f64, CliError> {
        match params.get(key) {
            Some(v) => real(v, &format!("params.{key}")),
            None => default.ok_or_else(|| CliError::Input(format!("kind '{kind}' needs params.{key}"))),
        }
    };
    let mut table = match top.get("table") {
        Some(t) => {
            let t = object(t, "table")?;
            reject_unknown(t, &["b", "c"], "table")?;
            t.clone()
        }
        None => Map::new(),
    };
    if let Some(c) = top.get("c") {
        if table.contains_key("c") {
            return Err(CliError::Input("both 'c' and 'table.c' given".into()));
        }
        table.insert("c".into(), c.clone());
    }
    if kind != "table" && !table.is_empty() {
        return Err(CliError::Input(format!("table values given for kind '{kind}'")));
    }
    if form != RecurrenceForm::HalfLine && table.contains_key("b") {
        return Err(CliError::Input("table.b is only used by the half-line form".into()));
    }
    let positive = |v: f64, what: &str| {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Input(format!("{what} must be > 0")))
        }
    };

    let spec = if form == RecurrenceForm::HalfLine {
        match kind {
            "linear" => {
                let s = positive(param("c", Some(1.0))?, "params.c")?;
                let alpha = param("alpha", Some(0.0))?;
                if alpha <= -1.0 {
                    return Err(CliError::Input("params.alpha must be > -1".into()));
                }
                RecurrenceSpec::half_line(
                    Sequence::Linear { slope: s, intercept: s * (alpha + 1.0) },
                    Sequence::Linear { slope: s, intercept: 0.0 },
                )
                .with_label(format!("half-line-linear(c={s};alpha={alpha})"))
            }
            "table" => {
                let b = table
                    .get("b")
                    .ok_or_else(|| CliError::Input("half-line table needs table.b".into()))?;
                let c = table
                    .get("c")
                    .ok_or_else(|| CliError::Input("half-line table needs table.c".into()))?;
                RecurrenceSpec::half_line(
                    Sequence::Table { values: reals(b, "table.b")? },
                    Sequence::Table { values: reals(c, "table.c")? },
                )
                .with_label("half-line-table")
            }
            _ => return Err(CliError::Input(format!("half-line form supports kinds linear and table, not '{kind}'"))),
        }
    } else {
        let seq = match kind {
            "constant" => Sequence::Constant { value: positive(param("c", None)?, "params.c")? },
            "linear" => Sequence::Linear { slope: positive(param("c", Some(1.0))?, "params.c")?, intercept: 0.0 },
            "power" => {
                let delta = param("delta", Some(1.0))?;
                if delta < 0.0 {
                    return Err(CliError::Input("params.delta must be >= 0".into()));
                }
                Sequence::PowerLaw { c: positive(param("c", Some(1.0))?, "params.c")?, delta }
            }
            "geometric" => Sequence::Geometric {
                scale: positive(param("c", Some(1.0))?, "params.c")?,
                ratio: positive(param("ratio", Some(2.0))?, "params.ratio")?,
            },
            _ => {
                let c = table
                    .get("c")
                    .ok_or_else(|| CliError::Input("kind 'table' needs table.c (or top-level c)".into()))?;
                Sequence::Table { values: reals(c, "table.c")? }
            }
        };
        let label = format!("{}-{kind}", if form == RecurrenceForm::SymmetricMonic { "custom" } else { "unit-interval" });
        if form == RecurrenceForm::SymmetricMonic {
            RecurrenceSpec::symmetric(seq).with_label(label)
        } else {
            RecurrenceSpec::unit_interval(seq).with_label(label)
        }
    };
    // Surface malformed coefficients (c_0 != 0, nonpositive c_1, ...) up front.
    spec.coefficient(0)?;
    if spec.max_index() != Some(0) {
        spec.coefficient(1)?;
    }
    Ok(spec)
}

/// The JSON description a spec expands to, if it fits the schema.
pub fn spec_to_json(spec: &RecurrenceSpec) -> Option<Value> {
    let num = |v: f64| crate::format::json_number(v);
    let mut out = Map::new();
    let form = spec.form();
    out.insert("form".into(), Value::String(form.as_str().into()));
    let mut params = Map::new();
    let kind = match (form, spec.c_sequence(), spec.b_sequence()) {
        (RecurrenceForm::HalfLine, Sequence::Linear { slope, intercept }, Some(Sequence::Linear { slope: bs, intercept: bi }))
            if *intercept == 0.0 && slope == bs =>
        {
            params.insert("c".into(), num(*slope));
            params.insert("alpha".into(), num(bi / bs - 1.0));
            "linear"
        }
        (RecurrenceForm::HalfLine, Sequence::Table { values }, Some(Sequence::Table { values: b })) => {
            let mut t = Map::new();
            t.insert("b".into(), Value::Array(b.iter().map(|&v| num(v)).collect()));
            t.insert("c".into(), Value::Array(values.iter().map(|&v| num(v)).collect()));
            out.insert("table".into(), Value::Object(t));
            "table"
        }
        (RecurrenceForm::HalfLine, _, _) | (RecurrenceForm::GeneralMonic, _, _) => return None,
        (_, Sequence::Constant { value }, _) => {
            params.insert("c".into(), num(*value));
            "constant"
        }
        (_, Sequence::Linear { slope, intercept }, _) if *intercept == 0.0 => {
            params.insert("c".into(), num(*slope));
            "linear"
        }
        (_, Sequence::PowerLaw { c, delta }, _) => {
            params.insert("c".into(), num(*c));
            params.insert("delta".into(), num(*delta));
            "power"
        }
        (_, Sequence::Geometric { scale, ratio }, _) => {
            params.insert("c".into(), num(*scale));
            params.insert("ratio".into(), num(*ratio));
            "geometric"
        }
        (_, Sequence::Table { values }, _) => {
            let mut t = Map::new();
            t.insert("c".into(), Value::Array(values.iter().map(|&v| num(v)).collect()));
            out.insert("table".into(), Value::Object(t));
            "table"
        }
        _ => return None,
    };
    out.insert("kind".into(), Value::String(kind.into()));
    if !params.is_empty() {
        out.insert("params".into(), Value::Object(params));
    }
    Some(Value::Object(out))
}
