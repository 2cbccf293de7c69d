//! Subcommand implementations. Each returns the full output as a string so
//! that ordering and byte-level determinism are easy to test.

use crate::family::{parse_family, spec_to_json};
use crate::format::{json_number, sig17};
use crate::{exit, CliError, Command, FamiliesAction, Format, Outcome, Suite};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::ops::RangeInclusive;
use turan_core::bounds::{
    check_condition, reference_asymptotic_mnt, BoundName, BoundResult, ConditionId, ConditionReport, Verdict,
};
use turan_core::families::{make_builtin, RecurrenceForm, RecurrenceSpec, BUILTIN_NAMES};
use turan_core::verifier::{
    containment_at, verify_bound_containment, verify_identity, verify_nonneg, verify_perturbation, ContainmentCheck,
    Subject, VerificationReport,
};
use turan_core::zerofinder::{polish, zeros};

/// Header of the `bounds` CSV.
pub const BOUNDS_COLUMNS: [&str; 20] = [
    "family",
    "k",
    "x_kk",
    "first_order",
    "first_order_ok",
    "tt2",
    "tt2_ok",
    "vir1",
    "vir1_ok",
    "thmain",
    "thmain_ok",
    "condsimpl",
    "condsimpl_ok",
    "mnt",
    "mnt_ok",
    "marik_hermite",
    "marik_hermite_ok",
    "lower_trivial",
    "rayleigh_lower",
    "reference_mnt",
];

/// Bounds reported as value/applicability column pairs.
const PAIRED: [(&str, BoundName); 7] = [
    ("first_order", BoundName::FirstOrder),
    ("tt2", BoundName::Tt2),
    ("vir1", BoundName::Vir1),
    ("thmain", BoundName::Thmain),
    ("condsimpl", BoundName::Condsimpl),
    ("mnt", BoundName::Mnt),
    ("marik_hermite", BoundName::MarikHermite),
];

/// Perturbation check parameters used by `verify`.
const PERTURBATION_K: usize = 30;
const PERTURBATION_EPSILON: f64 = 0.01;
const PERTURBATION_DRAWS: usize = 50;

pub fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Zeros { family, k, tol, format } => cmd_zeros(&family, k, tol, format.unwrap_or(Format::Text)),
        Command::Bounds {
            family,
            k,
            bounds,
            tol,
            format,
        } => cmd_bounds(&family, &k, &bounds, tol, format.unwrap_or(Format::Csv)),
        Command::Verify {
            family,
            suite,
            seed,
            kmax,
            samples,
            grid,
            tol,
            format,
        } => cmd_verify(
            &family,
            &VerifyOptions {
                suite,
                seed,
                kmax,
                samples,
                grid,
                tol,
            },
            format.unwrap_or(Format::Json),
        ),
        Command::Check { family, kmax, format } => cmd_check(&family, kmax, format.unwrap_or(Format::Text)),
        Command::Families {
            action: FamiliesAction::List { format },
        } => cmd_families_list(format.unwrap_or(Format::Json)),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Space-aligned columns.
fn text_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(&format!("{cell:<w$}"));
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!("--tol must be positive, got {tol}")))
    }
}

fn cmd_zeros(family: &str, k: usize, tol: f64, format: Format) -> Result<Outcome, CliError> {
    let spec = parse_family(family)?;
    check_tol(tol)?;
    if k == 0 {
        return Err(CliError::Input("k must be at least 1".into()));
    }
    let z = zeros(&spec, k, tol)?;
    let out = match format {
        Format::Text => z.zeros.iter().map(|&x| sig17(x) + "\n").collect(),
        Format::Csv => {
            let rows: Vec<Vec<String>> = z
                .zeros
                .iter()
                .enumerate()
                .map(|(i, &x)| vec![(i + 1).to_string(), sig17(x)])
                .collect();
            csv(&["i".into(), "x".into()], &rows)
        }
        Format::Json => pretty(&json!({
            "family": spec.label(),
            "k": k,
            "zeros": z.zeros.iter().map(|&x| json_number(x)).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome::ok(out))
}

/// `k`, `a..b` or `a..=b`.
pub fn parse_k_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Input(format!("bad degree or range '{s}' (expected k or a..b)"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let k = num(s)?;
            k..=k
        }
    };
    if *range.start() < 1 || range.start() > range.end() {
        return Err(CliError::Input(format!("degree range '{s}' must be nonempty and start at 1 or above")));
    }
    Ok(range)
}

/// Worker pool sized by `TURAN_ZEROS_THREADS` (unset or 0: automatic).
fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("TURAN_ZEROS_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("TURAN_ZEROS_THREADS must be a nonnegative integer, got '{v}'")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Input(format!("cannot start worker pool: {e}")))
}

fn find(bounds: &[BoundResult], name: BoundName) -> Option<&BoundResult> {
    bounds.iter().find(|b| b.name == name)
}

fn value_cell(b: Option<&BoundResult>) -> Option<f64> {
    b.filter(|b| b.applicability != Verdict::Fails && b.value.is_finite())
        .map(|b| b.value)
}

fn ok_cell(b: Option<&BoundResult>) -> &'static str {
    match b.map(|b| b.applicability) {
        Some(Verdict::Holds) => "1",
        Some(Verdict::Boundary) => "boundary",
        Some(Verdict::Fails) => "0",
        None => "",
    }
}

/// One `bounds` row: each column is either a number or a token.
enum Cell {
    Num(Option<f64>),
    Token(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(Some(v)) => sig17(*v),
            Cell::Num(None) => String::new(),
            Cell::Token(t) => t.clone(),
        }
    }

    fn json(&self, column: &str) -> Value {
        match self {
            Cell::Num(Some(v)) => json_number(*v),
            Cell::Num(None) => Value::Null,
            Cell::Token(t) if column == "k" => json!(t.parse::<u64>().expect("degree")),
            Cell::Token(t) if t.is_empty() => Value::Null,
            Cell::Token(t) => Value::String(t.clone()),
        }
    }
}

fn bounds_row(spec: &RecurrenceSpec, check: &ContainmentCheck) -> Vec<Cell> {
    let mut row = vec![
        Cell::Token(spec.label().to_string()),
        Cell::Token(check.k.to_string()),
        Cell::Num(Some(polish(spec, check.k, check.largest).unwrap_or_else(|_| check.largest.mid()))),
    ];
    for (_, name) in PAIRED {
        let b = find(&check.bounds, name);
        row.push(Cell::Num(value_cell(b)));
        row.push(Cell::Token(ok_cell(b).into()));
    }
    row.push(Cell::Num(value_cell(find(&check.bounds, BoundName::TrivialLower))));
    row.push(Cell::Num(Some(check.certificate)));
    row.push(Cell::Num(
        spec.power_law_params()
            .map(|(c, delta)| reference_asymptotic_mnt(c, delta, check.k)),
    ));
    row
}

/// Column indices kept by `--bounds`; a bound name brings its `_ok` column.
fn selected_columns(filter: &[String]) -> Result<Vec<usize>, CliError> {
    let filter: Vec<&str> = filter.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if filter.is_empty() {
        return Ok((0..BOUNDS_COLUMNS.len()).collect());
    }
    for f in &filter {
        if !BOUNDS_COLUMNS.contains(f) {
            return Err(CliError::Input(format!(
                "unknown column '{f}' in --bounds (columns: {})",
                BOUNDS_COLUMNS.join(",")
            )));
        }
    }
    Ok(BOUNDS_COLUMNS
        .iter()
        .enumerate()
        .filter(|(_, col)| {
            filter.contains(col) || col.strip_suffix("_ok").is_some_and(|base| filter.contains(&base))
        })
        .map(|(i, _)| i)
        .collect())
}

fn cmd_bounds(family: &str, k: &str, filter: &[String], tol: f64, format: Format) -> Result<Outcome, CliError> {
    let spec = parse_family(family)?;
    let range = parse_k_range(k)?;
    check_tol(tol)?;
    let columns = selected_columns(filter)?;
    let checks: Vec<ContainmentCheck> = thread_pool()?.install(|| {
        range
            .clone()
            .into_par_iter()
            .map(|k| containment_at(&spec, k, tol))
            .collect::<Result<_, _>>()
    })?;

    let header: Vec<String> = columns.iter().map(|&i| BOUNDS_COLUMNS[i].to_string()).collect();
    let rows: Vec<Vec<Cell>> = checks
        .iter()
        .map(|c| {
            let mut full: Vec<Option<Cell>> = bounds_row(&spec, c).into_iter().map(Some).collect();
            columns.iter().map(|&i| full[i].take().expect("column used once")).collect()
        })
        .collect();
    let stdout = match format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        header.iter().zip(r).map(|(h, cell)| (h.clone(), cell.json(h))).collect();
                    Value::Object(obj)
                })
                .collect(),
        )),
        Format::Csv | Format::Text => {
            let text_rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
            if format == Format::Csv {
                csv(&header, &text_rows)
            } else {
                text_table(&header, &text_rows)
            }
        }
    };

    let mut stderr = String::new();
    for c in &checks {
        for o in c.violations() {
            stderr.push_str(&format!(
                "violation: {} k={} {} {} bound {} vs zero {} in [{}, {}]\n",
                spec.label(),
                c.k,
                o.name,
                o.side.as_str(),
                sig17(o.value),
                o.zero_index,
                sig17(o.zero.lo),
                sig17(o.zero.hi)
            ));
        }
    }
    Ok(Outcome {
        code: if stderr.is_empty() { exit::OK } else { exit::SOUNDNESS },
        stdout,
        stderr,
    })
}

#[derive(Debug, Clone)]
struct VerifyOptions {
    suite: Suite,
    seed: u64,
    kmax: usize,
    samples: usize,
    grid: usize,
    tol: f64,
}

/// Subjects run for a family form, identities first.
fn subjects_for(form: RecurrenceForm, suite: Suite) -> Vec<Subject> {
    let identities = [Subject::FirstoIdentity, Subject::Eqtur2Identity, Subject::DeltaPIdentity];
    let inequalities: &[Subject] = match form {
        RecurrenceForm::SymmetricMonic => &[
            Subject::TurNonneg,
            Subject::Turan2Nonneg,
            Subject::VxNonneg,
            Subject::PatrNonneg,
            Subject::MarikNonneg,
            Subject::BoundContainment,
            Subject::Perturbation,
        ],
        RecurrenceForm::UnitIntervalSymmetric => &[
            Subject::SzwarcTur11,
            Subject::PatrNonneg,
            Subject::MarikNonneg,
            Subject::BoundContainment,
        ],
        RecurrenceForm::HalfLine => &[
            Subject::SzwarcTur12,
            Subject::PatrNonneg,
            Subject::MarikNonneg,
            Subject::BoundContainment,
        ],
        RecurrenceForm::GeneralMonic => &[Subject::BoundContainment],
    };
    let mut out = Vec::new();
    if suite != Suite::Inequalities && form == RecurrenceForm::SymmetricMonic {
        out.extend(identities);
    }
    if suite != Suite::Identities {
        out.extend_from_slice(inequalities);
    }
    out
}

fn run_subject(spec: &RecurrenceSpec, subject: Subject, o: &VerifyOptions) -> Result<VerificationReport, CliError> {
    let range = 1..=o.kmax;
    let report = match subject {
        s if s.is_identity() => verify_identity(spec, s, range, o.samples, o.seed)?,
        s if s.is_nonneg() => verify_nonneg(spec, s, range, o.grid, o.seed)?,
        Subject::BoundContainment => verify_bound_containment(spec, range, o.tol)?,
        Subject::Perturbation => {
            let cap = spec.max_index().unwrap_or(usize::MAX);
            let k = PERTURBATION_K.min(o.kmax).min(cap);
            if k < 1 {
                return Err(CliError::Input("perturbation needs at least one coefficient".into()));
            }
            let mut r = verify_perturbation(spec, k, PERTURBATION_EPSILON, PERTURBATION_DRAWS, o.seed, o.tol)?;
            if k < PERTURBATION_K {
                r.warnings.push(format!("perturbation checked at k = {k}"));
            }
            r
        }
        _ => unreachable!("every subject is an identity, a nonnegativity check, containment or perturbation"),
    };
    Ok(report)
}

fn report_json(r: &VerificationReport) -> Value {
    let counterexample = r.first_counterexample.as_ref().map_or(Value::Null, |c| {
        json!({
            "k": c.k,
            "x": json_number(c.x),
            "value": json_number(c.value),
            "hypotheses_hold": c.hypotheses_hold,
            "detail": c.detail,
        })
    });
    let failed = r.failed_hypothesis.as_ref().map_or(Value::Null, |(k, f)| {
        json!({
            "k": k,
            "condition": f.condition,
            "index": f.index,
            "detail": f.detail,
        })
    });
    json!({
        "subject": r.subject.as_str(),
        "mode": r.mode.as_str(),
        "passed": r.passed(),
        "sample_count": r.sample_count,
        "max_relative_residual": json_number(r.max_relative_residual),
        "min_value": r.min_value.map_or(Value::Null, json_number),
        "violations": r.violations,
        "skipped": r.skipped,
        "cleared_by_recheck": r.cleared_by_recheck,
        "first_counterexample": counterexample,
        "failed_hypothesis": failed,
        "warnings": r.warnings,
    })
}

fn cmd_verify(family: &str, o: &VerifyOptions, format: Format) -> Result<Outcome, CliError> {
    let spec = parse_family(family)?;
    check_tol(o.tol)?;
    if o.kmax < 1 {
        return Err(CliError::Input("--kmax must be at least 1".into()));
    }
    let subjects = subjects_for(spec.form(), o.suite);
    let reports: Vec<VerificationReport> = thread_pool()?.install(|| {
        subjects
            .par_iter()
            .map(|&s| run_subject(&spec, s, o))
            .collect::<Result<_, _>>()
    })?;
    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let warnings: Vec<String> = reports
        .iter()
        .flat_map(|r| r.warnings.iter().map(move |w| format!("{}: {w}", r.subject.as_str())))
        .collect();
    let suite = match o.suite {
        Suite::Identities => "identities",
        Suite::Inequalities => "inequalities",
        Suite::All => "all",
    };
    let stdout = match format {
        Format::Json => pretty(&json!({
            "family": spec.label(),
            "suite": suite,
            "seed": o.seed,
            "kmax": o.kmax,
            "samples": o.samples,
            "grid": o.grid,
            "passed": violations == 0,
            "violations": violations,
            "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            "warnings": warnings,
        })),
        Format::Csv | Format::Text => {
            let header: Vec<String> = [
                "subject",
                "mode",
                "passed",
                "samples",
                "max_relative_residual",
                "min_value",
                "violations",
                "skipped",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.subject.as_str().to_string(),
                        r.mode.as_str().to_string(),
                        if r.passed() { "1" } else { "0" }.to_string(),
                        r.sample_count.to_string(),
                        sig17(r.max_relative_residual),
                        r.min_value.map(sig17).unwrap_or_default(),
                        r.violations.to_string(),
                        r.skipped.to_string(),
                    ]
                })
                .collect();
            if format == Format::Csv {
                csv(&header, &rows)
            } else {
                let mut t = text_table(&header, &rows);
                for w in &warnings {
                    t.push_str(&format!("warning: {w}\n"));
                }
                t
            }
        }
    };
    let stderr: String = reports
        .iter()
        .filter(|r| r.violations > 0)
        .filter_map(|r| {
            r.first_counterexample
                .as_ref()
                .map(|c| format!("counterexample: {} k={} x={} {}\n", r.subject.as_str(), c.k, sig17(c.x), c.detail))
        })
        .collect();
    Ok(Outcome {
        code: if violations == 0 { exit::OK } else { exit::COUNTEREXAMPLE },
        stdout,
        stderr,
    })
}

fn condition_row(r: &ConditionReport) -> Vec<String> {
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    let v = r.first_violation.as_ref();
    vec![
        r.id.as_str().to_string(),
        r.verdict().as_str().to_string(),
        r.first_index.to_string(),
        r.k_max.to_string(),
        opt(r.holds_up_to),
        opt(v.map(|d| d.index)),
        v.map(|d| sig17(d.lhs)).unwrap_or_default(),
        v.map(|d| sig17(d.rhs)).unwrap_or_default(),
        opt(r.first_equality.as_ref().map(|d| d.index)),
        opt(r.truncated_at),
    ]
}

const CHECK_COLUMNS: [&str; 10] = [
    "condition",
    "verdict",
    "first_index",
    "k_max",
    "holds_up_to",
    "first_violation",
    "violation_lhs",
    "violation_rhs",
    "first_equality",
    "truncated_at",
];

fn cmd_check(family: &str, kmax: usize, format: Format) -> Result<Outcome, CliError> {
    let spec = parse_family(family)?;
    let reports: Vec<ConditionReport> = ConditionId::ALL
        .into_iter()
        .filter(|id| id.applies_to(spec.form()))
        .map(|id| check_condition(&spec, id, kmax))
        .collect::<Result<_, _>>()?;
    let header: Vec<String> = CHECK_COLUMNS.iter().map(|s| s.to_string()).collect();
    let out = match format {
        Format::Json => {
            let detail = |d: Option<&turan_core::bounds::IndexDetail>| {
                d.map_or(Value::Null, |d| {
                    json!({"index": d.index, "lhs": json_number(d.lhs), "rhs": json_number(d.rhs)})
                })
            };
            pretty(&json!({
                "family": spec.label(),
                "kmax": kmax,
                "conditions": reports.iter().map(|r| json!({
                    "condition": r.id.as_str(),
                    "verdict": r.verdict().as_str(),
                    "first_index": r.first_index,
                    "k_max": r.k_max,
                    "holds_up_to": r.holds_up_to,
                    "first_violation": detail(r.first_violation.as_ref()),
                    "first_equality": detail(r.first_equality.as_ref()),
                    "strict_equality": r.strict_equality,
                    "truncated_at": r.truncated_at,
                })).collect::<Vec<_>>(),
            }))
        }
        Format::Csv => csv(&header, &reports.iter().map(condition_row).collect::<Vec<_>>()),
        Format::Text => text_table(&header, &reports.iter().map(condition_row).collect::<Vec<_>>()),
    };
    Ok(Outcome::ok(out))
}

fn cmd_families_list(format: Format) -> Result<Outcome, CliError> {
    let entries: Vec<(String, Value)> = BUILTIN_NAMES
        .iter()
        .map(|&name| {
            let expansion = if name == "table" {
                json!({"form": "symmetric-monic", "kind": "table", "table": {"c": "c_0,c_1,..."}})
            } else {
                let spec = make_builtin(name, &[]).expect("builtin defaults are valid");
                spec_to_json(&spec).expect("builtins fit the family schema")
            };
            (name.to_string(), expansion)
        })
        .collect();
    let out = match format {
        Format::Json => pretty(&Value::Array(
            entries
                .iter()
                .map(|(name, e)| json!({"name": name, "expansion": e}))
                .collect(),
        )),
        Format::Text | Format::Csv => entries.iter().map(|(name, e)| format!("{name}\t{e}\n")).collect(),
    };
    Ok(Outcome::ok(out))
}
