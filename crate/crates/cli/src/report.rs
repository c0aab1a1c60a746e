//! JSON and CSV rendering. Exact values are written as `"p/q"` strings, floats
//! with 17 significant digits, non-finite floats as `null`.

use std::io::Write;
use std::path::Path;

use berezin_core::conformal::SweepRow;
use berezin_core::quantize::{ScalingFit, ScalingResult, Symbol};
use berezin_core::{BandOperator, DecayOrder, DefectReport, GaussianRational, Limit, NormBound, Poly, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Map, Number, Value};

use crate::CliError;

pub fn rat_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn big(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

/// Real values as `"p/q"`, complex ones as `{"re": "p/q", "im": "p/q"}`.
pub fn scalar_json(c: &GaussianRational) -> Value {
    if c.is_real() {
        Value::String(rat_str(&c.re))
    } else {
        json!({"re": rat_str(&c.re), "im": rat_str(&c.im)})
    }
}

fn scalar_str(c: &GaussianRational) -> String {
    if c.is_real() {
        rat_str(&c.re)
    } else {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        format!("{}{sign}{}i", rat_str(&c.re), rat_str(&c.im.abs()))
    }
}

/// 17 significant digits with a signed exponent, e.g. `1.0000000000000001e-1`.
pub fn float_str(x: f64) -> Option<String> {
    x.is_finite().then(|| {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    })
}

pub fn float_json(x: f64) -> Value {
    match float_str(x) {
        Some(s) => Value::Number(s.parse::<Number>().expect("float literal")),
        None => Value::Null,
    }
}

pub fn decay_json(d: DecayOrder) -> Value {
    match d {
        DecayOrder::Finite(k) => json!(k),
        DecayOrder::Infinite => json!("inf"),
    }
}

pub fn limit_json(l: &Limit) -> Value {
    match l {
        Limit::Finite(c) => scalar_json(c),
        Limit::Diverges => json!("diverges"),
    }
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_json).collect())
}

/// `{"bands": [{"degree", "num", "den"}], "corrections": [[r, c, re_n, re_d, im_n, im_d]]}`;
/// polynomial coefficients are listed from the constant term up.
pub fn operator_json(op: &BandOperator) -> Value {
    let bands: Vec<Value> = op
        .bands()
        .iter()
        .map(|(d, f)| json!({"degree": d, "num": poly_json(f.num()), "den": poly_json(f.den())}))
        .collect();
    let corrections: Vec<Value> = op
        .corrections()
        .iter()
        .map(|((r, c), v)| json!([r, c, big(v.re.numer()), big(v.re.denom()), big(v.im.numer()), big(v.im.denom())]))
        .collect();
    json!({"bands": bands, "corrections": corrections})
}

pub fn weight_fields(map: &mut Map<String, Value>, w: &Weight) {
    map.insert("h".into(), json!(rat_str(w.h())));
    map.insert("hbar".into(), json!(rat_str(&w.hbar())));
}

pub fn hs_json(report: &DefectReport) -> Value {
    let hs = &report.hs_norm_sq;
    json!({
        "verdict": report.hs_verdict,
        "partial": float_json(hs.partial_sum),
        "tail_bound": float_json(hs.tail_bound),
        "N": hs.n_used,
        "norm": float_json(report.hs_norm()),
    })
}

/// The defect report schema shared by `defect`, `quantize-defect` and `eval`.
pub fn defect_json(op: &BandOperator, report: &DefectReport) -> Map<String, Value> {
    let mut m = Map::new();
    weight_fields(&mut m, op.weight());
    m.insert("operator".into(), operator_json(op));
    m.insert("hs".into(), hs_json(report));
    m.insert("asymptotic_scalar".into(), limit_json(&report.asymptotic_scalar));
    m.insert("decay_order_min".into(), decay_json(report.decay_order_min()));
    m.insert("finite_rank_norm".into(), float_json(report.finite_rank_norm()));
    if let Some(d) = report.offending_band {
        m.insert("offending_band".into(), json!(d));
    }
    m
}

pub fn norm_bound_json(b: &NormBound) -> Value {
    match b {
        NormBound::Bounded(x) => float_json(*x),
        NormBound::Unbounded => json!("unbounded"),
    }
}

pub fn symbol_json(f: &Symbol) -> Value {
    Value::Array(
        f.coeffs()
            .iter()
            .map(|(k, c)| json!([k, big(c.re.numer()), big(c.re.denom()), big(c.im.numer()), big(c.im.denom())]))
            .collect(),
    )
}

pub fn sweep_json(rows: &[SweepRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                let mut m = Map::new();
                weight_fields(&mut m, &r.weight);
                m.insert("m".into(), json!(r.m));
                m.insert("n".into(), json!(r.n));
                m.insert("hs_norm".into(), float_json(r.hs_norm));
                m.insert("decay_order_min".into(), decay_json(r.decay_order_min));
                m.insert("asymptotic_scalar".into(), limit_json(&r.asymptotic_scalar));
                m.insert("finite_rank_norm".into(), float_json(r.finite_rank_norm));
                Value::Object(m)
            })
            .collect(),
    )
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub const SWEEP_HEADER: [&str; 8] =
    ["h", "hbar", "m", "n", "hs_norm", "decay_order_min", "asymptotic_scalar", "finite_rank_norm"];

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let f = |x: f64| float_str(x).unwrap_or_default();
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                rat_str(r.weight.h()),
                rat_str(&r.weight.hbar()),
                r.m.to_string(),
                r.n.to_string(),
                f(r.hs_norm),
                r.decay_order_min.to_string(),
                match &r.asymptotic_scalar {
                    Limit::Finite(c) => scalar_str(c),
                    Limit::Diverges => "diverges".into(),
                },
                f(r.finite_rank_norm),
            ]
        })
        .collect();
    csv_text(&SWEEP_HEADER, rows)
}

/// Nonzero entries of the `n × n` monomial truncation as `row, col, re, im`.
pub fn truncation_csv(op: &BandOperator, n: usize) -> String {
    let rows = op
        .truncate_monomial(n)
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                .map(move |(c, v)| vec![r.to_string(), c.to_string(), rat_str(&v.re), rat_str(&v.im)])
        })
        .collect();
    csv_text(&["row", "col", "re", "im"], rows)
}

pub fn scaling_json(result: &ScalingResult) -> Value {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            weight_fields(&mut m, &r.weight);
            m.insert("hbar_f64".into(), float_json(r.hbar));
            m.insert("hs_norm".into(), float_json(r.hs_norm));
            Value::Object(m)
        })
        .collect();
    let fit = match &result.fit {
        ScalingFit::Slope { slope, terminal_slope } => {
            json!({"exact_zero": false, "slope": float_json(*slope), "terminal_slope": float_json(*terminal_slope)})
        }
        ScalingFit::ExactZero => json!({"exact_zero": true, "slope": null, "terminal_slope": null}),
    };
    json!({"rows": rows, "fit": fit})
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
