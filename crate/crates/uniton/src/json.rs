//! JSON formats for scalars, loops, specs and reports.
//!
//! Exact scalars are strings such as `"-3/4+5/6i"`. A rational function of
//! `z` is `{"num": [c_0, c_1, …], "den": [d_0, …]}` with coefficients in
//! ascending powers. Complex floats are `[re, im]`, written with 17
//! significant digits. Matrices are flat row-major arrays. Object keys come
//! out sorted, so equal inputs give byte-identical output, and unknown keys
//! are rejected on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use uniton_core::loops::{ExactLoop, LoopMat, NumLoop};
use uniton_core::matrix::{CMat, Mat};
use uniton_core::scalar::{GPoly, GaussianRational, RatFun, Scalar};
use uniton_core::verify::{Evidence, VerificationReport};
use uniton_core::weierstrass::{ExtendedSolutionSpec, Slot};

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
}

fn invalid(path: &str, msg: impl Into<String>) -> SchemaError {
    SchemaError::Invalid { path: path.to_string(), msg: msg.into() }
}

/// An object with a fixed key set.
struct Obj<'a> {
    path: &'a str,
    map: &'a Map<String, Value>,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &'a str, allowed: &[&str]) -> Result<Self, SchemaError> {
        let map = v.as_object().ok_or_else(|| invalid(path, "expected an object"))?;
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(path, format!("unknown key \"{k}\"")));
        }
        Ok(Obj { path, map })
    }

    fn get(&self, key: &str) -> Result<&'a Value, SchemaError> {
        self.map.get(key).ok_or_else(|| invalid(self.path, format!("missing key \"{key}\"")))
    }

    fn child(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn integer(v: &Value, path: &str) -> Result<i64, SchemaError> {
    v.as_i64().ok_or_else(|| invalid(path, "expected an integer"))
}

fn float_in(v: &Value, path: &str) -> Result<f64, SchemaError> {
    v.as_f64().ok_or_else(|| invalid(path, "expected a number"))
}

/// Finite floats with 17 significant digits, `null` otherwise.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
    } else {
        Value::Null
    }
}

pub fn complex(c: Complex64) -> Value {
    Value::Array(vec![float(c.re), float(c.im)])
}

pub fn parse_complex(v: &Value, path: &str) -> Result<Complex64, SchemaError> {
    match array(v, path)?.as_slice() {
        [re, im] => Ok(Complex64::new(float_in(re, path)?, float_in(im, path)?)),
        _ => Err(invalid(path, "expected [re, im]")),
    }
}

pub fn exact(g: &GaussianRational) -> Value {
    Value::String(g.to_string())
}

pub fn parse_exact(v: &Value, path: &str) -> Result<GaussianRational, SchemaError> {
    let s = v.as_str().ok_or_else(|| invalid(path, "expected a string like \"1/2-3i\""))?;
    s.parse().map_err(|_| invalid(path, format!("cannot parse \"{s}\" as a Gaussian rational")))
}

fn poly(p: &GPoly) -> Value {
    Value::Array(p.coeffs().iter().map(exact).collect())
}

fn parse_poly(v: &Value, path: &str) -> Result<GPoly, SchemaError> {
    let coeffs = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_exact(c, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GPoly::new(coeffs))
}

pub fn ratfun(r: &RatFun) -> Value {
    let mut m = Map::new();
    m.insert("num".into(), poly(r.num()));
    m.insert("den".into(), poly(r.den()));
    Value::Object(m)
}

pub fn parse_ratfun(v: &Value, path: &str) -> Result<RatFun, SchemaError> {
    let o = Obj::new(v, path, &["num", "den"])?;
    let num = parse_poly(o.get("num")?, &o.child("num"))?;
    let den = parse_poly(o.get("den")?, &o.child("den"))?;
    RatFun::new(num, den).ok_or_else(|| invalid(path, "zero denominator"))
}

fn matrix<S: Scalar>(m: &Mat<S>, entry: impl Fn(&S) -> Value) -> Value {
    Value::Array(m.data().iter().map(entry).collect())
}

fn parse_matrix<S: Scalar>(
    v: &Value,
    n: usize,
    path: &str,
    entry: impl Fn(&Value, &str) -> Result<S, SchemaError>,
) -> Result<Mat<S>, SchemaError> {
    let items = array(v, path)?;
    if items.len() != n * n {
        return Err(invalid(path, format!("expected {} entries, got {}", n * n, items.len())));
    }
    let data = items.iter().enumerate().map(|(i, x)| entry(x, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    Ok(Mat::from_rows(n, n, data).expect("length checked"))
}

/// `{"n": …, "entries": [[re, im], …]}`.
pub fn cmat(m: &CMat) -> Value {
    let mut o = Map::new();
    o.insert("n".into(), Value::from(m.rows()));
    o.insert("entries".into(), matrix(m, |c| complex(*c)));
    Value::Object(o)
}

pub fn exact_matrix(m: &Mat<RatFun>) -> Value {
    let mut o = Map::new();
    o.insert("n".into(), Value::from(m.rows()));
    o.insert("entries".into(), matrix(m, ratfun));
    Value::Object(o)
}

/// A loop read from a file: exact or numeric coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLoop {
    Exact(ExactLoop),
    Numeric(NumLoop),
}

fn loop_value<S: Scalar>(l: &LoopMat<S>, kind: &str, entry: impl Fn(&S) -> Value) -> Value {
    let mut o = Map::new();
    o.insert("n".into(), Value::from(l.n()));
    o.insert("lo".into(), Value::from(l.lo()));
    o.insert("kind".into(), Value::from(kind));
    o.insert("coeffs".into(), Value::Array(l.coeffs().iter().map(|c| matrix(c, &entry)).collect()));
    Value::Object(o)
}

pub fn exact_loop(l: &ExactLoop) -> Value {
    loop_value(l, "exact", ratfun)
}

pub fn numeric_loop(l: &NumLoop) -> Value {
    loop_value(l, "numeric", |c| complex(*c))
}

pub fn parse_loop(v: &Value, path: &str) -> Result<AnyLoop, SchemaError> {
    let o = Obj::new(v, path, &["n", "lo", "kind", "coeffs"])?;
    let n = usize::try_from(integer(o.get("n")?, &o.child("n"))?).map_err(|_| invalid(path, "n must be positive"))?;
    if n == 0 {
        return Err(invalid(&o.child("n"), "n must be positive"));
    }
    let lo = i32::try_from(integer(o.get("lo")?, &o.child("lo"))?).map_err(|_| invalid(&o.child("lo"), "out of range"))?;
    let kind = o.get("kind")?.as_str().ok_or_else(|| invalid(&o.child("kind"), "expected a string"))?;
    let coeffs_path = o.child("coeffs");
    let raw = array(o.get("coeffs")?, &coeffs_path)?;
    let bad_loop = |e: uniton_core::loops::LoopError| invalid(path, e.to_string());
    match kind {
        "exact" => {
            let coeffs = raw
                .iter()
                .enumerate()
                .map(|(k, c)| parse_matrix(c, n, &format!("{coeffs_path}[{k}]"), parse_ratfun))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyLoop::Exact(LoopMat::new(n, lo, coeffs).map_err(bad_loop)?))
        }
        "numeric" => {
            let coeffs = raw
                .iter()
                .enumerate()
                .map(|(k, c)| parse_matrix(c, n, &format!("{coeffs_path}[{k}]"), parse_complex))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyLoop::Numeric(LoopMat::new(n, lo, coeffs).map_err(bad_loop)?))
        }
        other => Err(invalid(&o.child("kind"), format!("expected \"exact\" or \"numeric\", got \"{other}\""))),
    }
}

/// `{"n", "exponents", "even_only", "slots": {"c{j}_{i}[a,b]": RatFun}}`.
pub fn spec(s: &ExtendedSolutionSpec) -> Value {
    let mut slots = Map::new();
    for (slot, f) in s.slots() {
        slots.insert(slot.name(s.exponents()), ratfun(f));
    }
    let mut o = Map::new();
    o.insert("n".into(), Value::from(s.n()));
    o.insert("exponents".into(), Value::from(s.exponents().to_vec()));
    o.insert("even_only".into(), Value::from(s.even_only()));
    o.insert("slots".into(), Value::Object(slots));
    Value::Object(o)
}

pub fn parse_exponents(v: &Value, path: &str) -> Result<Vec<i32>, SchemaError> {
    array(v, path)?
        .iter()
        .map(|e| integer(e, path).and_then(|k| i32::try_from(k).map_err(|_| invalid(path, "exponent out of range"))))
        .collect()
}

/// Slot-name → rational-function map, names checked against `exponents`.
pub fn parse_slot_map(v: &Value, exponents: &[i32], path: &str) -> Result<BTreeMap<Slot, RatFun>, SchemaError> {
    let map = v.as_object().ok_or_else(|| invalid(path, "expected an object of slot names"))?;
    let mut out = BTreeMap::new();
    for (name, f) in map {
        let p = format!("{path}.{name}");
        let slot = Slot::parse(name, exponents).map_err(|e| invalid(&p, e.to_string()))?;
        out.insert(slot, parse_ratfun(f, &p)?);
    }
    Ok(out)
}

pub fn parse_spec(v: &Value, path: &str) -> Result<ExtendedSolutionSpec, SchemaError> {
    let o = Obj::new(v, path, &["n", "exponents", "even_only", "slots"])?;
    let n = integer(o.get("n")?, &o.child("n"))?;
    let exponents = parse_exponents(o.get("exponents")?, &o.child("exponents"))?;
    if exponents.len() as i64 != n {
        return Err(invalid(&o.child("exponents"), format!("expected {n} exponents")));
    }
    let even_only = o.get("even_only")?.as_bool().ok_or_else(|| invalid(&o.child("even_only"), "expected a boolean"))?;
    let slots = parse_slot_map(o.get("slots")?, &exponents, &o.child("slots"))?;
    ExtendedSolutionSpec::new(exponents, slots, even_only).map_err(|e| invalid(path, e.to_string()))
}

fn evidence(e: &Evidence) -> Value {
    let mut o = Map::new();
    match e {
        Evidence::ExactZero => {
            o.insert("kind".into(), Value::from("exact_zero"));
        }
        Evidence::Witness(w) => {
            o.insert("kind".into(), Value::from("witness"));
            o.insert("detail".into(), Value::from(w.as_str()));
        }
        Evidence::ByConstruction => {
            o.insert("kind".into(), Value::from("by_construction"));
        }
        Evidence::Residual(r) => {
            o.insert("kind".into(), Value::from("residual"));
            o.insert("value".into(), float(*r));
        }
        Evidence::Integers(a, b) => {
            o.insert("kind".into(), Value::from("integers"));
            o.insert("observed".into(), Value::from(*a));
            o.insert("bound".into(), Value::from(*b));
        }
    }
    Value::Object(o)
}

/// `{"context", "pass", "checks": [{"name", "pass", "evidence"}]}`.
pub fn report(r: &VerificationReport) -> Value {
    let checks = r
        .checks
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), Value::from(c.name.as_str()));
            o.insert("pass".into(), Value::from(c.pass));
            o.insert("evidence".into(), evidence(&c.evidence));
            Value::Object(o)
        })
        .collect();
    let mut o = Map::new();
    o.insert("context".into(), Value::from(r.context.as_str()));
    o.insert("pass".into(), Value::from(r.passed()));
    o.insert("checks".into(), Value::Array(checks));
    Value::Object(o)
}

/// Pretty-printed with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn from_text(s: &str) -> Result<Value, SchemaError> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64, r: i64, s: i64) -> GaussianRational {
        GaussianRational::from_fracs(p, q, r, s)
    }

    #[test]
    fn ratfun_round_trip() {
        let r = RatFun::new(GPoly::new(vec![g(1, 2, 0, 1), g(0, 1, -3, 4)]), GPoly::new(vec![g(2, 1, 0, 1), g(1, 1, 0, 1)])).unwrap();
        let v = ratfun(&r);
        assert_eq!(parse_ratfun(&v, "$").unwrap(), r);
        let text = to_text(&v);
        assert_eq!(parse_ratfun(&from_text(&text).unwrap(), "$").unwrap(), r);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let v = from_text(r#"{"num": ["1"], "den": ["1"], "extra": 0}"#).unwrap();
        let err = parse_ratfun(&v, "$").unwrap_err();
        assert!(err.to_string().contains("unknown key \"extra\""));
        let zero_den = from_text(r#"{"num": ["1"], "den": []}"#).unwrap();
        assert!(parse_ratfun(&zero_den, "$").is_err());
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(-2.0).to_string(), "-2.0000000000000000e+0");
        assert_eq!(float(f64::NAN), Value::Null);
        let back = float_in(&float(std::f64::consts::PI), "$").unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn loops_round_trip() {
        let gamma = LoopMat::<RatFun>::gamma(&[2, 1, 0]);
        assert_eq!(parse_loop(&exact_loop(&gamma), "$").unwrap(), AnyLoop::Exact(gamma));
        let num = LoopMat::<Complex64>::gamma(&[1, 0]).shift(-1);
        let v = from_text(&to_text(&numeric_loop(&num))).unwrap();
        assert_eq!(parse_loop(&v, "$").unwrap(), AnyLoop::Numeric(num));
        let bad = from_text(r#"{"n": 2, "lo": 0, "kind": "exact", "coeffs": [["1"]]}"#).unwrap();
        assert!(parse_loop(&bad, "$").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let s = uniton_core::weierstrass::veronese_solution(3).unwrap();
        let text = to_text(&spec(&s));
        assert_eq!(parse_spec(&from_text(&text).unwrap(), "$").unwrap(), s);
        assert_eq!(to_text(&spec(&s)), text);
        let wrong_n = text.replacen("\"n\": 3", "\"n\": 4", 1);
        assert!(parse_spec(&from_text(&wrong_n).unwrap(), "$").is_err());
    }
}
