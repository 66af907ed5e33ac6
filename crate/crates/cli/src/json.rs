//! Canonical JSON: fixed key order and every float as `{:.16e}`.

use serde::Serialize;
use serde_json::{Number, Value};
use std::str::FromStr;

/// Seventeen significant digits, enough to round-trip any `f64`, with an
/// explicitly signed exponent.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

fn canonicalise(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if !(n.is_i64() || n.is_u64()) {
                if let Some(f) = n.as_f64() {
                    *n = Number::from_str(&format_float(f)).expect("formatted float is a JSON number");
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalise),
        Value::Object(map) => map.values_mut().for_each(canonicalise),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> serde_json::Result<Value> {
    let mut v = serde_json::to_value(x)?;
    canonicalise(&mut v);
    Ok(v)
}

pub fn to_string<T: Serialize>(x: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&to_value(x)?)?;
    s.push('\n');
    Ok(s)
}
