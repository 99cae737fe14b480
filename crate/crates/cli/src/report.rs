//! JSON report values with 12 significant digits.

use serde_json::Value;

/// Round to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // Avoid printing "-0.0".
    Value::from(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn nums<'a>(xs: impl IntoIterator<Item = &'a f64>) -> Value {
    Value::Array(xs.into_iter().map(|x| num(*x)).collect())
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn print(report: &Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
}
