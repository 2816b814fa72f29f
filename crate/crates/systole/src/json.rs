//! Exact values serialize as strings (`"p/q"` for rationals, decimal for
//! integers); floats appear only under keys ending in `_approx`.

use num_bigint::BigInt;
use serde_json::{json, Value};
use systole_core::arith::Rat;
use systole_core::quadform::GramMatrix;
use systole_core::signrev::{PeriodLine, PosDefGram};

pub fn rat(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn int(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn line(l: &PeriodLine) -> Value {
    ints(l.coords())
}

/// Non-finite floats become `null`.
pub fn approx(x: f64) -> Value {
    json!(x)
}

pub fn gram(q: &GramMatrix) -> Value {
    Value::Array(q.rows().map(ints).collect())
}

pub fn rational_gram(g: &PosDefGram) -> Value {
    let n = g.rank();
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| rat(&g.entry(i, j))).collect())).collect())
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
