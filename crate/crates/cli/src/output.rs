use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use gibbsnum::exactfield::format_rational;
use gibbsnum::Rational;
use serde_json::{json, Value};

/// A float as a JSON number rounded to `digits` significant digits; `±inf`
/// and `nan` become strings.
pub fn float(x: f64, digits: usize) -> Value {
    if !x.is_finite() {
        return json!(if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        });
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("formatted float");
    json!(rounded)
}

pub fn exact(r: &Rational) -> Value {
    json!(format_rational(r))
}

pub fn exact_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(exact).collect())
}

pub fn write_csv(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> Result<()> {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}
