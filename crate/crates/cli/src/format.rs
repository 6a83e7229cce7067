//! Number and document formatting shared by the subcommands.

use std::fmt::Write;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn json_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

/// 9 significant digits.
pub fn csv_number(v: f64) -> String {
    format!("{v:.8e}")
}

/// `v` rounded to `digits` significant figures in positional notation.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let rounded = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (999.95 -> 1000.0).
    let carried = rounded.parse::<f64>().map_or(magnitude, |r| r.abs().log10().floor() as i64);
    if carried > magnitude && decimals > 0 {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        rounded
    }
}

pub enum Value {
    Number(f64),
    Integer(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Number(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Integer(v as u64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Flat JSON object with keys in insertion order.
#[derive(Default)]
pub struct JsonObject {
    fields: Vec<(&'static str, Value)>,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            escape(k, &mut out);
            out.push_str(": ");
            match v {
                Value::Number(x) => out.push_str(&json_number(*x)),
                Value::Integer(n) => out.push_str(&n.to_string()),
                Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                Value::Text(s) => escape(s, &mut out),
            }
        }
        out.push('}');
        out
    }
}
