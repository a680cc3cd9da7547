//! Rendering of numbers and reports.
//!
//! Exact rationals are always strings `"num/den"`; floats are rounded to 12
//! significant digits and then written in shortest round-trip form, so a
//! report read back and re-rendered gives identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use frobsf::gl2::{DensityKind, LocalDensity};
use frobsf::Rational;
use serde_json::Value;

pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `x` rounded to 12 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Same rounding as [`float`], as CSV field text (empty for non-finite values).
pub fn float_field(x: f64) -> String {
    match float(x) {
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

pub fn kind(d: &LocalDensity) -> &'static str {
    match d.kind {
        DensityKind::Generic => "generic",
        DensityKind::Curve => "curve",
    }
}

/// Pretty JSON with a trailing LF.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// RFC 4180 quoting with LF record terminators.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

/// Writes the finished report once, to `path` or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut out = BufWriter::new(file);
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .context("cannot write to stdout")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rationals_and_floats() {
        let r: Rational = "-6/4".parse().unwrap();
        assert_eq!(rational(&r), "-3/2");
        assert_eq!(rational(&"1".parse().unwrap()), "1/1");
        assert_eq!(float(2.0 / 3.0).to_string(), "0.666666666667");
        assert_eq!(float(1.0).to_string(), "1.0");
        assert_eq!(float(123_456_789.012_345_67).to_string(), "123456789.012");
        assert_eq!(float(f64::INFINITY), Value::Null);
        assert_eq!(float_field(f64::NAN), "");
    }

    #[test]
    fn json_round_trips() {
        let value = json!({
            "zeta": float(1.0 / 7.0),
            "alpha": [float(1e-30), float(-2.5e17), "3/5"],
            "nested": {"b": 1, "a": Value::Null},
        });
        let text = render_json(&value);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(render_json(&back), text);
        assert!(text.find("zeta").unwrap() < text.find("alpha").unwrap());
    }

    #[test]
    fn csv_quoting() {
        let text = render_csv(
            &["name", "value"],
            &[
                vec!["a,b".into(), "say \"hi\"".into()],
                vec!["plain".into(), "1".into()],
            ],
        );
        assert_eq!(text, "name,value\n\"a,b\",\"say \"\"hi\"\"\"\nplain,1\n");
    }
}
