//! Deterministic JSON and CSV text.
//!
//! Reals are written with 17 significant digits in scientific notation
//! (`{:.16e}`), which round-trips every `f64` exactly. Objects keep
//! insertion order.

use std::fmt::Write as _;

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(u64),
    Real(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Object(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn complex(z: Complex64) -> Json {
        Json::Array(vec![Json::Real(z.re), Json::Real(z.im)])
    }

    pub fn opt_real(x: Option<f64>) -> Json {
        x.map_or(Json::Null, Json::Real)
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    /// Pretty-printed with two-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => write!(out, "{n}").unwrap(),
            Json::Real(x) => out.push_str(&fmt_real_json(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("string escape")),
            Json::Array(items) if items.iter().all(Json::is_scalar) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, depth);
                }
                out.push(']');
            }
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    out.push_str(if i > 0 { ",\n" } else { "\n" });
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                }
                if !items.is_empty() {
                    out.push('\n');
                    indent(out, depth);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    out.push_str(if i > 0 { ",\n" } else { "\n" });
                    indent(out, depth + 1);
                    out.push_str(&serde_json::to_string(k).expect("key escape"));
                    out.push_str(": ");
                    v.write(out, depth + 1);
                }
                if !fields.is_empty() {
                    out.push('\n');
                    indent(out, depth);
                }
                out.push('}');
            }
        }
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Array(_) | Json::Object(_))
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// 17 significant digits, e.g. `7.5000000000000000e-1`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_real_json(x: f64) -> String {
    if x.is_finite() {
        fmt_real(x)
    } else {
        "null".to_string()
    }
}

/// CSV with a header row and LF line endings. Fields are written verbatim;
/// callers only pass numbers, booleans and labels without commas or quotes.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_significant_digits() {
        assert_eq!(fmt_real(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_real(1.0), "1.0000000000000000e0");
        let s = fmt_real(std::f64::consts::PI);
        let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
    }

    #[test]
    fn rendered_json_is_valid_and_ordered() {
        let doc = Json::object([
            ("z", Json::Real(0.1)),
            (
                "a",
                Json::Array(vec![Json::complex(Complex64::new(1.0, -2.0))]),
            ),
            ("n", Json::Null),
            ("s", Json::str("η_1|+ - +⟩ \"q\"")),
        ]);
        let text = doc.render();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["z"].as_f64(), Some(0.1));
        assert_eq!(parsed["a"][0][1].as_f64(), Some(-2.0));
        assert!(text.find("\"z\"").unwrap() < text.find("\"a\"").unwrap());
    }

    #[test]
    fn csv_layout() {
        let text = csv(&["x", "y"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(text, "x,y\n1,2\n");
    }
}
