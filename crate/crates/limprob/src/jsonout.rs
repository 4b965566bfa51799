//! Minimal JSON document builder. All floating-point values are printed with
//! 12 significant digits, which keeps CLI output byte-stable and matches the
//! internal tolerance regime.

use std::fmt;

#[derive(Debug, Clone)]
pub enum JVal {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Arr(Vec<JVal>),
    Obj(Vec<(String, JVal)>),
}

impl JVal {
    pub fn obj(fields: Vec<(&str, JVal)>) -> JVal {
        JVal::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> JVal {
        JVal::Str(s.into())
    }
}

/// Format with 12 significant digits, dropping trailing zeros. Keeps plain
/// decimal notation in a wide exponent window so small probabilities stay
/// readable.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return "null".to_string();
    }
    let formatted = format!("{:.*e}", 11, x);
    // split "d.dddddddddddEsNN"
    let (mantissa, exp) = formatted.split_once('e').expect("exp format");
    let exp: i32 = exp.parse().expect("exp digits");
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    if (-5..13).contains(&exp) {
        // Re-render positionally from the trimmed mantissa.
        let neg = mantissa.starts_with('-');
        let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
        let point = exp + 1; // digits before the decimal point
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..-point {
                out.push('0');
            }
            out.push_str(&digits);
        } else if (point as usize) >= digits.len() {
            out.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..point as usize]);
            out.push('.');
            out.push_str(&digits[point as usize..]);
        }
        out
    } else {
        format!("{mantissa}e{exp}")
    }
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_val(v: &JVal, indent: usize, out: &mut String) {
    match v {
        JVal::Null => out.push_str("null"),
        JVal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        JVal::Int(i) => out.push_str(&i.to_string()),
        JVal::UInt(u) => out.push_str(&u.to_string()),
        JVal::Float(x) => out.push_str(&format_sig(*x)),
        JVal::Str(s) => escape(s, out),
        JVal::Arr(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                write_val(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        JVal::Obj(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                escape(k, out);
                out.push_str(": ");
                write_val(val, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

impl fmt::Display for JVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_val(self, 0, &mut s);
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(0.93), "0.93");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(-2.5e-7), "-2.5e-7");
        assert_eq!(format_sig(0.9665003769870512), "0.966500376987");
        assert_eq!(format_sig(123456.0), "123456");
        assert_eq!(format_sig(1e20), "1e20");
    }

    #[test]
    fn renders_parseable_json() {
        let doc = JVal::obj(vec![
            ("name", JVal::str("x\"y")),
            ("value", JVal::Float(0.25)),
            ("items", JVal::Arr(vec![JVal::Int(1), JVal::Null, JVal::Bool(true)])),
            ("empty", JVal::Arr(vec![])),
        ]);
        let s = doc.to_string();
        assert!(s.contains("\"x\\\"y\""));
        assert!(s.contains("0.25"));
    }
}
