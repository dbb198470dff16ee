//! Output rendering: aligned tables and stable JSON.
//!
//! JSON output is byte-stable per input: field order is fixed by the struct
//! definitions (or BTreeMap key order) and every float is rounded to 12
//! significant digits before serialization.

use serde_json::Value;

/// Rounds to 12 significant digits for stable JSON number formatting.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round-trip")
}

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(number) => {
            if number.is_f64() {
                if let Some(f) = number.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Serializes `value` as pretty JSON with rounded floats and a trailing
/// newline.
pub fn to_stable_json(value: impl serde::Serialize) -> String {
    let mut value = serde_json::to_value(value).expect("serializable");
    round_floats(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("valid JSON value");
    text.push('\n');
    text
}

/// Right-aligns rows under right-aligned headers with two-space separators.
pub fn aligned_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, header) in headers.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        out.push_str(&format!("{header:>width$}", width = widths[i]));
    }
    out.push('\n');
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{cell:>width$}", width = widths[i]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round_sig(-1.0), -1.0);
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn integers_survive_json_rounding() {
        let text = to_stable_json(serde_json::json!({"g": 2u64, "t": -0.1f64}));
        assert!(text.contains("\"g\": 2"));
        assert!(text.contains("\"t\": -0.1"));
    }

    #[test]
    fn table_alignment() {
        let table = aligned_table(
            &["N", "p(N)"],
            &[vec!["1".into(), "1".into()], vec!["10".into(), "42".into()]],
        );
        assert_eq!(table, " N  p(N)\n 1     1\n10    42\n");
    }
}
