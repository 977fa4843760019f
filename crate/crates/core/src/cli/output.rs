use serde::Serialize;

/// C-style `%.12e`: `1.250000000000e-03`.
pub fn fmt_e12(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Header plus one row per sample, LF line endings.
pub fn csv_table(header: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt_e12(c[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Pretty JSON with a trailing newline; key order follows field order.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent() {
        assert_eq!(fmt_e12(0.00125), "1.250000000000e-03");
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-12345.0), "-1.234500000000e+04");
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(1e-300), "1.000000000000e-300");
    }

    #[test]
    fn table_layout() {
        let t = csv_table(&["x", "y"], &[&[0.0, 1.0], &[2.0, 3.0]]);
        assert_eq!(t.lines().count(), 3);
        assert!(t.starts_with("x,y\n0.000000000000e+00,2.000000000000e+00\n"));
        assert!(!t.contains('\r'));
    }
}
