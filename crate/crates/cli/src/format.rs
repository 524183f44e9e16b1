//! Diff-stable number formatting and table rendering.

use std::fmt::Write;

/// C-style `%.12e`: twelve mantissa digits, signed exponent of at least two digits.
pub fn e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

/// Renders rows either comma-separated or as right-aligned columns.
pub fn table(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Format::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &mut dyn Iterator<Item = &str>| {
                cells
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&mut header.iter().copied())).unwrap();
            for row in rows {
                writeln!(out, "{}", line(&mut row.iter().map(String::as_str))).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_style() {
        assert_eq!(e12(1.0), "1.000000000000e+00");
        assert_eq!(e12(-0.000123), "-1.230000000000e-04");
        assert_eq!(e12(0.0), "0.000000000000e+00");
        assert_eq!(e12(6.02e123), "6.020000000000e+123");
        assert_eq!(e12(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_and_text_tables() {
        let rows = vec![vec!["1".to_string(), "22".to_string()]];
        assert_eq!(table(&["a", "b"], &rows, Format::Csv), "a,b\n1,22\n");
        assert_eq!(table(&["a", "b"], &rows, Format::Text), "a   b\n1  22\n");
    }
}
