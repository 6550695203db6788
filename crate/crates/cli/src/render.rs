//! Plain-text tables for the human-readable reports.

use num_complex::Complex64;
use ratreal_core::ComplexMatrix;

fn is_real(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

pub fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{:.6}{sign}{:.6}i", z.re, z.im.abs())
    }
}

/// Right-aligned columns; imaginary parts only when some entry has one.
pub fn matrix(m: &ComplexMatrix) -> String {
    if m.nrows() == 0 || m.ncols() == 0 {
        return format!("  ({}x{} empty)\n", m.nrows(), m.ncols());
    }
    let real = is_real(m);
    let cells: Vec<Vec<String>> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    if real {
                        format!("{:.6}", z.re)
                    } else {
                        complex(z)
                    }
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        out.push_str("  [");
        let joined: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&joined.join("  "));
        out.push_str("]\n");
    }
    out
}

pub fn list(values: &[Complex64]) -> String {
    if values.is_empty() {
        return "(none)".into();
    }
    values.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(", ")
}

/// `key: value` lines with the keys padded to a common width.
pub fn pairs(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}
