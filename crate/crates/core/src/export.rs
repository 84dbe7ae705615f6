//! CSV text helpers shared by the report writers.

/// 17-significant-digit scientific notation; parses back bit-exactly.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Joins pre-formatted cells into one CSV line (no quoting; cells are numeric
/// or simple identifiers).
pub fn csv_line<I, S>(cells: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (i, c) in cells.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(c.as_ref());
    }
    out
}
