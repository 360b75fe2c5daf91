use std::io::Write;
use std::path::Path;

use super::HarnessError;
use crate::admissibility::ScanTable;

/// Renders `x` like C's `%.9g`: nine significant digits, trailing zeros
/// dropped, exponent form outside `1e-4 ≤ |x| < 1e9`.
pub fn format_g9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form always has an 'e'");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes a scan table: swept parameters, `admissible`, `boundary`, then one
/// column per condition. LF line endings, rows in table order.
pub fn write_csv<W: Write>(table: &ScanTable, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<String> = table.params.iter().map(|p| p.name().to_string()).collect();
    header.extend(["admissible".to_string(), "boundary".to_string()]);
    header.extend(table.condition_names());
    w.write_record(&header)?;
    for row in &table.rows {
        let mut record: Vec<String> = row.values.iter().map(|&v| format_g9(v)).collect();
        record.push(row.verdict.admissible.to_string());
        record.push(row.verdict.boundary.to_string());
        record.extend(row.verdict.conditions.iter().map(|c| format_g9(c.value)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &ScanTable, path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(table, std::io::BufWriter::new(file)).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })
}
