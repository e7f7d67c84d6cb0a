use std::fmt::Write as _;

use super::CliError;

/// Significant digits written for every value.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, `%g` style: fixed
/// notation for exponents in [-4, 12), scientific otherwise, trailing zeros
/// trimmed. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn format_value(x: f64) -> String {
    format_sig(x, SIG_DIGITS)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // rounding first fixes the exponent (9.9999999999995 -> 1e1)
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rectangular numeric table with a provenance header.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    header: Vec<String>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            header: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Numerical(format!(
                "row of {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Appends a `#` header line (without the marker).
    pub fn note(&mut self, line: impl Into<String>) {
        self.header.push(line.into());
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Reads back a CSV written by [`ResultTable::to_csv`]. `nan` cells parse as NaN.
pub fn parse_csv(name: &str, text: &str) -> Result<ResultTable, CliError> {
    let mut lines = text.lines();
    let mut header = Vec::new();
    let columns = loop {
        match lines.next() {
            Some(l) if l.starts_with('#') => {
                header.push(l.trim_start_matches('#').trim_start().to_string())
            }
            Some(l) => break l.split(',').map(str::to_string).collect::<Vec<_>>(),
            None => return Err(CliError::Usage("CSV has no column line".into())),
        }
    };
    let mut t = ResultTable {
        name: name.into(),
        columns,
        rows: Vec::new(),
        header,
    };
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("CSV data line {}: {e}", n + 1)))?;
        t.push_row(row)
            .map_err(|_| CliError::Usage(format!("CSV data line {} is not rectangular", n + 1)))?;
    }
    Ok(t)
}
