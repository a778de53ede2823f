//! Headered CSV with `.` decimals and LF line endings, independent of locale.

use std::fmt::Write as _;

/// `value` to 12 significant digits: plain decimal for magnitudes in
/// `[1e-5, 1e12)`, scientific otherwise.
pub fn format_value(value: f64) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let exp = value.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, value)
    } else {
        format!("{value:.11e}")
    }
}

/// SNR in dB with floating-point noise from grid stepping removed.
pub fn format_db(db: f64) -> String {
    let rounded = (db * 1e9).round() / 1e9;
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut w = Self::default();
        w.row(header);
        w
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        for (i, field) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{}", field.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
