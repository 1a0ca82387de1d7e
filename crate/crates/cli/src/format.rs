use std::fmt::Write;

/// Twelve significant digits, plain decimal where that stays readable.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Aligned `name  value` lines.
#[derive(Default)]
pub struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    pub fn row(&mut self, name: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.rows.push((name.into(), value.into()));
        self
    }

    pub fn num(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.row(name, sig12(value))
    }

    pub fn render(&self, out: &mut String, indent: &str) {
        let width = self.rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        for (n, v) in &self.rows {
            let _ = writeln!(out, "{indent}{n:<width$}  {v}");
        }
    }
}

/// Minimal CSV quoting; none of our fields need more.
pub fn csv_line(fields: &[String]) -> String {
    fields.join(",") + "\n"
}
