//! Rendering of result tables as CSV or JSON.

use kuo_core::{CurveTable, KuoError};

use crate::config::Format;

/// Tables separated by one blank line.
pub fn render_csv(tables: &[CurveTable]) -> String {
    tables
        .iter()
        .map(|t| t.to_csv())
        .collect::<Vec<_>>()
        .join("\n")
}

/// A single table as one JSON object, several as an array.
pub fn render_json(tables: &[CurveTable]) -> String {
    match tables {
        [one] => one.to_json(),
        many => {
            let parts: Vec<String> = many.iter().map(|t| t.to_json().trim_end().to_string()).collect();
            format!("[\n{}\n]\n", parts.join(",\n"))
        }
    }
}

pub fn render(tables: &[CurveTable], format: Format) -> String {
    match format {
        Format::Csv => render_csv(tables),
        Format::Json => render_json(tables),
    }
}

/// Inverse of [`render_csv`].
pub fn parse_tables(text: &str) -> Result<Vec<CurveTable>, KuoError> {
    let mut tables = Vec::new();
    let mut block = String::new();
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if !block.is_empty() {
                tables.push(CurveTable::from_csv(&block)?);
                block.clear();
            }
        } else {
            block.push_str(line);
        }
    }
    if !block.is_empty() {
        tables.push(CurveTable::from_csv(&block)?);
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(name: &str) -> CurveTable {
        let mut t = CurveTable::new("x", &["y", "error_estimate"]).with_meta("table", name);
        t.push(vec![1.0, 0.1, 1e-12]);
        t.push(vec![2.0, -0.2, 1e-12]);
        t
    }

    #[test]
    fn multi_table_round_trip() {
        let tables = vec![sample("a"), sample("b")];
        let text = render_csv(&tables);
        assert!(!text.contains('\r'));
        let back = parse_tables(&text).unwrap();
        assert_eq!(back, tables);
        assert_eq!(render_csv(&back), text);
    }

    #[test]
    fn json_shapes() {
        assert!(render_json(&[sample("a")]).starts_with('{'));
        assert!(render_json(&[sample("a"), sample("b")]).starts_with('['));
    }
}
