use std::io::Write;

use serde_json::{json, Map, Value};
use stablelike_core::fractal::DimValue;

/// One field of a report row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Dim(DimValue),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<DimValue> for Cell {
    fn from(x: DimValue) -> Self {
        Cell::Dim(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(x) => x.to_string(),
            Cell::Bool(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Dim(d) => d.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(x) => json!(x),
            Cell::Bool(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Dim(d) => serde_json::to_value(d).expect("DimValue serialises"),
            Cell::Missing => Value::Null,
        }
    }
}

/// A rectangular report, written as CSV with a header or as a JSON array of
/// objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["h", "value", "note"]);
        t.push(vec![0.5.into(), DimValue::NegInfinity.into(), Cell::Missing]);
        t.push(vec![1.0.into(), DimValue::Finite(0.25).into(), Cell::Text("x".into())]);
        t
    }

    #[test]
    fn negative_infinity_is_a_literal_in_csv() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "h,value,note");
        assert_eq!(lines[1], "5.0000000000000000e-1,-inf,");
        assert!(lines[2].ends_with(",x"));
    }

    #[test]
    fn negative_infinity_is_null_with_a_flag_in_json() {
        let v = sample().to_json();
        assert_eq!(v[0]["value"], json!({"value": null, "neg_inf": true}));
        assert_eq!(v[1]["value"], json!({"value": 0.25, "neg_inf": false}));
        assert_eq!(v[0]["note"], Value::Null);
    }
}
