use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leading columns locating each row in the corpus.
pub const IDENTITY_COLUMNS: [&str; 6] = ["su", "doc_id", "para_idx", "sent_idx", "start", "end"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Empty,
    Bool(bool),
    Number(f64),
    Text(String),
    List(Vec<Cell>),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn index(i: usize) -> Self {
        Cell::Number(i as f64)
    }

    /// Flat text form; list items are joined with `sep`.
    pub fn render(&self, sep: &str) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Bool(true) => "TRUE".into(),
            Cell::Bool(false) => "FALSE".into(),
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::List(items) => items
                .iter()
                .map(|c| c.render(sep))
                .collect::<Vec<_>>()
                .join(sep),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Empty => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Number(x) if x.fract() == 0.0 && x.abs() < 9.0e15 => Value::from(*x as i64),
            Cell::Number(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::List(items) => Value::Array(items.iter().map(Cell::to_json).collect()),
        }
    }
}

fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Rows of cells under named columns; identity columns come first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn feature_columns(&self) -> &[String] {
        &self.columns[IDENTITY_COLUMNS.len()..]
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        self.column(column)
            .and_then(|j| self.rows.get(row).map(|r| &r[j]))
    }

    /// Header of column names, `TRUE`/`FALSE` booleans, `|`-joined lists.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let to_err = |e: csv::Error| Error::Extraction {
            feature: "csv".into(),
            message: e.to_string(),
        };
        w.write_record(&self.columns).map_err(to_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render("|")))
                .map_err(to_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Extraction {
            feature: "csv".into(),
            message: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("cells are valid UTF-8"))
    }

    /// One JSON object per row, keys in column order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&self.row_json(row).to_string());
            out.push('\n');
        }
        out
    }

    pub fn row_json(&self, row: &[Cell]) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .columns
            .iter()
            .zip(row)
            .map(|(k, c)| (k.clone(), c.to_json()))
            .collect();
        serde_json::Value::Object(map)
    }
}
