use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Map, Value as Json};

/// Significant digits of every printed float.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Empty, Into::into)
    }
}

/// `%g`-style rendering with `digits` significant digits.
pub fn format_float(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format_float(*v, FLOAT_DIGITS),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Empty => String::new(),
        }
    }

    // the float as printed, so both renderings carry the same numbers
    fn to_json(&self) -> Json {
        match self {
            Value::Int(v) => json!(v),
            Value::Float(v) if v.is_finite() => json!(format_float(*v, FLOAT_DIGITS).parse::<f64>().unwrap()),
            Value::Float(v) => json!(format_float(*v, FLOAT_DIGITS)),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
            Value::Empty => Json::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub metadata: BTreeMap<String, String>,
}

impl Report {
    /// The first column is always `quantity`, naming what each row reports.
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        let mut cols = vec!["quantity".to_string()];
        cols.extend(columns.iter().map(|c| c.to_string()));
        Self { schema: schema.into(), columns: cols, rows: Vec::new(), metadata: BTreeMap::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    /// Add a row by column name; unnamed columns stay empty.
    pub fn push(&mut self, quantity: &str, cells: Vec<(&str, Value)>) {
        let mut row = vec![Value::Empty; self.columns.len()];
        row[0] = Value::Text(quantity.into());
        for (name, v) in cells {
            let i = self
                .columns
                .iter()
                .position(|c| c == name)
                .unwrap_or_else(|| panic!("report {} has no column {name}", self.schema));
            row[i] = v;
        }
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write, meta_line: Option<&str>) -> anyhow::Result<()> {
        let mut out = out;
        if let Some(line) = meta_line {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, generated: Option<&str>) -> Json {
        let mut meta: Map<String, Json> = self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        if let Some(g) = generated {
            meta.insert("generated".into(), json!(g));
        }
        json!({
            "schema": self.schema,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Value::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "metadata": meta,
        })
    }

    pub fn meta_line(&self, generated: &str) -> String {
        let mut parts = vec![format!("schema={}", self.schema), format!("generated={generated}")];
        parts.extend(self.metadata.iter().map(|(k, v)| format!("{k}={v}")));
        parts.join(" ")
    }
}
