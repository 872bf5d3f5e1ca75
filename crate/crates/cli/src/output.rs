use std::fmt::Write as _;

use qkit::io::format_number;
use serde_json::{Map, Value as Json};

#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Missing,
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format_number(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            // Round-trip through the CSV text so both formats agree digit for digit
            Value::Num(x) if x.is_finite() => {
                serde_json::Number::from_f64(format_number(*x).parse().unwrap_or(*x)).map_or(Json::Null, Json::Number)
            }
            Value::Num(_) | Value::Missing => Json::Null,
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as u64)
    }
}

impl From<u64> for Value {
    fn from(i: u64) -> Self {
        Value::Int(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Num)
    }
}

/// Command output: named scalars, or a table with an optional trailing
/// summary.
#[derive(Debug, Clone)]
pub enum Report {
    Pairs(Vec<(String, Value)>),
    Table { header: Vec<String>, rows: Vec<Vec<Value>>, summary: Vec<(String, Value)> },
}

#[derive(Debug, Default)]
pub struct Pairs(Vec<(String, Value)>);

impl Pairs {
    pub fn push(&mut self, name: &str, v: impl Into<Value>) {
        self.0.push((name.to_string(), v.into()));
    }

    pub fn into_report(self) -> Report {
        Report::Pairs(self.0)
    }
}

impl Report {
    /// Pairs become `measure,value` lines; a table summary becomes a
    /// final `# name=value,...` comment line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Pairs(pairs) => {
                out.push_str("measure,value\n");
                for (k, v) in pairs {
                    let _ = writeln!(out, "{k},{}", v.csv());
                }
            }
            Report::Table { header, rows, summary } => {
                let _ = writeln!(out, "{}", header.join(","));
                for row in rows {
                    let _ = writeln!(out, "{}", row.iter().map(Value::csv).collect::<Vec<_>>().join(","));
                }
                if !summary.is_empty() {
                    let parts: Vec<String> = summary.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
                    let _ = writeln!(out, "# {}", parts.join(","));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let object = |pairs: &[(String, Value)]| {
            Json::Object(pairs.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
        };
        let value = match self {
            Report::Pairs(pairs) => object(pairs),
            Report::Table { header, rows, summary } => {
                let rows = rows
                    .iter()
                    .map(|r| Json::Object(header.iter().cloned().zip(r.iter().map(Value::json)).collect()))
                    .collect();
                let mut top = Map::new();
                top.insert("rows".into(), Json::Array(rows));
                if !summary.is_empty() {
                    top.insert("summary".into(), object(summary));
                }
                Json::Object(top)
            }
        };
        let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
        s.push('\n');
        s
    }
}
