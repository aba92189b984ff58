//! Flat records and the three output formats.

use std::io::Write;

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Null,
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Bool(v) => v.to_string(),
            Value::Str(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Float(v) if !v.is_finite() => "null".into(),
            Value::Str(s) => serde_json::to_string(s).expect("string serialises"),
            Value::Null => "null".into(),
            other => other.text(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Ordered list of named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

/// Writes records. CSV output carries the main records only, with the
/// header taken from the first record; summaries go to standard error so the
/// CSV stays a single table. JSON output is one object per line with the
/// summary as the last line.
pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    csv_header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Self {
            format,
            out,
            csv_header: None,
        }
    }

    pub fn record(&mut self, rec: &Record) -> Result<(), CliError> {
        match self.format {
            Format::Human => {
                let width = rec.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &rec.0 {
                    writeln!(self.out, "{k:<width$}  {}", v.text())?;
                }
                writeln!(self.out)?;
            }
            Format::Json => writeln!(self.out, "{}", json_line(rec))?,
            Format::Csv => {
                let keys: Vec<String> = rec.keys().into_iter().map(String::from).collect();
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
                match &self.csv_header {
                    None => {
                        w.write_record(&keys).map_err(csv_err)?;
                        self.csv_header = Some(keys);
                    }
                    Some(h) if *h != keys => {
                        return Err(CliError::Internal("CSV records with different columns".into()));
                    }
                    Some(_) => {}
                }
                w.write_record(rec.0.iter().map(|(_, v)| v.text())).map_err(csv_err)?;
                let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
                self.out.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    pub fn summary(&mut self, rec: &Record) -> Result<(), CliError> {
        match self.format {
            Format::Csv => {
                let line: Vec<String> = rec.0.iter().map(|(k, v)| format!("{k}={}", v.text())).collect();
                eprintln!("{}", line.join(" "));
                Ok(())
            }
            _ => self.record(rec),
        }
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn json_line(rec: &Record) -> String {
    let fields: Vec<String> = rec
        .0
        .iter()
        .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json()))
        .collect();
    format!("{{{}}}", fields.join(","))
}
