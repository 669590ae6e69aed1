//! Result sinks: JSON lines or CSV with flattened columns.

use super::config::OutputFormat;
use crate::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::io::Write;

/// Flatten nested JSON into `(dotted.key, text)` pairs. Arrays of scalars
/// become space-separated cells; arrays of objects are indexed.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                walk(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            if let Some(cells) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push((prefix.to_string(), cells.join(" ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    walk(&key(&i.to_string()), x, out);
                }
            }
        }
        _ => out.push((prefix.to_string(), scalar(v).unwrap_or_default())),
    }
}

/// Streams records in order. CSV takes its header from the first record;
/// later records are aligned to it.
pub struct RowSink<W: Write> {
    format: OutputFormat,
    json: Option<W>,
    csv: Option<csv::Writer<W>>,
    header: Option<Vec<String>>,
}

impl<W: Write> RowSink<W> {
    pub fn new(format: OutputFormat, writer: W) -> Self {
        match format {
            OutputFormat::Json => RowSink { format, json: Some(writer), csv: None, header: None },
            OutputFormat::Csv => RowSink { format, json: None, csv: Some(csv::Writer::from_writer(writer)), header: None },
        }
    }

    pub fn format(&self) -> OutputFormat {
        self.format
    }

    pub fn write<T: Serialize>(&mut self, row: &T) -> Result<()> {
        if let Some(w) = self.json.as_mut() {
            serde_json::to_writer(&mut *w, row)?;
            w.write_all(b"\n")?;
            w.flush()?;
            return Ok(());
        }
        let w = self.csv.as_mut().expect("csv sink");
        let flat = flatten(&serde_json::to_value(row)?);
        if self.header.is_none() {
            let h: Vec<String> = flat.iter().map(|(k, _)| k.clone()).collect();
            w.write_record(&h).map_err(csv_err)?;
            self.header = Some(h);
        }
        let header = self.header.as_ref().unwrap();
        let record: Vec<&str> = header
            .iter()
            .map(|k| flat.iter().find(|(x, _)| x == k).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(&record).map_err(csv_err)?;
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening() {
        let v = json!({"N": 15, "deltas": [{"freq": [1, 0], "delta": 0.5}], "error": null});
        let f = flatten(&v);
        assert!(f.contains(&("deltas.0.freq".into(), "1 0".into())));
        assert!(f.contains(&("deltas.0.delta".into(), "0.5".into())));
        assert!(f.contains(&("error".into(), "".into())));
    }

    #[test]
    fn csv_and_json() {
        let mut buf = Vec::new();
        {
            let mut s = RowSink::new(OutputFormat::Csv, &mut buf);
            s.write(&json!({"a": 1, "b": [2, 3]})).unwrap();
            s.write(&json!({"a": 4, "b": [5]})).unwrap();
        }
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,2 3\n4,5\n");
        let mut buf = Vec::new();
        RowSink::new(OutputFormat::Json, &mut buf).write(&json!({"a": 1})).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"a\":1}\n");
    }
}
