use std::io::Write;

use serde_json::{Map, Value};

use crate::docs::SCHEMA_VERSION;

/// A command report: `key: value` lines for people, a JSON document for
/// machines. Lines keep insertion order, the document sorts its keys.
#[derive(Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
    order: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.fields.insert("command".into(), command.into());
        r.fields.insert("schema_version".into(), SCHEMA_VERSION.into());
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        if self.fields.insert(key.to_string(), value.into()).is_none() {
            self.order.push(key.to_string());
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn write(&self, out: &mut dyn Write, json: bool) -> std::io::Result<()> {
        if json {
            let mut s = serde_json::to_string_pretty(&self.fields).expect("reports serialize");
            s.push('\n');
            return out.write_all(s.as_bytes());
        }
        for key in &self.order {
            match &self.fields[key] {
                Value::String(s) => writeln!(out, "{key}: {s}")?,
                v => writeln!(out, "{key}: {v}")?,
            }
        }
        Ok(())
    }
}
