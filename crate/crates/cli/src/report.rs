//! Reports: an ordered JSON object plus an aligned plain-text rendering.

use serde_json::{Map, Value};

use kstab_core::exact::rational::{fmt_rational, to_f64};
use kstab_core::Rational;

#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
    text: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::String(command.to_string()));
        Report { fields, text: None }
    }

    /// Replaces the generic plain-text rendering.
    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.fields.clone())).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        if let Some(t) = &self.text {
            return t.clone();
        }
        let width = self.fields.keys().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  - {}\n", inline(item)));
                    }
                }
                _ => out.push_str(&format!("{k:<width$}  {}\n", inline(v))),
            }
        }
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect::<Vec<_>>().join("  "),
        other => other.to_string(),
    }
}

pub fn r(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

pub fn rvec(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(r).collect())
}

pub fn approx(x: &Rational) -> Value {
    Value::String(format!("{:.9}", to_f64(x)))
}

pub fn strings<S: AsRef<str>>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(|s| Value::String(s.as_ref().to_string())).collect())
}
